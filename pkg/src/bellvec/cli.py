"""Command line entry point: ``bellvec <subcommand>``.

Subcommands
-----------
family X|Y|Z n              print a family matrix as JSON
bound FILE --dim d ...      bounds of a matrix file
table1                      bounds of X4, Y4, Z4
table2                      exact Z_n ratios
realize STRATEGY_FILE       observables for a vector strategy
verify REALIZATION_FILE     re-check a realization file

The default seed comes from the ``BELLVEC_SEED`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import report
from .bell import EnumerationTooLarge, MatrixFormatError, build_family, dump_matrix, load_matrix
from .clifford import load_realization, realize_strategy, save_realization, verify_realization
from .vectors import OptimizerConfig, default_seed, gram_matrix, load_strategy, reduce_strategy


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts,
        rng_seed=args.seed,
        refine_with_simplex=args.simplex,
    )


def _emit_rows(rows, args) -> int:
    if args.json:
        print(report.rows_to_json(rows))
    elif args.csv:
        sys.stdout.write(report.rows_to_csv(rows))
    else:
        sys.stdout.write(report.rows_to_text(rows))
    return 0 if all(r.passed for r in rows) else 1


def cmd_family(args) -> int:
    print(dump_matrix(build_family(args.family, args.n)))
    return 0


def cmd_bound(args) -> int:
    rep = report.run_custom(args.file, args.dim, _config(args), realize=args.realize, out_dir=args.out_dir)
    if args.json:
        print(json.dumps(rep, sort_keys=True, indent=2))
    elif args.csv:
        print("dim,value,dim_effective,converged,provenance")
        for d, b in rep["bounds"].items():
            print(f"{d},{b['value']!r},{b['dim_effective']},{b['converged']},{b['provenance']}")
    else:
        print(f"matrix {rep['label'] or args.file}: {rep['m_a']} x {rep['m_b']}")
        if rep["lhv"] is None:
            print(f"  lhv   {rep['lhv_error']}")
        else:
            print(f"  lhv   {rep['lhv']:.10g}")
        for d, b in rep["bounds"].items():
            flag = "" if b["converged"] else "  (not converged)"
            print(f"  d={d:<3} {b['value']:.10g}  [{b['provenance']}]{flag}")
        if "realization" in rep:
            s = rep["realization"]
            status = "passed" if s["passed"] else "FAILED"
            print(f"  realization: dim_h={s['dim_h']} value={s['bell_value']:.10g} {status}")
    return 0 if rep["passed"] else 1


def cmd_table1(args) -> int:
    return _emit_rows(report.run_table1(_config(args)), args)


def cmd_table2(args) -> int:
    return _emit_rows(report.run_table2(n_large=args.n_large), args)


def cmd_realize(args) -> int:
    strategy = load_strategy(args.file)
    if not args.no_reduce:
        strategy = reduce_strategy(strategy)
    r = realize_strategy(strategy)
    m_a = strategy.a_vectors.shape[0]
    expected = gram_matrix(strategy)[:m_a, m_a:]
    summary = verify_realization(r, expected)
    out = args.output or "realization.json"
    save_realization(r, out, expected_correlations=expected.tolist())
    summary["file"] = out
    print(json.dumps(summary, sort_keys=True, indent=2))
    return 0 if summary["passed"] else 1


def cmd_verify(args) -> int:
    r, raw = load_realization(args.file)
    expected = raw.get("expected_correlations")
    M = load_matrix(args.matrix) if args.matrix else None
    summary = verify_realization(r, None if expected is None else np.array(expected), M)
    print(json.dumps(summary, sort_keys=True, indent=2))
    return 0 if summary["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bellvec", description="Bounds of correlation Bell inequalities.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt_flags(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="emit JSON")
        g.add_argument("--csv", action="store_true", help="emit CSV")

    def opt_flags(sp):
        sp.add_argument("--restarts", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=default_seed())
        sp.add_argument("--simplex", action="store_true", help="polish every restart with Nelder-Mead")

    sp = sub.add_parser("family", help="emit a family matrix")
    sp.add_argument("family", choices=["X", "Y", "Z", "x", "y", "z"])
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("bound", help="bounds of a matrix file")
    sp.add_argument("file")
    sp.add_argument("--dim", type=int, action="append", required=True)
    sp.add_argument("--realize", action="store_true")
    sp.add_argument("--out-dir")
    opt_flags(sp)
    fmt_flags(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("table1", help="bounds of X4, Y4, Z4")
    opt_flags(sp)
    fmt_flags(sp)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("table2", help="exact Z_n ratios")
    sp.add_argument("--n-large", type=int, default=10**6)
    fmt_flags(sp)
    sp.set_defaults(func=cmd_table2)

    sp = sub.add_parser("realize", help="observables for a strategy file")
    sp.add_argument("file")
    sp.add_argument("-o", "--output")
    sp.add_argument("--no-reduce", action="store_true", help="keep the strategy's ambient dimension")
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("verify", help="re-check a realization file")
    sp.add_argument("file")
    sp.add_argument("--matrix", help="matrix file for the Bell value")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MatrixFormatError, EnumerationTooLarge, ValueError, OSError) as exc:
        print(f"bellvec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
