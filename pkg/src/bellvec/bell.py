"""Correlation Bell matrices, the X/Y/Z inequality families and classical bounds.

A correlation Bell expression is fixed by a real matrix ``M`` with one row per
Alice setting and one column per Bob setting::

    B_M = sum_ij M[i, j] * a_i * b_j,    a_i, b_j in {+1, -1}

The classical (local hidden variable) bound is the maximum of ``B_M`` over
deterministic sign assignments.  Mixtures of deterministic strategies are not
modelled since an average never exceeds its largest member.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np

#: Largest Bob setting count for which exhaustive enumeration is attempted.
ENUMERATION_GUARD = 30

_CHUNK_BITS = 16

_FAMILY_RANGES = {"X": (2, 20), "Y": (2, 20), "Z": (2, 64)}


class EnumerationTooLarge(ValueError):
    """Raised when exhaustive sign enumeration would exceed the guard."""


class MatrixFormatError(ValueError):
    """Raised when a matrix file cannot be parsed."""


@dataclass(frozen=True)
class BellMatrix:
    """Coefficient matrix of a correlation Bell expression.

    Parameters
    ----------
    entries : array_like, shape (m_a, m_b)
        Row ``i`` belongs to Alice's setting ``i``, column ``j`` to Bob's ``j``.
    label : str, optional
        Family tag such as ``"X(4)"``.
    """

    entries: np.ndarray
    label: str | None = field(default=None)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"Bell matrix must be 2-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"Bell matrix needs m_a >= 1 and m_b >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Bell matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def m_a(self) -> int:
        return self.entries.shape[0]

    @property
    def m_b(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        if not isinstance(other, BellMatrix):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.label, self.entries.shape, self.entries.tobytes()))

    def to_dict(self) -> dict:
        return {
            "m_a": self.m_a,
            "m_b": self.m_b,
            "entries": self.entries.tolist(),
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BellMatrix":
        for key in ("m_a", "m_b", "entries"):
            if key not in data:
                raise MatrixFormatError(f"missing field {key!r}")
        m_a, m_b = data["m_a"], data["m_b"]
        entries = data["entries"]
        if not isinstance(entries, list) or len(entries) != m_a:
            raise MatrixFormatError(
                f"field 'entries': expected {m_a} rows, got "
                f"{len(entries) if isinstance(entries, list) else type(entries).__name__}"
            )
        for i, row in enumerate(entries):
            if not isinstance(row, list) or len(row) != m_b:
                raise MatrixFormatError(f"field 'entries' row {i}: expected {m_b} values")
        try:
            return cls(np.array(entries, dtype=float), label=data.get("label"))
        except (TypeError, ValueError) as exc:
            raise MatrixFormatError(f"field 'entries': {exc}") from exc


@dataclass(frozen=True)
class DeterministicStrategy:
    """Classical +-1 outcomes for every Alice and Bob setting."""

    a_signs: tuple
    b_signs: tuple

    def __post_init__(self):
        a = tuple(int(s) for s in self.a_signs)
        b = tuple(int(s) for s in self.b_signs)
        for s in a + b:
            if s not in (1, -1):
                raise ValueError(f"sign entries must be +1 or -1, got {s}")
        object.__setattr__(self, "a_signs", a)
        object.__setattr__(self, "b_signs", b)


def classical_value(M: BellMatrix, s: DeterministicStrategy) -> float:
    """Value of ``sum_ij M_ij a_i b_j`` for a deterministic strategy."""
    if len(s.a_signs) != M.m_a or len(s.b_signs) != M.m_b:
        raise ValueError(
            f"strategy has {len(s.a_signs)}x{len(s.b_signs)} signs, matrix is {M.m_a}x{M.m_b}"
        )
    total = 0.0
    for i in range(M.m_a):
        for j in range(M.m_b):
            total += float(M.entries[i, j]) * s.a_signs[i] * s.b_signs[j]
    return total


def _sign_block(start: int, stop: int, nbits: int) -> np.ndarray:
    # bit k of the pattern set -> b_k = -1; the last column is pinned to +1
    patterns = np.arange(start, stop, dtype=np.int64)
    bits = (patterns[:, None] >> np.arange(nbits, dtype=np.int64)) & 1
    signs = 1.0 - 2.0 * bits
    return np.hstack([signs, np.ones((len(patterns), 1))])


def classical_bound(M: BellMatrix) -> tuple[float, DeterministicStrategy]:
    """Maximum of the Bell expression over deterministic strategies.

    Enumerates Bob's sign vectors with the last sign fixed to ``+1`` (the
    expression is invariant under ``b -> -b``).  Alice answers each row with
    the sign of its inner sum, ``sign(0) = +1``.  Ties are broken towards the
    lowest bit pattern.

    Raises
    ------
    EnumerationTooLarge
        If ``M.m_b`` exceeds :data:`ENUMERATION_GUARD`.
    """
    if M.m_b > ENUMERATION_GUARD:
        raise EnumerationTooLarge(
            f"enumeration too large: m_b = {M.m_b} exceeds the guard of {ENUMERATION_GUARD}"
        )
    nbits = M.m_b - 1
    total = 1 << nbits
    chunk = 1 << _CHUNK_BITS
    best_val, best_b = -np.inf, None
    for start in range(0, total, chunk):
        signs = _sign_block(start, min(start + chunk, total), nbits)
        vals = np.abs(signs @ M.entries.T).sum(axis=1)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best_b = float(vals[k]), signs[k]
    inner = M.entries @ best_b
    a = np.where(inner >= 0, 1, -1)
    return best_val, DeterministicStrategy(tuple(a), tuple(best_b.astype(int)))


def _check_range(family: str, n: int) -> None:
    lo, hi = _FAMILY_RANGES[family]
    if not (lo <= n <= hi):
        raise ValueError(f"{family}_n requires {lo} <= n <= {hi}, got n = {n}")


def build_xn(n: int) -> BellMatrix:
    """X_n: one Alice setting per sign pattern ``(k_1..k_{n-1})``.

    Row for pattern ``k`` (read as a binary integer, ``k_1`` most significant)
    is ``((-1)^k_1, ..., (-1)^k_{n-1}, +1)``.
    """
    _check_range("X", n)
    rows = [
        [(-1) ** k for k in bits] + [1]
        for bits in itertools.product((0, 1), repeat=n - 1)
    ]
    return BellMatrix(np.array(rows, dtype=float), label=f"X({n})")


def build_yn(n: int) -> BellMatrix:
    """Y_n: rows ``b_i + b_j`` and ``b_i - b_j`` for every pair ``i < j``."""
    _check_range("Y", n)
    rows = []
    for i, j in itertools.combinations(range(n), 2):
        for sj in (1, -1):
            row = [0.0] * n
            row[i], row[j] = 1.0, float(sj)
            rows.append(row)
    return BellMatrix(np.array(rows), label=f"Y({n})")


def build_zn(n: int) -> BellMatrix:
    """Z_n: one row ``b_i - b_j`` for every pair ``i < j``."""
    _check_range("Z", n)
    rows = []
    for i, j in itertools.combinations(range(n), 2):
        row = [0.0] * n
        row[i], row[j] = 1.0, -1.0
        rows.append(row)
    return BellMatrix(np.array(rows), label=f"Z({n})")


BUILDERS = {"X": build_xn, "Y": build_yn, "Z": build_zn}


def build_family(family: str, n: int) -> BellMatrix:
    family = family.upper()
    if family not in BUILDERS:
        raise ValueError(f"unknown family {family!r}; expected one of X, Y, Z")
    return BUILDERS[family](n)


def family_lhv_bound(family: str, n: int) -> float:
    """Closed-form classical bound of the X, Y or Z family."""
    family = family.upper()
    if family not in _FAMILY_RANGES:
        raise ValueError(f"unknown family {family!r}; expected one of X, Y, Z")
    _check_range(family, n)
    if family == "X":
        h = (n + 1) // 2
        return float(h * comb(n, h))
    if family == "Y":
        return float(n * (n - 1))
    return float(n * n // 2)


def load_matrix(path) -> BellMatrix:
    """Read a matrix file.

    JSON files hold ``{"m_a", "m_b", "entries", "label"}``.  Anything that is
    not JSON is read as whitespace-delimited text: a header line ``m_a m_b``
    followed by one line per row.
    """
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        try:
            return BellMatrix.from_dict(data)
        except MatrixFormatError as exc:
            raise MatrixFormatError(f"{path}: {exc}") from exc
    return _parse_text_matrix(text, str(path))


def _parse_text_matrix(text: str, source: str) -> BellMatrix:
    lines = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise MatrixFormatError(f"{source}: empty matrix file")
    no, head = lines[0]
    if len(head) != 2:
        raise MatrixFormatError(f"{source}: line {no}: header must be 'm_a m_b'")
    try:
        m_a, m_b = int(head[0]), int(head[1])
    except ValueError as exc:
        raise MatrixFormatError(f"{source}: line {no}: header must hold two integers") from exc
    body = lines[1:]
    if len(body) != m_a:
        raise MatrixFormatError(f"{source}: expected {m_a} rows, found {len(body)}")
    rows = []
    for no, toks in body:
        if len(toks) != m_b:
            raise MatrixFormatError(f"{source}: line {no}: expected {m_b} values, got {len(toks)}")
        try:
            rows.append([float(t) for t in toks])
        except ValueError as exc:
            raise MatrixFormatError(f"{source}: line {no}: {exc}") from exc
    try:
        return BellMatrix(np.array(rows))
    except ValueError as exc:
        raise MatrixFormatError(f"{source}: {exc}") from exc


def dump_matrix(M: BellMatrix) -> str:
    # repr-based float serialisation round-trips exactly
    return json.dumps(M.to_dict())


def save_matrix(M: BellMatrix, path) -> None:
    Path(path).write_text(dump_matrix(M) + "\n")
