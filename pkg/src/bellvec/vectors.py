"""Dimension-restricted quantum bounds via unit-vector strategies.

For Bob's unit vectors ``b_j`` in ``R^d`` the best Alice vectors are the
normalised inner sums ``sum_j M_ij b_j``, so the bound reduces to maximising::

    F(b) = sum_i || sum_j M_ij b_j ||

over ``(S^{d-1})^{m_b}``.  ``d = 1`` is the classical bound, ``d = 2, 3`` the
qubit bounds and ``d = m_b`` the unrestricted quantum bound.

The optimiser is a batched see-saw (alternating exact maximisation of the
bilinear form over each party's vectors) run from many random starts, with
optional Nelder-Mead polishing.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .bell import ENUMERATION_GUARD, BellMatrix, classical_bound

UNIT_TOL = 1e-9
DEGENERATE_NORM = 1e-14
NONSMOOTH_NORM = 1e-10
TIE_TOL = 1e-12
POLISH_TOL = 1e-15
POLISH_BAND = 1e-6

SEED_ENV = "BELLVEC_SEED"


class NonsmoothPoint(ValueError):
    """Raised when the objective is not differentiable at the given point."""


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    """Normalise along the last axis; near-zero rows become ``e_1``."""
    norms = np.linalg.norm(v, axis=-1, keepdims=True)
    out = np.divide(v, norms, out=np.zeros_like(v), where=norms >= DEGENERATE_NORM)
    degenerate = norms[..., 0] < DEGENERATE_NORM
    if np.any(degenerate):
        out[degenerate] = 0.0
        out[degenerate, 0] = 1.0
    return out


@dataclass(frozen=True)
class VectorStrategy:
    """Unit vectors for both parties; rows of ``b_vectors`` and ``a_vectors``."""

    b_vectors: np.ndarray
    a_vectors: np.ndarray

    def __post_init__(self):
        b = np.array(self.b_vectors, dtype=float)
        a = np.array(self.a_vectors, dtype=float)
        if b.ndim != 2 or a.ndim != 2 or b.shape[1] != a.shape[1] or b.shape[1] < 1:
            raise ValueError(f"inconsistent vector shapes {a.shape} and {b.shape}")
        for name, v in (("b", b), ("a", a)):
            dev = np.abs(np.linalg.norm(v, axis=1) - 1.0)
            if dev.size and dev.max() > 1e-12:
                raise ValueError(f"{name}_vectors must have unit norm (max deviation {dev.max():.2e})")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "b_vectors", b)
        object.__setattr__(self, "a_vectors", a)

    @property
    def dim(self) -> int:
        return self.b_vectors.shape[1]

    @classmethod
    def from_b_vectors(cls, M: BellMatrix, b_vectors) -> "VectorStrategy":
        """Normalise ``b_vectors`` and attach Alice's optimal response."""
        b = _normalize_rows(np.array(b_vectors, dtype=float))
        return cls(b, derive_a_vectors(M, b))

    def to_dict(self) -> dict:
        return {"b_vectors": self.b_vectors.tolist(), "a_vectors": self.a_vectors.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "VectorStrategy":
        return cls(np.array(data["b_vectors"], dtype=float), np.array(data["a_vectors"], dtype=float))


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 1000
    seesaw_tol: float = 1e-10
    max_seesaw_iters: int = 10000
    refine_with_simplex: bool = False
    rng_seed: int = field(default_factory=default_seed)

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.seesaw_tol > 0:
            raise ValueError("seesaw_tol must be > 0")
        if self.max_seesaw_iters < 1:
            raise ValueError("max_seesaw_iters must be >= 1")


@dataclass(frozen=True)
class BoundResult:
    """Best strategy found for one ``(M, d)`` pair.

    The value is the best found over all restarts, not a certified optimum.
    ``restart_values`` holds the final objective of every restart in order.
    """

    value: float
    strategy: VectorStrategy
    restarts_used: int
    best_restart_index: int
    converged: bool
    dim_requested: int
    dim_effective: int
    rng_seed: int = 0
    restart_values: tuple = ()

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "dim_requested": self.dim_requested,
            "dim_effective": self.dim_effective,
            "b_vectors": self.strategy.b_vectors.tolist(),
            "a_vectors": self.strategy.a_vectors.tolist(),
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "rng_seed": self.rng_seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_b(M: BellMatrix, b_vectors) -> np.ndarray:
    b = np.asarray(b_vectors, dtype=float)
    if b.ndim != 2 or b.shape[0] != M.m_b:
        raise ValueError(f"expected {M.m_b} vectors of a common dimension, got shape {b.shape}")
    dev = np.abs(np.linalg.norm(b, axis=1) - 1.0)
    if dev.max() > UNIT_TOL:
        raise ValueError(f"b_vectors must be unit vectors (max norm deviation {dev.max():.2e})")
    return b


def objective(M: BellMatrix, b_vectors) -> float:
    """``sum_i || sum_j M_ij b_j ||``, the Bell value at Alice's best response."""
    b = _check_b(M, b_vectors)
    return float(np.linalg.norm(M.entries @ b, axis=1).sum())


def bilinear_value(M: BellMatrix, strategy: VectorStrategy) -> float:
    """``sum_ij M_ij a_i . b_j`` for the strategy's own Alice vectors."""
    return float(np.sum(M.entries * (strategy.a_vectors @ strategy.b_vectors.T)))


def derive_a_vectors(M: BellMatrix, b_vectors) -> np.ndarray:
    """Alice's optimal unit vectors: each inner sum, normalised.

    A row whose inner sum vanishes contributes nothing whatever Alice does;
    it gets the first basis vector.
    """
    b = _check_b(M, b_vectors)
    return _normalize_rows(M.entries @ b)


def seesaw_step(M: BellMatrix, strategy: VectorStrategy) -> VectorStrategy:
    """One round of alternating maximisation: update Alice, then Bob."""
    a = derive_a_vectors(M, strategy.b_vectors)
    b = _normalize_rows(M.entries.T @ a)
    return VectorStrategy(b, a)


def gradient(M: BellMatrix, b_vectors) -> np.ndarray:
    """Riemannian gradient of the objective on the product of spheres.

    Raises
    ------
    NonsmoothPoint
        If some inner sum has norm below ``1e-10``, where the norm is not
        differentiable.
    """
    b = _check_b(M, b_vectors)
    v = M.entries @ b
    norms = np.linalg.norm(v, axis=1)
    if norms.min() <= NONSMOOTH_NORM:
        i = int(np.argmin(norms))
        raise NonsmoothPoint(f"nonsmooth point: inner sum of row {i} has norm {norms[i]:.2e}")
    g = M.entries.T @ (v / norms[:, None])
    return g - np.sum(g * b, axis=1, keepdims=True) * b


def gram_matrix(strategy: VectorStrategy) -> np.ndarray:
    """Gram matrix of all Alice vectors followed by all Bob vectors."""
    x = np.vstack([strategy.a_vectors, strategy.b_vectors])
    g = x @ x.T
    return (g + g.T) / 2


def reduce_strategy(strategy: VectorStrategy, tol: float = 1e-9) -> VectorStrategy:
    """Re-express a strategy in an orthonormal basis of the span of its vectors.

    All inner products are preserved, so the Bell value and every correlation
    are unchanged, but the ambient dimension drops to the rank.
    """
    x = np.vstack([strategy.a_vectors, strategy.b_vectors])
    _, s, vt = np.linalg.svd(x, full_matrices=False)
    rank = max(1, int(np.sum(s > tol * max(1.0, s[0]))))
    y = _normalize_rows(x @ vt[:rank].T)
    m_a = strategy.a_vectors.shape[0]
    return VectorStrategy(y[m_a:], y[:m_a])


def _batch_values(Mt: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.einsum("ij,rjd->rid", Mt, b), axis=2).sum(axis=1)


def _seesaw_batch(M: np.ndarray, b: np.ndarray, tol: float, max_iters: int):
    """Run independent see-saws on a stack of starts ``b`` of shape (R, m_b, d)."""
    b = _normalize_rows(b)
    values = _batch_values(M, b)
    active = np.ones(len(b), dtype=bool)
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        a = _normalize_rows(np.einsum("ij,rjd->rid", M, b[idx]))
        nb = _normalize_rows(np.einsum("ij,rid->rjd", M, a))
        new = _batch_values(M, nb)
        gain = new - values[idx]
        b[idx] = nb
        values[idx] = new
        done = gain <= tol * np.maximum(np.abs(new), 1e-300)
        active[idx[done]] = False
    return b, values, ~active


def _simplex_refine(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = b.shape

    def neg(x):
        y = _normalize_rows(x.reshape(shape))
        return -np.linalg.norm(M @ y, axis=1).sum()

    res = minimize(
        neg, b.ravel(), method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 200 * b.size, "adaptive": True},
    )
    refined = _normalize_rows(res.x.reshape(shape))
    if -res.fun > np.linalg.norm(M @ b, axis=1).sum():
        return refined
    return b


def optimize_bound(M: BellMatrix, d: int, cfg: OptimizerConfig | None = None) -> BoundResult:
    """Best-found value of ``max <B_M>_d``.

    The requested dimension is clamped to ``m_b`` since Alice's optimal
    vectors always lie in the span of Bob's.  ``d = 1`` is solved exactly by
    enumeration when ``m_b`` is within the enumeration guard.

    Parameters
    ----------
    M : BellMatrix
    d : int
        Dimension of the real vector space the settings live in.
    cfg : OptimizerConfig, optional
        Restart count, tolerances and seed.

    Returns
    -------
    BoundResult
        Deterministic for a fixed ``cfg.rng_seed``.
    """
    cfg = cfg or OptimizerConfig()
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    d_eff = min(d, M.m_b)

    if d_eff == 1 and M.m_b <= ENUMERATION_GUARD:
        value, s = classical_bound(M)
        b = np.array(s.b_signs, dtype=float)[:, None]
        strategy = VectorStrategy(b, np.array(s.a_signs, dtype=float)[:, None])
        return BoundResult(value, strategy, 1, 0, True, d, d_eff, cfg.rng_seed, (value,))

    rng = np.random.default_rng(cfg.rng_seed)
    starts = rng.standard_normal((cfg.restarts, M.m_b, d_eff))
    b, values, converged = _seesaw_batch(M.entries, starts, cfg.seesaw_tol, cfg.max_seesaw_iters)
    # push the leading restarts to machine precision before picking a winner
    near = np.flatnonzero(values >= values.max() - POLISH_BAND * max(1.0, abs(values.max())))
    b[near], values[near], polished = _seesaw_batch(M.entries, b[near], POLISH_TOL, cfg.max_seesaw_iters)
    converged[near] &= polished
    if cfg.refine_with_simplex:
        for r in range(len(b)):
            b[r] = _simplex_refine(M.entries, b[r])
        values = _batch_values(M.entries, b)

    top = values.max()
    best = int(np.flatnonzero(values >= top - TIE_TOL)[0])
    strategy = VectorStrategy.from_b_vectors(M, b[best])
    return BoundResult(
        value=objective(M, strategy.b_vectors),
        strategy=strategy,
        restarts_used=cfg.restarts,
        best_restart_index=best,
        converged=bool(converged[best]),
        dim_requested=d,
        dim_effective=d_eff,
        rng_seed=cfg.rng_seed,
        restart_values=tuple(float(v) for v in values),
    )


def load_strategy(path) -> VectorStrategy:
    with open(path) as fh:
        data = json.load(fh)
    if "b_vectors" not in data or "a_vectors" not in data:
        raise ValueError(f"{path}: strategy file needs 'b_vectors' and 'a_vectors'")
    return VectorStrategy.from_dict(data)
