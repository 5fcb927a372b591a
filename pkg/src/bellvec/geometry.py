"""Exact maximal sums of distances between unit vectors.

``E(n, d)`` is the largest value of ``sum_{i<j} |b_i - b_j|`` over ``n`` unit
vectors in ``R^d``.  It coincides with the ``d``-dimensional bound of the Z_n
Bell matrix.  Only cases with a known closed form are supported; everything
else raises :class:`NoExactOracle` so callers fall back to the optimiser.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin, sqrt, tan

import numpy as np
from scipy.linalg import helmert

FORMULAS = ("polygon", "simplex", "cross_polytope", "tetrahedron", "octahedron", "icosahedron")


class NoExactOracle(ValueError):
    """Raised for ``(n, d)`` pairs without a closed-form optimum."""


@dataclass(frozen=True)
class OracleValue:
    n: int
    d: int
    value: float
    formula_id: str
    exact_expression: str


def _classify(n: int, d: int) -> str:
    if n < 2 or d < 1:
        raise NoExactOracle(f"no exact oracle for (n={n}, d={d})")
    if (n, d) == (4, 3):
        return "tetrahedron"
    if (n, d) == (6, 3):
        return "octahedron"
    if (n, d) == (12, 3):
        return "icosahedron"
    if d >= n - 1:
        return "simplex"
    if d == 2:
        return "polygon"
    if n % 2 == 0 and d == n // 2:
        return "cross_polytope"
    raise NoExactOracle(f"no exact oracle for (n={n}, d={d})")


def oracle_E(n: int, d: int) -> OracleValue:
    """Closed-form ``E(n, d)`` (unordered pair convention)."""
    kind = _classify(n, d)
    if kind == "tetrahedron":
        return OracleValue(n, d, 4 * sqrt(6), kind, "4*sqrt(6)")
    if kind == "octahedron":
        return OracleValue(n, d, 6 * (1 + 2 * sqrt(2)), kind, "6*(1+2*sqrt(2))")
    if kind == "icosahedron":
        return OracleValue(n, d, 12 * (1 + sqrt(5 * (5 + 2 * sqrt(5)))), kind,
                           "12*(1+sqrt(5*(5+2*sqrt(5))))")
    if kind == "simplex":
        return OracleValue(n, d, n * sqrt(n * (n - 1) / 2), kind, f"{n}*sqrt({n}*{n - 1}/2)")
    if kind == "polygon":
        return OracleValue(n, d, n / tan(pi / (2 * n)), kind, f"{n}*cot(pi/{2 * n})")
    k = n // 2
    return OracleValue(n, d, n * (1 + (k - 1) * sqrt(2)), kind, f"{n}*(1+{k - 1}*sqrt(2))")


def _simplex(n: int) -> np.ndarray:
    # columns of the Helmert matrix are the centred basis vectors of R^n
    pts = helmert(n).T
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _icosahedron() -> np.ndarray:
    phi = (1 + sqrt(5)) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            base = (0.0, s1 * 1.0, s2 * phi)
            for shift in range(3):
                pts.append(base[-shift:] + base[:-shift] if shift else base)
    pts = np.array(pts)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def known_configuration(n: int, d: int) -> np.ndarray:
    """Coordinates, shape ``(n, d)``, of a configuration attaining ``E(n, d)``."""
    kind = _classify(n, d)
    if kind == "polygon":
        t = 2 * pi * np.arange(n) / n
        pts = np.column_stack([np.cos(t), np.sin(t)])
    elif kind in ("simplex", "tetrahedron"):
        pts = _simplex(n)
    elif kind in ("cross_polytope", "octahedron"):
        eye = np.eye(n // 2)
        pts = np.vstack([eye, -eye])
    else:
        pts = _icosahedron()
    if pts.shape[1] < d:
        pts = np.hstack([pts, np.zeros((n, d - pts.shape[1]))])
    return pts


def sum_of_distances(points, ordered: bool = False) -> float:
    """Sum of pairwise Euclidean distances.

    With ``ordered=False`` (default) each unordered pair counts once, which is
    the Z_n Bell value.  ``ordered=True`` counts both orders, i.e. twice that.
    """
    p = np.asarray(points, dtype=float)
    if p.ndim != 2 or p.shape[0] < 2:
        raise ValueError(f"need at least two points of a common dimension, got shape {p.shape}")
    i, j = np.triu_indices(len(p), k=1)
    total = float(np.linalg.norm(p[i] - p[j], axis=1).sum())
    return 2 * total if ordered else total


def asymptotic_ratio(n: int) -> tuple[float, float, float]:
    """Z_n bound ratios over the classical bound ``floor(n^2/2)``.

    Returns the planar ratio, the large-``n`` three-dimensional estimate
    ``(2 n^2 / 3) / floor(n^2/2)`` and the unrestricted quantum ratio.  They
    tend to ``4/pi``, ``4/3`` and ``sqrt(2)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    lhv = n * n // 2
    # n*cot(pi/2n) evaluated through cos/sin to stay accurate for huge n
    x = pi / (2 * n)
    planar = n * cos(x) / sin(x)
    return planar / lhv, (2 * n * n / 3) / lhv, n * sqrt(n * (n - 1) / 2) / lhv

