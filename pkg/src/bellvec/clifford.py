"""Quantum realisations of vector strategies through gamma matrices.

Unit vectors in ``R^n`` become +-1-valued observables on ``C^D`` with
``D = 2^floor(n/2)`` by contracting them with ``n`` mutually anticommuting
Hermitian matrices.  Alice uses ``sum_k a_k gamma_k`` and Bob
``sum_k b_k gamma_k^T``; on the maximally entangled state the correlation of
the pair is then ``a . b``.  :func:`extract_vectors` goes the other way and
turns any observables and pure state into real unit vectors whose dot
products are the correlations.

A state on ``C^D (x) C^D`` is handled as its ``D x D`` coefficient matrix
``Psi`` (``psi = vec(Psi)`` row-major), so ``(A (x) B) psi`` is ``A Psi B^T``
and no Kronecker product of observables is ever formed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bell import BellMatrix
from .vectors import VectorStrategy

MAX_GAMMA_N = 16

CONSTRUCTION_TOL = 1e-12
VERIFY_TOL = 1e-10
INPUT_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


class ConsistencyError(RuntimeError):
    """Two evaluation routes of the same quantity disagree."""


def _kron_all(factors) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


@dataclass(frozen=True)
class CliffordBasis:
    """``n`` anticommuting Hermitian involutions of size ``dim_h``."""

    n: int
    dim_h: int
    gammas: tuple

    def stacked(self) -> np.ndarray:
        return np.stack(self.gammas)


@lru_cache(maxsize=None)
def gamma_basis(n: int) -> CliffordBasis:
    """Pauli-string gamma matrices for ``R^n``.

    With ``k = floor(n/2)`` tensor factors, the pair ``(2p+1, 2p+2)`` is
    ``sigma_z^(p) (x) sigma_{x,y} (x) 1^(k-p-1)``; for odd ``n`` the last
    matrix is ``sigma_z^(k)``.  ``n = 1`` gives the 1x1 identity, the only
    one of them that is not traceless.
    """
    if not (1 <= n <= MAX_GAMMA_N):
        raise ValueError(f"gamma basis supports 1 <= n <= {MAX_GAMMA_N}, got {n}")
    k = n // 2
    gammas = []
    for p in range(k):
        for s in (SIGMA_X, SIGMA_Y):
            gammas.append(_kron_all([SIGMA_Z] * p + [s] + [ID2] * (k - p - 1)))
    if n % 2:
        gammas.append(_kron_all([SIGMA_Z] * k))
    for g in gammas:
        g.setflags(write=False)
    return CliffordBasis(n, 2 ** k, tuple(gammas))


def maximally_entangled_state(dim_h: int) -> np.ndarray:
    """``(1/sqrt(D)) sum_i |ii>`` as a length ``D^2`` vector."""
    return np.eye(dim_h, dtype=complex).ravel() / np.sqrt(dim_h)


def _check_observable(A: np.ndarray, tol: float, what: str) -> None:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{what}: observable must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{what}: observable has non-finite entries")
    if np.abs(A - A.conj().T).max() > tol:
        raise ValueError(f"{what}: observable is not Hermitian")
    if np.abs(A @ A - np.eye(len(A))).max() > tol:
        raise ValueError(f"{what}: observable does not square to the identity")


@dataclass(frozen=True)
class QuantumRealization:
    """Observables for both parties acting on the maximally entangled state."""

    dim_h: int
    state: np.ndarray
    alice_obs: tuple
    bob_obs: tuple

    def __post_init__(self):
        expected = maximally_entangled_state(self.dim_h)
        state = np.asarray(self.state, dtype=complex)
        if state.shape != expected.shape or np.abs(state - expected).max() > CONSTRUCTION_TOL:
            raise ValueError("realization state must be the maximally entangled state")
        alice = tuple(np.asarray(A, dtype=complex) for A in self.alice_obs)
        bob = tuple(np.asarray(B, dtype=complex) for B in self.bob_obs)
        for side, obs in (("alice", alice), ("bob", bob)):
            for i, A in enumerate(obs):
                if A.shape != (self.dim_h, self.dim_h):
                    raise ValueError(f"{side}[{i}]: expected {self.dim_h}x{self.dim_h} observable")
                _check_observable(A, VERIFY_TOL, f"{side}[{i}]")
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "alice_obs", alice)
        object.__setattr__(self, "bob_obs", bob)

    def to_dict(self) -> dict:
        def enc(A):
            return np.stack([A.real, A.imag], axis=-1).tolist()

        return {
            "dim_h": self.dim_h,
            "alice_obs": [enc(A) for A in self.alice_obs],
            "bob_obs": [enc(B) for B in self.bob_obs],
            "state": enc(self.state),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuantumRealization":
        def dec(x):
            arr = np.asarray(x, dtype=float)
            return arr[..., 0] + 1j * arr[..., 1]

        for key in ("dim_h", "alice_obs", "bob_obs", "state"):
            if key not in data:
                raise ValueError(f"realization is missing field {key!r}")
        return cls(
            int(data["dim_h"]),
            dec(data["state"]),
            tuple(dec(A) for A in data["alice_obs"]),
            tuple(dec(B) for B in data["bob_obs"]),
        )


def observable_from_vector(v, basis: CliffordBasis, side: str = "alice") -> np.ndarray:
    """``sum_k v_k gamma_k`` for Alice or ``sum_k v_k gamma_k^T`` for Bob."""
    v = np.asarray(v, dtype=float)
    if v.shape != (basis.n,):
        raise ValueError(f"vector length {v.shape} does not match basis size {basis.n}")
    if abs(np.linalg.norm(v) - 1.0) > INPUT_TOL:
        raise ValueError(f"vector must have unit norm, got {np.linalg.norm(v)}")
    if side not in ("alice", "bob"):
        raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")
    obs = np.einsum("k,kij->ij", v, basis.stacked())
    return obs.T if side == "bob" else obs


def realize_strategy(strategy: VectorStrategy) -> QuantumRealization:
    """Observables reproducing ``a_i . b_j`` as correlations on ``|Phi+>``.

    The local dimension follows the ambient dimension of the strategy; pass it
    through :func:`bellvec.vectors.reduce_strategy` first for the smallest one.
    """
    basis = gamma_basis(strategy.dim)
    alice = tuple(observable_from_vector(a, basis, "alice") for a in strategy.a_vectors)
    bob = tuple(observable_from_vector(b, basis, "bob") for b in strategy.b_vectors)
    return QuantumRealization(basis.dim_h, maximally_entangled_state(basis.dim_h), alice, bob)


def _expectation(state: np.ndarray, A: np.ndarray, B: np.ndarray) -> complex:
    D = len(A)
    psi = state.reshape(D, D)
    return np.vdot(psi, A @ psi @ B.T)


def joint_correlation(r: QuantumRealization, i: int, j: int) -> float:
    """``<psi| A_i (x) B_j |psi>``, cross-checked against ``Tr(A_i B_j^T) / D``."""
    A, B = r.alice_obs[i], r.bob_obs[j]
    full = _expectation(r.state, A, B)
    trace = np.trace(A @ B.T) / r.dim_h
    if abs(full.imag) > CONSTRUCTION_TOL:
        raise ConsistencyError(f"correlation ({i}, {j}) has imaginary part {full.imag:.2e}")
    if abs(full - trace) > 1e-11:
        raise ConsistencyError(
            f"correlation ({i}, {j}): state contraction {full.real} vs trace form {trace.real}"
        )
    return float(full.real)


def correlation_table(r: QuantumRealization) -> np.ndarray:
    return np.array(
        [[joint_correlation(r, i, j) for j in range(len(r.bob_obs))] for i in range(len(r.alice_obs))]
    )


def marginal(r: QuantumRealization, side: str, index: int) -> float:
    """Single-party expectation ``<A_i (x) 1>`` or ``<1 (x) B_j>``."""
    eye = np.eye(r.dim_h)
    if side == "alice":
        val = _expectation(r.state, r.alice_obs[index], eye)
    elif side == "bob":
        val = _expectation(r.state, eye, r.bob_obs[index])
    else:
        raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")
    return float(val.real)


def _interleave(z: np.ndarray) -> np.ndarray:
    return np.column_stack([z.real, z.imag]).ravel()


def extract_vectors(state, alice_obs, bob_obs) -> tuple[np.ndarray, np.ndarray]:
    """Real unit vectors in ``R^(2 D^2)`` whose dot products are the correlations.

    ``|a_i> = (A_i (x) 1)|psi>`` and ``|b_j> = (1 (x) B_j)|psi>`` are flattened
    to real vectors ordered ``(Re_1, Im_1, Re_2, Im_2, ...)``.  Works for any
    normalised pure state, not only the maximally entangled one.
    """
    state = np.asarray(state, dtype=complex)
    D = int(round(np.sqrt(state.size)))
    if D * D != state.size:
        raise ValueError(f"state length {state.size} is not a square")
    if abs(np.linalg.norm(state) - 1.0) > INPUT_TOL:
        raise ValueError("state must be normalised")
    for side, obs in (("alice", alice_obs), ("bob", bob_obs)):
        for i, A in enumerate(obs):
            if np.shape(A) != (D, D):
                raise ValueError(f"{side}[{i}]: expected a {D}x{D} observable")
            _check_observable(A, INPUT_TOL, f"{side}[{i}]")
    psi = state.reshape(D, D)
    a = np.array([_interleave((np.asarray(A) @ psi).ravel()) for A in alice_obs])
    b = np.array([_interleave((psi @ np.asarray(B).T).ravel()) for B in bob_obs])
    return a, b


def quantum_bell_value(M: BellMatrix, r: QuantumRealization) -> float:
    """``sum_ij M_ij <A_i (x) B_j>``."""
    if (M.m_a, M.m_b) != (len(r.alice_obs), len(r.bob_obs)):
        raise ValueError(
            f"matrix is {M.m_a}x{M.m_b} but realization has "
            f"{len(r.alice_obs)} and {len(r.bob_obs)} observables"
        )
    return float(np.sum(M.entries * correlation_table(r)))


def verify_realization(r: QuantumRealization, expected=None, M: BellMatrix | None = None) -> dict:
    """Check a realization and summarise the outcome.

    ``expected`` is an optional table of target correlations, e.g. the cross
    Gram block of the strategy it was built from.
    """
    table = correlation_table(r)
    marg = [marginal(r, "alice", i) for i in range(len(r.alice_obs))]
    marg += [marginal(r, "bob", j) for j in range(len(r.bob_obs))]
    report = {
        "dim_h": r.dim_h,
        "max_abs_marginal": float(np.max(np.abs(marg))) if marg else 0.0,
        "checks": {},
    }
    checks = report["checks"]
    # n = 1 realisations are classical signs and keep their marginals
    if r.dim_h > 1:
        checks["marginals_vanish"] = report["max_abs_marginal"] < CONSTRUCTION_TOL
    if expected is not None:
        dev = float(np.abs(table - np.asarray(expected)).max())
        report["max_correlation_deviation"] = dev
        checks["correlations_match"] = dev < VERIFY_TOL
    if M is not None:
        report["bell_value"] = float(np.sum(M.entries * table))
    report["passed"] = all(checks.values())
    return report


def save_realization(r: QuantumRealization, path, **extra) -> None:
    data = r.to_dict()
    data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh)


def load_realization(path) -> tuple[QuantumRealization, dict]:
    with open(path) as fh:
        data = json.load(fh)
    return QuantumRealization.from_dict(data), data
