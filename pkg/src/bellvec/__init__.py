"""Classical, qubit and quantum bounds of correlation Bell inequalities.

Bounds are computed through unit-vector strategies: a Bell matrix ``M`` is
maximised over unit vectors in ``R^d``, where ``d = 1`` gives the classical
bound, ``d = 2, 3`` the qubit bounds and ``d = m_b`` the quantum bound.
Vector strategies are turned into explicit observables with gamma matrices.
"""

from .bell import (
    BellMatrix,
    DeterministicStrategy,
    EnumerationTooLarge,
    build_family,
    build_xn,
    build_yn,
    build_zn,
    classical_bound,
    classical_value,
    family_lhv_bound,
    load_matrix,
    save_matrix,
)
from .clifford import (
    CliffordBasis,
    QuantumRealization,
    extract_vectors,
    gamma_basis,
    joint_correlation,
    marginal,
    observable_from_vector,
    quantum_bell_value,
    realize_strategy,
)
from .geometry import NoExactOracle, OracleValue, asymptotic_ratio, known_configuration, oracle_E, sum_of_distances
from .vectors import (
    BoundResult,
    OptimizerConfig,
    VectorStrategy,
    derive_a_vectors,
    gradient,
    gram_matrix,
    objective,
    optimize_bound,
    reduce_strategy,
    seesaw_step,
)

__version__ = "0.1.0"
