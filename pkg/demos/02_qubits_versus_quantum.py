"""
When qubits are not enough: X4, Y4, Z4
======================================

Bounds at d = 1 (classical), 2 (real qubit settings), 3 (qubits) and 4
(unrestricted quantum).  A ratio d=4 / d=3 above one means no pair of qubits
reaches the quantum maximum.
"""

# %%
from bellvec.report import rows_to_text, run_table1
from bellvec.vectors import OptimizerConfig

rows = run_table1(OptimizerConfig(restarts=1000, rng_seed=0))
print(rows_to_text(rows))

# %%
# At d=4 the optimal Bob settings for X4 are mutually orthogonal.
import numpy as np
from bellvec import build_xn, gram_matrix, optimize_bound

M = build_xn(4)
res = optimize_bound(M, 4, OptimizerConfig(restarts=100, rng_seed=0))
print(np.round(gram_matrix(res.strategy)[M.m_a:, M.m_a:], 6))
