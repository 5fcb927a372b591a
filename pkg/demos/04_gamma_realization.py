"""
From vectors to observables: the Z6 realization on C^4 (x) C^4
===============================================================

The optimal Z6 strategy lives in R^5.  Five anticommuting 4x4 gamma matrices
turn each unit vector into a +-1 observable, and the maximally entangled
state reproduces every dot product as a correlation.
"""

# %%
import numpy as np

from bellvec import build_zn, extract_vectors, gamma_basis, optimize_bound, quantum_bell_value, realize_strategy
from bellvec.clifford import correlation_table, marginal
from bellvec.vectors import OptimizerConfig, reduce_strategy

M = build_zn(6)
res = optimize_bound(M, 5, OptimizerConfig(restarts=200, rng_seed=0))
strategy = reduce_strategy(res.strategy)
print("ambient dimension:", strategy.dim)

# %%
basis = gamma_basis(5)
for k, g in enumerate(basis.gammas, 1):
    print(f"gamma_{k}:\n{np.real_if_close(g)}")

# %%
r = realize_strategy(strategy)
print("local dimension:", r.dim_h)
dots = strategy.a_vectors @ strategy.b_vectors.T
print("max |corr - dot|:", np.abs(correlation_table(r) - dots).max())
print("max |marginal|:", max(abs(marginal(r, "alice", i)) for i in range(M.m_a)))
print("Bell value:", quantum_bell_value(M, r), " 6*sqrt(15) =", 6 * np.sqrt(15))

# %%
# And back: any observables and pure state give real unit vectors.
a, b = extract_vectors(r.state, r.alice_obs, r.bob_obs)
print("extracted dimension:", a.shape[1], " max |a.b - corr|:", np.abs(a @ b.T - correlation_table(r)).max())
