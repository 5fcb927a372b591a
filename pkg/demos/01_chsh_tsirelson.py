"""
CHSH: classical bound 2, quantum bound 2*sqrt(2)
================================================

The CHSH expression is the smallest member of the X_n family.  Its classical
value comes from enumerating +-1 strategies; its quantum value from unit
vectors in the plane.
"""

# %%
import numpy as np

from bellvec import build_xn, classical_bound, optimize_bound, OptimizerConfig

M = build_xn(2)
print(M.entries)

# %%
# Classical: enumerate deterministic strategies.
lhv, witness = classical_bound(M)
print("LHV bound:", lhv, "attained by", witness)

# %%
# Quantum: maximise the sum of norms over unit vectors in R^2.
res = optimize_bound(M, 2, OptimizerConfig(restarts=50, rng_seed=0))
print("quantum bound:", res.value, " 2*sqrt(2) =", 2 * np.sqrt(2))
print("Bob's vectors meet at", np.degrees(np.arccos(res.strategy.b_vectors[0] @ res.strategy.b_vectors[1])), "degrees")
