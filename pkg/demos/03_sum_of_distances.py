"""
Z_n bounds as sums of distances on the sphere
=============================================

The d-dimensional bound of Z_n is the largest total distance between n unit
vectors in R^d.  Exact values exist for polygons, simplices, cross polytopes
and three Platonic solids; the optimiser should land on them.
"""

# %%
from bellvec import build_zn, known_configuration, optimize_bound, oracle_E, sum_of_distances
from bellvec.report import rows_to_text, run_table2
from bellvec.vectors import OptimizerConfig

cfg = OptimizerConfig(restarts=300, rng_seed=0)
for n, d in [(4, 2), (6, 2), (4, 3), (6, 3), (6, 5), (8, 4), (12, 3)]:
    orc = oracle_E(n, d)
    pts = known_configuration(n, d)
    found = optimize_bound(build_zn(n), d, cfg).value
    print(f"E({n},{d}) = {orc.exact_expression:<30} = {orc.value:.6f}  "
          f"config {sum_of_distances(pts):.6f}  optimiser {found:.6f}  [{orc.formula_id}]")

# %%
# Ratios over the classical bound floor(n^2/2); the last column shows Z6 beats qubits.
print(rows_to_text(run_table2()))
