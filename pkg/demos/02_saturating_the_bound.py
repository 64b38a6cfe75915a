"""
Closing the Clausius gap with intermediate baths
================================================

Replacing the single beta = 1 -> beta = 2 thermalisation by n smaller
steps through mixtures of the end states pushes Lambda up to the entropy
change.  The remaining gap is bounded by the symmetric relative entropy
of the end states divided by n.
"""

import numpy as np

from dqthermo import DTT, DUQ, clausius_check, convergence_table, gibbs_state, insert_midpoint, lambda_functional, run_trajectory, saturate

H = np.diag([0.0, 1.0])
t = run_trajectory(gibbs_state(H, 1.0), [DUQ(H), DTT(2.0)])

# %%
# One extra thermal configuration halfway already helps.
one = insert_midpoint(t, k=1, p=0.5)
print(f"Lambda: {lambda_functional(t):.6f} -> {lambda_functional(one):.6f} with one midpoint")

# %%
# The gap shrinks like 1/n and stays under its bound.
print(f"{'n':>5} {'Lambda':>10} {'gap':>10} {'bound':>10}")
for row in convergence_table(t, [1, 2, 4, 16, 64, 256, 1024]):
    print(f"{row.n:5d} {row.lambda_:10.6f} {row.gap:10.2e} {row.bound:10.2e}")

# %%
# ``saturate`` chooses n from the bound for a target tolerance.
res = saturate(t, tol=1e-3)
print("chosen n:", [p.n for p in res.plans], " converged:", res.converged, " gap:", f"{clausius_check(res.trajectory).slack:.2e}")
