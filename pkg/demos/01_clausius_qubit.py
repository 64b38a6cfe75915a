"""
Clausius bookkeeping for a single qubit
=======================================

A qubit with H = diag(0, 1) starts in its Gibbs state at beta = 1 and is
put in contact with a colder bath (beta = 2).  We track heat, the sum
Lambda of beta * Q over thermalising steps, and the entropy change.
"""

import numpy as np

from dqthermo import DTT, DUQ, clausius_check, entropy_change_bounds, gibbs_state, run_trajectory, summarize

H = np.diag([0.0, 1.0])
start = gibbs_state(H, beta=1.0)
print("populations at beta=1:", np.round(np.diag(start.rho).real, 6))
print("Z =", round(start.partition_function, 6), " U =", round(start.energy, 6), " S =", round(start.entropy, 6))

# %%
# A quench that keeps H, then a thermalising step at beta = 2.
t = run_trajectory(start, [DUQ(H), DTT(2.0)])
rep = summarize(t)
for row in rep.per_step:
    print(f"step {row.index} {row.kind:3s}  Q = {row.heat:+.6f}  W = {row.work:+.6f}  beta*Q = {row.lambda_:+.6f}")

# %%
# The entropy change exceeds Lambda.  The slack is what the bath gains
# irreversibly.
check = clausius_check(t)
print(f"dS = {check.delta_s:.6f} >= Lambda = {check.lambda_:.6f}  (slack {check.slack:.6f})")

# %%
# The same number sits between the two relative-entropy bounds.
lo, ds, hi = entropy_change_bounds(start.rho, t.final.rho)
print(f"{lo:.6f} <= dS = {ds:.6f} <= {hi:.6f}")
