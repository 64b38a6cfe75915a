"""
Matching the heat of a sampled continuous cooling
=================================================

A qubit is cooled slowly from beta = 1 to beta = 2, sampled at 8 points.
Each increment is replaced by a quench/thermalise construction whose heat
is never larger than the increment's heat.  Refining its thermalisations
raises the heat until it matches the continuous value.
"""

import numpy as np

from dqthermo import SampledPath, continuous_heat, gamma_trajectory, gibbs_state, match_continuous

H = np.diag([0.0, 1.0])
path = SampledPath(tuple(gibbs_state(H, b) for b in np.linspace(1.0, 2.0, 8)))
print(f"continuous heat: {continuous_heat(path):.6f}")

# %%
# Intermediate configurations live at a reference temperature.  Putting it
# at the final bath temperature (beta = 2) brackets the target.
gamma, decs = gamma_trajectory(path, beta=2.0)
print(f"gamma heat: {gamma.total_heat:.6f}")
m = match_continuous(path, tol=1e-3, beta=2.0)
print(f"matched: {m.discrete_heat:.6f} (gap {m.achieved_gap:.1e}, n = {m.n}, converged = {m.converged})")

# %%
# At unit reference temperature the path releases more heat than
# dS / beta allows, so no refinement can reach it and the result says so.
m1 = match_continuous(path, tol=1e-3, beta=1.0)
print(f"beta_ref = 1: target {m1.continuous_heat:.6f} vs supremum {m1.heat_limit:.6f}; converged = {m1.converged}")
