"""
A four-stroke qubit cycle and its Carnot bound
==============================================

Quench H from diag(0, 1) to diag(0, 2), thermalise with a hot bath
(beta = 0.5), quench back, thermalise with a cold bath (beta = 2).
"""

import numpy as np

from dqthermo import CycleSpec, efficiency_sweep, run_cycle

spec = CycleSpec(beta_1=2.0, beta_2=0.5, h_1=np.diag([0.0, 1.0]), h_2=np.diag([0.0, 2.0]))
r = run_cycle(spec)
print(f"{r.mode}: q_hot = {r.q_hot:.6f}, q_cold = {r.q_cold:.6f}, W = {r.work_net:.6f}")
print(f"efficiency {r.efficiency:.4f} <= Carnot {r.carnot_bound:.4f}")

# %%
# Turning each thermalisation into an isothermal staircase lets the
# efficiency climb towards the Carnot value.
for rep in efficiency_sweep(spec, [1, 2, 4, 8, 16, 32, 64]):
    print(f"n = {rep.n:3d}  eta = {rep.efficiency:.6f}")

# %%
# With a milder hot bath the same hardware pumps heat out of the cold bath.
fridge = run_cycle(CycleSpec(beta_1=2.0, beta_2=1.5, h_1=spec.h_1, h_2=spec.h_2))
print(f"{fridge.mode}: COP = {fridge.cop:.4f} <= {fridge.carnot_bound:.4f}")
