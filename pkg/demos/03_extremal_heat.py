"""
Largest and smallest heat of one unitary + thermalisation
=========================================================

Rotate a thermal state with any unitary V, then thermalise.  The heat
depends on V only through how the populations are lined up with the final
energy levels, so the extremes are reached by sorting.  We compare the
sorted answer with brute force over permutations and with Haar sampling.
"""

import numpy as np

from dqthermo import extremal_heat, gibbs_state, haar_random_unitaries, permutation_oracle, sampled_heats
from dqthermo.linalg import random_hermitian

H = np.diag([0.0, 1.0])
c = gibbs_state(H, 1.0)
res = extremal_heat(c, H, beta_f=1.0)
print(f"qubit: Q_min = {res.q_min:.6f}, Q_max = {res.q_max:.6f}")
print("closed form (e^-1 - 1)/(1 + e^-1) =", round((np.exp(-1) - 1) / (1 + np.exp(-1)), 6))

# %%
# A random four-level instance.
rng = np.random.default_rng(3)
c4 = gibbs_state(random_hermitian(4, rng), 0.8)
h_f = random_hermitian(4, rng)
res4 = extremal_heat(c4, h_f, 1.5)
oracle = permutation_oracle(c4, h_f, 1.5)
heats = sampled_heats(c4, h_f, 1.5, haar_random_unitaries(4, 20_000, seed=1))
print(f"sorted pairing : [{res4.q_min:.6f}, {res4.q_max:.6f}]")
print(f"all 24 perms   : [{oracle.q_min:.6f}, {oracle.q_max:.6f}]")
print(f"20000 Haar V   : [{heats.min():.6f}, {heats.max():.6f}]")
