"""Average fidelity two ways: the Hilbert-Schmidt trace formula and a Haar average.

For a channel E on a d-level system the average fidelity over Haar-random
pure inputs is (d + Tr_HS E) / (d (d + 1)), with Tr_HS E = sum_j |tr K_j|^2.
This script draws a few random channels and compares the closed form with a
Monte Carlo estimate.
"""

import numpy as np

from noisegate import average_fidelity, average_fidelity_mc, hs_trace
from noisegate.sampling import random_channel

rng = np.random.default_rng(2024)
print(f"{'d':>2} {'Tr_HS':>8} {'formula':>9} {'monte carlo':>20}")
for d in (2, 2, 3, 3, 4):
    e = random_channel(d, rng)
    exact = average_fidelity(e).value
    mc = average_fidelity_mc(e, 50_000, seed=int(rng.integers(1 << 30)))
    print(f"{d:>2} {hs_trace(e):8.4f} {exact:9.5f}   {mc.value:.5f} +- {mc.std_error:.5f}")
