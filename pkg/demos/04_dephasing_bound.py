"""Pure dephasing sits on the boundary: nothing beats 2/3.

For N(rho) = (rho + sigma_z rho sigma_z)/2 both doing nothing and measuring
give 2/3. Splitting Tr_HS of the average operation by outcome,
f_w = gamma_w + a_w.delta_w + b_w.zeta_w with gamma_w summing to one and
each f_w at most 2 gamma_w, so the total never exceeds 2. Random protocols
confirm it.
"""

import numpy as np

from noisegate import OptimizerConfig, appendix_decompose, dephasing, protocol_fidelity
from noisegate.optimizer import random_protocol
from noisegate.protocols import discriminate_reprepare, do_nothing

n = dephasing(3)
print("do nothing:", protocol_fidelity(do_nothing(2), n).value)
print("measure   :", protocol_fidelity(discriminate_reprepare(d=2), n).value)

rng = np.random.default_rng(1)
totals = []
for i in range(500):
    cfg = OptimizerConfig(n_outcomes=int(rng.integers(1, 6)), kraus_rank=int(rng.integers(1, 3)))
    dec = appendix_decompose(random_protocol(2, cfg, seed=i), axis=3)
    assert not dec.violations()
    totals.append(dec.total_f)
print(f"500 random protocols: largest sum of f = {max(totals):.6f} (bound 2)")
