"""The tetrahedron of unital qubit channels.

Any unital qubit channel is A_V o N_d o A_U with N_d a Pauli channel that
scales sigma_i by d_i. The point d lies in a tetrahedron whose corners are
the four Pauli unitaries. Inside the central octahedron the channel breaks
entanglement and measuring is optimal (fidelity 2/3); in corner tetrahedron
T_mu the best move is to undo sigma_mu without measuring.
"""

import numpy as np

from noisegate import canonical_form, classify, predict_optimum, symmetry_group
from noisegate.fidelity import protocol_fidelity
from noisegate.sampling import random_unital_qubit_channel

rng = np.random.default_rng(7)
for _ in range(6):
    n = random_unital_qubit_channel(rng)
    can = canonical_form(n)
    protocol, fbar = predict_optimum(n)
    achieved = protocol_fidelity(protocol, n).value
    print(f"d = {np.round(can.dvec, 3)}  region {str(classify(can.dvec)):<18} "
          f"optimum {fbar:.4f}  (protocol achieves {achieved:.4f})")

group = symmetry_group()
print(f"\n{len(group)} symmetries; they permute the four corners in every possible way:")
print(sorted({g.vertex_permutation() for g in group})[:6], "...")
