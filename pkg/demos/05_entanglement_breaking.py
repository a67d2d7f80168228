"""Which noise is entanglement breaking, and its measure-and-prepare form.

A channel breaks entanglement when its Choi state is separable. For qubits
the partial-transpose test decides this exactly; for the unital family it
coincides with the octahedron |d1| + |d2| + |d3| <= 1. For certified
channels we write out an explicit measurement and the states reprepared.
"""

import numpy as np

from noisegate import is_qcq, qcq_decomposition, unital_from_canonical
from noisegate.channels import apply

for dvec in [(0.2, 0.3, -0.4), (0.6, 0.3, 0.3), (0.0, 0.0, 1.0)]:
    n = unital_from_canonical(dvec)
    verdict = is_qcq(n)
    print(f"d = {dvec}: sum|d| = {np.sum(np.abs(dvec)):.2f}  {verdict.status.value:<22} "
          f"min PT eigenvalue {verdict.witness:+.4f}")
    dec = qcq_decomposition(n)
    if dec is not None:
        rho = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
        err = np.max(np.abs(dec(rho) - apply(n, rho)))
        print(f"    {len(dec.states)} measure/prepare terms, reconstruction error {err:.1e}")
