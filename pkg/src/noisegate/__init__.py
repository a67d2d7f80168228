"""Classical noise-correction protocols for quantum channels.

The main entry points are re-exported here; see the submodules for the
full API.
"""

from .channels import (
    ChoiMatrix,
    CPMap,
    QuantumChannel,
    apply,
    compose,
    from_choi,
    hs_trace,
    mix,
    superoperator,
    to_choi,
)
from .fidelity import (
    appendix_decompose,
    average_fidelity,
    average_fidelity_mc,
    protocol_fidelity,
)
from .geometry import (
    Region,
    canonical_form,
    classify,
    in_octahedron,
    in_tetrahedron,
    predict_optimum,
    symmetry_group,
)
from .noise_models import (
    PauliMixture,
    amplitude_damping,
    dephasing,
    depolarizing,
    pauli_channel,
    unital_from_canonical,
    vertex,
)
from .optimizer import OptimizerConfig, certify_upper_bound, optimize
from .protocols import (
    Instrument,
    Protocol,
    Povm,
    average_operation,
    discriminate_reprepare,
    do_nothing,
    no_measurement,
)
from .separability import QcqStatus, is_qcq, ppt_check, qcq_decomposition

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
