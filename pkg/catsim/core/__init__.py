"""
Numerical engines for the coherent-state qubit simulator.
"""

from . import catgen, coherent_algebra, error_model, fock_core, gates, measurement, teleport_analysis
from .catgen import dakna_fidelity, dakna_pipeline, dakna_probability, dakna_state
from .error_model import (
    amplify,
    amplify_to_bell,
    conditional_state,
    correct_sign_flip,
    encode_three,
    loss_as_z_check,
    reamplify,
)
from .errors import (
    CatsimError,
    DimensionMismatchError,
    InfeasibleError,
    TruncationError,
    UncorrectableError,
    ZeroProbabilityError,
)
from .gates import (
    bell_resource,
    gate_rx,
    gate_rz_bare,
    gate_rz_teleported,
    gate_rz_zeno,
    gate_z,
    gate_zz,
)
from .teleport_analysis import fidelity_map, overall_fidelity, postselect

__all__ = [
    "catgen",
    "coherent_algebra",
    "error_model",
    "fock_core",
    "gates",
    "measurement",
    "teleport_analysis",
    "CatsimError",
    "TruncationError",
    "ZeroProbabilityError",
    "DimensionMismatchError",
    "InfeasibleError",
    "UncorrectableError",
    "bell_resource",
    "gate_z",
    "gate_rz_bare",
    "gate_rz_zeno",
    "gate_rz_teleported",
    "gate_zz",
    "gate_rx",
    "fidelity_map",
    "overall_fidelity",
    "postselect",
    "dakna_state",
    "dakna_pipeline",
    "dakna_probability",
    "dakna_fidelity",
    "conditional_state",
    "loss_as_z_check",
    "reamplify",
    "encode_three",
    "correct_sign_flip",
    "amplify",
    "amplify_to_bell",
]
