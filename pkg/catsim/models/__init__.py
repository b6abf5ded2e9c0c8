"""
Data models for the catsim simulator.
"""

from .analysis import FidelityMap, PostselectionResult
from .base import BaseModel, MetadataModel
from .catgen import CatGenSpec, DaknaFidelity, DaknaGateReport
from .coherent import CoherentSuperposition, QubitState
from .experiment import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentParameters,
    ExperimentResult,
    OutputFormat,
    parse_angle,
)
from .fock import (
    BeamsplitterConvention,
    BeamsplitterKind,
    FockVector,
    MultiModeState,
    PureEnsemble,
)
from .gates import (
    TELEPORT_CORRECTIONS,
    Axis,
    BellKind,
    BellOutcome,
    CatParity,
    GateOutcome,
    GateStrategy,
    HomodyneVerdict,
    MeasurementBranch,
    MeasurementModel,
    Pauli,
    RotationSpec,
)
from .loss import LossHistory, ReamplificationReport

__all__ = [
    "BaseModel",
    "MetadataModel",
    "FidelityMap",
    "PostselectionResult",
    "FockVector",
    "MultiModeState",
    "PureEnsemble",
    "BeamsplitterKind",
    "BeamsplitterConvention",
    "CoherentSuperposition",
    "QubitState",
    "BellKind",
    "BellOutcome",
    "CatParity",
    "HomodyneVerdict",
    "Pauli",
    "Axis",
    "RotationSpec",
    "GateOutcome",
    "GateStrategy",
    "MeasurementModel",
    "MeasurementBranch",
    "TELEPORT_CORRECTIONS",
    "CatGenSpec",
    "DaknaFidelity",
    "DaknaGateReport",
    "LossHistory",
    "ReamplificationReport",
    "ExperimentKind",
    "ExperimentParameters",
    "ExperimentConfig",
    "ExperimentResult",
    "OutputFormat",
    "parse_angle",
]
