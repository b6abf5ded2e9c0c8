"""
Models describing measurement records and gate outcomes.
"""

from enum import Enum
from typing import List, Optional, Tuple, Union

from pydantic import Field, model_validator

from .base import MetadataModel
from .coherent import CoherentSuperposition, QubitState
from .fock import FockVector, MultiModeState


class BellKind(str, Enum):
    """Bell-cat measurement classes."""

    B00 = "B00"
    B01 = "B01"
    B10 = "B10"
    B11 = "B11"
    FAILURE = "failure"


class Pauli(str, Enum):
    X = "X"
    Z = "Z"


class CatParity(str, Enum):
    """Result of projecting a mode onto the plus or minus cat."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is CatParity.PLUS else -1


class HomodyneVerdict(str, Enum):
    PLUS = "plus"
    MINUS = "minus"
    INCONCLUSIVE = "inconclusive"


class MeasurementModel(str, Enum):
    """How measured modes are treated.

    ``ideal`` snaps each measured label to the nearest logical state and
    treats the logical states as orthonormal; ``counting`` works with exact
    photon-count statistics.
    """

    IDEAL = "ideal"
    COUNTING = "counting"


class GateStrategy(str, Enum):
    BARE = "bare"
    ZENO = "zeno"
    TELEPORTED = "teleported"


class Axis(str, Enum):
    X = "X"
    Z = "Z"


# Corrections for teleportation through |B00>, applied left to right.
TELEPORT_CORRECTIONS = {
    BellKind.B00: [],
    BellKind.B10: [Pauli.Z],
    BellKind.B01: [Pauli.X],
    BellKind.B11: [Pauli.X, Pauli.Z],
    BellKind.FAILURE: [],
}


class BellOutcome(MetadataModel):
    """A classified Bell-cat measurement record."""

    kind: BellKind = Field(..., description="Measurement class")
    counts: Optional[Tuple[int, int]] = Field(
        None, description="Photon counts (n_a, n_b) for the counting model"
    )

    @classmethod
    def from_counts(cls, n_a: int, n_b: int) -> "BellOutcome":
        """Classify a photon-count pair.

        Pairs with both counts non-zero are assigned to the dominant mode,
        ties going to mode a.
        """
        if n_a < 0 or n_b < 0:
            raise ValueError("photon counts must be non-negative")
        if n_a == 0 and n_b == 0:
            kind = BellKind.FAILURE
        elif n_a >= n_b:
            kind = BellKind.B10 if n_a % 2 else BellKind.B00
        else:
            kind = BellKind.B11 if n_b % 2 else BellKind.B01
        return cls(kind=kind, counts=(n_a, n_b))

    @property
    def corrections(self) -> List[Pauli]:
        return list(TELEPORT_CORRECTIONS[self.kind])

    @property
    def success(self) -> bool:
        return self.kind != BellKind.FAILURE


class RotationSpec(MetadataModel):
    """A rotation ``exp(-i theta/2 P)`` with ``P`` a one- or two-qubit Pauli string."""

    axes: Tuple[Axis, ...] = Field(..., min_length=1, max_length=2)
    theta: float = Field(..., description="Rotation angle in radians")


GateState = Union[QubitState, CoherentSuperposition, FockVector, MultiModeState]


class GateOutcome(MetadataModel):
    """Result of running a gate once, or of aggregating its branches."""

    state: Optional[GateState] = Field(None, description="Corrected output state")
    uncorrected_state: Optional[GateState] = Field(
        None, description="Output before Pauli corrections"
    )
    record: List[BellOutcome] = Field(
        default_factory=list, description="Measurement records in time order"
    )
    corrections: List[Pauli] = Field(
        default_factory=list, description="Paulis applied to the output"
    )
    success: bool = Field(..., description="Whether the gate was applied")
    probability: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    attempts: int = Field(1, ge=0, description="Gate attempts made")
    resources_used: int = Field(0, ge=0, description="Bell-cat resources consumed")

    @model_validator(mode="after")
    def _state_on_success(self) -> "GateOutcome":
        if self.success and self.state is None:
            raise ValueError("a successful outcome must carry a state")
        return self


class MeasurementBranch(MetadataModel):
    """One outcome of a measurement together with its conditional state."""

    probability: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    state: Optional[CoherentSuperposition] = Field(
        None, description="Normalized state of the unmeasured modes"
    )
    bell: Optional[BellOutcome] = Field(None, description="Bell-cat record, if any")
    parities: Tuple[CatParity, ...] = Field((), description="Cat-measurement results")
    counts: Optional[Tuple[int, ...]] = Field(None, description="Raw photon counts")
