"""
Truncated Fock-space state models and beamsplitter conventions.
"""

import math
from enum import Enum
from typing import Any, List, Tuple, Union

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base import BaseModel, frozen_array


class BeamsplitterKind(str, Enum):
    """Beamsplitter conventions used by the gates."""

    PHASE_COUPLED = "phase_coupled"  # exp[i (theta/2)(a b^dag + a^dag b)]
    REAL_COUPLED = "real_coupled"  # exp[phi (a b^dag - a^dag b)]
    MATRIX = "matrix"


class BeamsplitterConvention(BaseModel):
    """A two-mode linear-optics transformation.

    The convention is summarised by its label matrix ``M``: a two-mode
    coherent state ``|g, b>`` is mapped to ``|M00 g + M01 b, M10 g + M11 b>``.
    """

    kind: BeamsplitterKind = Field(..., description="Convention family")
    angle: float = Field(0.0, description="theta for phase-coupled, phi for real-coupled")
    matrix: Tuple[complex, complex, complex, complex] = Field(
        (1, 0, 0, 1), description="Row-major label matrix for kind=matrix"
    )

    @field_validator("matrix", mode="before")
    @classmethod
    def _coerce_matrix(cls, value: Any) -> Tuple[complex, ...]:
        flat = np.asarray(value, dtype=complex).reshape(-1)
        if flat.size != 4:
            raise ValueError("beamsplitter matrix must have four entries")
        return tuple(complex(v) for v in flat)

    @model_validator(mode="after")
    def _check_unitary(self) -> "BeamsplitterConvention":
        m = self.label_matrix()
        if not np.allclose(m.conj().T @ m, np.eye(2), atol=1e-10):
            raise ValueError("beamsplitter label matrix must be unitary")
        return self

    @classmethod
    def phase_coupled(cls, theta: float) -> "BeamsplitterConvention":
        return cls(kind=BeamsplitterKind.PHASE_COUPLED, angle=theta)

    @classmethod
    def real_coupled(cls, phi: float) -> "BeamsplitterConvention":
        return cls(kind=BeamsplitterKind.REAL_COUPLED, angle=phi)

    @classmethod
    def from_matrix(cls, matrix: Any) -> "BeamsplitterConvention":
        return cls(kind=BeamsplitterKind.MATRIX, matrix=matrix)

    def label_matrix(self) -> np.ndarray:
        """Return the 2x2 matrix acting on coherent labels."""
        if self.kind == BeamsplitterKind.PHASE_COUPLED:
            c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
            return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)
        if self.kind == BeamsplitterKind.REAL_COUPLED:
            c, s = math.cos(self.angle), math.sin(self.angle)
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array(self.matrix, dtype=complex).reshape(2, 2)

    def inverse(self) -> "BeamsplitterConvention":
        """The convention undoing this one."""
        if self.kind == BeamsplitterKind.MATRIX:
            return BeamsplitterConvention.from_matrix(self.label_matrix().conj().T)
        return BeamsplitterConvention(kind=self.kind, angle=-self.angle)


class FockVector(BaseModel):
    """A single-mode state truncated at ``cutoff`` photons."""

    cutoff: int = Field(..., ge=0, description="Largest retained photon number")
    amplitudes: np.ndarray = Field(..., description="Complex amplitudes a_0..a_N")

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _freeze(cls, value: Any) -> np.ndarray:
        return frozen_array(np.ravel(value))

    @model_validator(mode="after")
    def _check_length(self) -> "FockVector":
        if self.amplitudes.shape != (self.cutoff + 1,):
            raise ValueError(
                f"expected {self.cutoff + 1} amplitudes, got {self.amplitudes.shape[0]}"
            )
        return self

    @classmethod
    def from_amplitudes(cls, amplitudes: Any) -> "FockVector":
        array = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(cutoff=array.shape[0] - 1, amplitudes=array)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> "FockVector":
        return FockVector(
            cutoff=self.cutoff, amplitudes=self.amplitudes / math.sqrt(self.norm_squared)
        )

    def as_multimode(self) -> "MultiModeState":
        return MultiModeState(mode_count=1, cutoff=self.cutoff, amplitudes=self.amplitudes)


class MultiModeState(BaseModel):
    """A pure state of ``mode_count`` modes sharing one cutoff."""

    mode_count: int = Field(..., ge=1, description="Number of optical modes")
    cutoff: int = Field(..., ge=0, description="Per-mode photon cutoff")
    amplitudes: np.ndarray = Field(..., description="Tensor of shape (N+1,)*M")

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _freeze(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_shape(self) -> "MultiModeState":
        expected = (self.cutoff + 1,) * self.mode_count
        if self.amplitudes.shape != expected:
            raise ValueError(f"expected shape {expected}, got {self.amplitudes.shape}")
        return self

    @property
    def norm_squared(self) -> float:
        flat = self.amplitudes.reshape(-1)
        return float(np.vdot(flat, flat).real)

    def normalized(self) -> "MultiModeState":
        return MultiModeState(
            mode_count=self.mode_count,
            cutoff=self.cutoff,
            amplitudes=self.amplitudes / math.sqrt(self.norm_squared),
        )

    def to_vector(self) -> FockVector:
        """Collapse a one-mode state to a :class:`FockVector`."""
        if self.mode_count != 1:
            raise ValueError(f"state has {self.mode_count} modes, expected 1")
        return FockVector(cutoff=self.cutoff, amplitudes=self.amplitudes)


PureState = Union[FockVector, MultiModeState]


class PureEnsemble(BaseModel):
    """A mixed state written as a weighted list of pure states."""

    weights: List[float] = Field(..., description="Non-negative weights summing to one")
    states: List[PureState] = Field(..., description="Normalized pure states")

    @model_validator(mode="after")
    def _check_weights(self) -> "PureEnsemble":
        if len(self.weights) != len(self.states) or not self.states:
            raise ValueError("ensemble needs one weight per state")
        if any(w < 0 for w in self.weights):
            raise ValueError("ensemble weights must be non-negative")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError("ensemble weights must sum to one")
        return self
