"""
Coherent-superposition and logical-qubit models.
"""

import math
from typing import Any, List, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base import BaseModel, as_complex, frozen_array


class CoherentSuperposition(BaseModel):
    """A finite sum of multi-mode coherent-state products.

    Term ``t`` is ``coefficients[t] * |labels[t, 0]> ... |labels[t, M-1]>``.
    Terms are not orthogonal; norms and overlaps go through the Gram matrix
    in :mod:`catsim.core.coherent_algebra`.
    """

    mode_count: int = Field(..., ge=1, description="Number of modes per term")
    coefficients: np.ndarray = Field(..., description="Complex weights, shape (T,)")
    labels: np.ndarray = Field(..., description="Coherent amplitudes, shape (T, M)")

    @field_validator("coefficients", mode="before")
    @classmethod
    def _freeze_coefficients(cls, value: Any) -> np.ndarray:
        return frozen_array(np.ravel(value))

    @field_validator("labels", mode="before")
    @classmethod
    def _freeze_labels(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_shapes(self) -> "CoherentSuperposition":
        terms = self.coefficients.shape[0]
        if self.labels.shape != (terms, self.mode_count):
            raise ValueError(
                f"labels must have shape ({terms}, {self.mode_count}), "
                f"got {self.labels.shape}"
            )
        if terms == 0:
            raise ValueError("a superposition needs at least one term")
        return self

    @classmethod
    def from_terms(cls, terms: List[Tuple[complex, Tuple[complex, ...]]]) -> "CoherentSuperposition":
        """Build from ``[(coefficient, (label_0, ..., label_M-1)), ...]``."""
        coefficients = [c for c, _ in terms]
        labels = [list(l) for _, l in terms]
        return cls(mode_count=len(labels[0]), coefficients=coefficients, labels=labels)

    @property
    def term_count(self) -> int:
        return int(self.coefficients.shape[0])


class QubitState(BaseModel):
    """``mu |-alpha> + nu |alpha>`` normalized with the Gram metric."""

    mu: complex = Field(..., description="Weight of |-alpha>")
    nu: complex = Field(..., description="Weight of |alpha>")
    alpha: float = Field(..., gt=0, description="Coherent amplitude of the basis states")

    @field_validator("mu", "nu", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> complex:
        return as_complex(value)

    @model_validator(mode="after")
    def _check_norm(self) -> "QubitState":
        if abs(self.gram_norm() - 1.0) > 1e-10:
            raise ValueError(
                f"qubit is not normalized: <psi|psi> = {self.gram_norm():.12g}"
            )
        return self

    def gram_norm(self) -> float:
        s = math.exp(-2 * self.alpha**2)
        cross = 2 * s * (self.mu.conjugate() * self.nu).real
        return abs(self.mu) ** 2 + abs(self.nu) ** 2 + cross

    @classmethod
    def normalized(cls, mu: complex, nu: complex, alpha: float) -> "QubitState":
        """Rescale ``(mu, nu)`` so the state has unit norm."""
        mu, nu = complex(mu), complex(nu)
        s = math.exp(-2 * alpha**2)
        norm2 = abs(mu) ** 2 + abs(nu) ** 2 + 2 * s * (mu.conjugate() * nu).real
        if norm2 <= 0:
            raise ValueError("cannot normalize a zero qubit")
        scale = 1 / math.sqrt(norm2)
        return cls(mu=mu * scale, nu=nu * scale, alpha=alpha)

    @classmethod
    def worst_case(cls, alpha: float) -> "QubitState":
        """The equal-weight input ``mu = nu`` (the plus cat)."""
        return cls.normalized(1.0, 1.0, alpha)

    @property
    def coordinates(self) -> np.ndarray:
        return np.array([self.mu, self.nu], dtype=complex)
