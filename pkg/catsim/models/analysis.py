"""
Result models for the photon-counting analysis of the rotation gate.
"""

from typing import Any, Dict, List, Tuple

import numpy as np
from pydantic import Field, field_validator

from .base import MetadataModel, frozen_array


class FidelityMap(MetadataModel):
    """Per-outcome probability and fidelity over the count grid."""

    alpha: float = Field(..., gt=0)
    theta: float = Field(...)
    n_max: int = Field(..., ge=0, description="Largest count on each axis")
    probability: np.ndarray = Field(..., description="P[n_a, n_b]")
    fidelity: np.ndarray = Field(..., description="F[n_a, n_b] after corrections")

    @field_validator("probability", "fidelity", mode="before")
    @classmethod
    def _freeze(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @property
    def total_probability(self) -> float:
        return float(np.sum(self.probability))

    @property
    def overall_fidelity(self) -> float:
        return float(np.sum(self.probability * self.fidelity) / self.total_probability)

    @property
    def max_fidelity(self) -> float:
        occupied = self.probability > 0
        return float(np.max(self.fidelity[occupied]))

    def rows(self, min_probability: float = 0.0) -> List[Dict[str, float]]:
        """Flatten to ``{n_a, n_b, probability, fidelity}`` rows."""
        rows = []
        for n_a, n_b in zip(*np.nonzero(self.probability > min_probability)):
            rows.append(
                {
                    "n_a": int(n_a),
                    "n_b": int(n_b),
                    "probability": float(self.probability[n_a, n_b]),
                    "fidelity": float(self.fidelity[n_a, n_b]),
                }
            )
        return rows


class PostselectionResult(MetadataModel):
    """Outcome set kept when a minimum ensemble fidelity is demanded."""

    alpha: float = Field(..., gt=0)
    theta: float = Field(...)
    f_min: float = Field(..., gt=0, le=1)
    accepted: List[Tuple[int, int]] = Field(..., description="Accepted (n_a, n_b) pairs")
    probability: float = Field(..., ge=0, le=1 + 1e-9, description="P_S")
    fidelity: float = Field(..., ge=0, le=1 + 1e-9, description="Ensemble fidelity of S")

    @property
    def bellcat_cost(self) -> float:
        """Average Bell-cat resources per successful rotation, ``4 / P_S + 1``."""
        return 4 / self.probability + 1
