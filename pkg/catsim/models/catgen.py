"""
Models for conditional cat generation.
"""

import math

from pydantic import ConfigDict, Field, field_validator

from .base import BaseModel, MetadataModel


class CatGenSpec(BaseModel):
    """Squeeze, split, count: the parameters of a heralded cat source."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., alias="lambda", gt=-1.0, lt=1.0, description="Squeezing parameter")
    theta_bs: float = Field(..., description="Beamsplitter angle; mode 1 keeps cos(theta)")
    m: int = Field(..., ge=0, description="Heralding photon count")

    @field_validator("m")
    @classmethod
    def _even_count(cls, value: int) -> int:
        if value % 2:
            raise ValueError("only even heralding counts produce even cats")
        return value

    @property
    def effective(self) -> float:
        """lambda * cos^2(theta), the only combination the state depends on."""
        return self.lam * math.cos(self.theta_bs) ** 2


class DaknaFidelity(MetadataModel):
    """Best match between a heralded state and an ideal plus cat."""

    best_alpha: float = Field(..., ge=0.0)
    fidelity: float = Field(..., ge=0.0, le=1.0 + 1e-9)


class DaknaGateReport(MetadataModel):
    """Fock-space run of the bare rotation with heralded inputs."""

    alpha: float = Field(..., ge=0.0, description="Logical amplitude used")
    phi: float = Field(..., description="Target phase: goal is e^{i phi}|a> + e^{-i phi}|-a>")
    fidelity: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    qubit_fidelity: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    resource_fidelity: float = Field(..., ge=0.0, le=1.0 + 1e-9)
