"""
Models for photon-loss records.
"""

from typing import List

from pydantic import Field, model_validator

from .base import BaseModel, MetadataModel


class LossHistory(BaseModel):
    """Photon-loss jump times observed during ``[0, t]``."""

    gamma: float = Field(..., ge=0.0, description="Loss rate")
    t: float = Field(..., ge=0.0, description="Total evolution time")
    events: List[float] = Field(default_factory=list, description="Jump times")

    @model_validator(mode="after")
    def _check_events(self) -> "LossHistory":
        for earlier, later in zip(self.events, self.events[1:]):
            if later <= earlier:
                raise ValueError("loss events must be strictly increasing")
        if self.events and (self.events[0] < 0 or self.events[-1] > self.t):
            raise ValueError(f"loss events must lie inside [0, {self.t}]")
        return self

    @property
    def count(self) -> int:
        return len(self.events)


class ReamplificationReport(MetadataModel):
    """Exhaustive statistics of one re-amplification step."""

    success_probability: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    heralded_failure_probability: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    vacuum_failure_probability: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    success_fidelity: float = Field(..., ge=0.0, le=1.0 + 1e-9)
