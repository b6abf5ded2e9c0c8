"""
Experiment configuration models used by the command-line interface.
"""

import math
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ConfigDict, Field, field_validator

from .base import BaseModel
from .gates import GateStrategy, MeasurementModel

_ANGLE = re.compile(r"^(?P<num>[0-9.]*)\s*\*?\s*pi\s*(?:/\s*(?P<den>[0-9.]+))?$")


def parse_angle(value: Any) -> float:
    """Parse floats and expressions such as ``pi/16``, ``-3*pi/4`` or ``2pi``."""
    if not isinstance(value, str):
        return float(value)
    text = value.strip().lower()
    sign = -1.0 if text.startswith("-") else 1.0
    text = text.lstrip("+-").strip()
    match = _ANGLE.match(text)
    if match is None:
        return sign * float(text)
    numerator = float(match.group("num")) if match.group("num") else 1.0
    denominator = float(match.group("den")) if match.group("den") else 1.0
    return sign * numerator * math.pi / denominator


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class ExperimentKind(str, Enum):
    """Experiments runnable with ``catsim run``."""

    OVERLAP = "overlap"
    ZENO = "zeno"
    ZENO_COUNTING = "zeno_counting"
    FIDELITY_MAP = "fidelity_map"
    OVERALL_FIDELITY = "overall_fidelity"
    POSTSELECT = "postselect"
    BELLCAT_COST = "bellcat_cost"
    DAKNA_FIDELITY = "dakna_fidelity"
    DAKNA_PROBABILITY = "dakna_probability"
    DAKNA_BELL = "dakna_bell"
    DAKNA_GATE = "dakna_gate"
    LOSS_REAMP = "loss_reamp"
    THREE_QUBIT = "three_qubit"
    AMPLIFY = "amplify"
    HOMODYNE = "homodyne"
    GATE_ZZ = "gate_zz"
    GATE_RX = "gate_rx"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ExperimentParameters(BaseModel):
    """Every tunable experiment parameter; unknown keys are rejected.

    Plural fields take comma-separated lists and sweep the experiment.
    Angle fields accept expressions such as ``pi/16``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    alpha: Optional[float] = Field(None, gt=0, description="Logical amplitude")
    alphas: Optional[List[float]] = Field(None, description="Amplitude sweep")
    theta: Optional[float] = Field(None, description="Rotation angle")
    thetas: Optional[List[float]] = Field(None, description="Angle sweep")
    phi: Optional[float] = Field(None, description="Phase for two-qubit and cat gates")
    n: Optional[int] = Field(None, ge=1, description="Zeno step count")
    ns: Optional[List[int]] = Field(None, description="Zeno step sweep")
    lam: Optional[float] = Field(None, alias="lambda", gt=-1, lt=1)
    lams: Optional[List[float]] = Field(None, alias="lambdas")
    theta_bs: Optional[float] = Field(None, description="Cat-source beamsplitter angle")
    m: Optional[int] = Field(None, ge=0, description="Heralding count")
    ms: Optional[List[int]] = Field(None, description="Heralding count sweep")
    effective_min: Optional[float] = Field(None, description="Sweep start of lambda*cos^2")
    effective_max: Optional[float] = Field(None, description="Sweep end of lambda*cos^2")
    steps: Optional[int] = Field(None, ge=2, description="Points in a sweep")
    gamma: Optional[float] = Field(None, ge=0, description="Loss rate")
    t: Optional[float] = Field(None, ge=0, description="Evolution time")
    epsilon: Optional[float] = Field(None, ge=0, lt=1, description="Loss fraction")
    epsilons: Optional[List[float]] = Field(None)
    f_min: Optional[float] = Field(None, gt=0, le=1, description="Fidelity threshold")
    f_mins: Optional[List[float]] = Field(None)
    cutoff: Optional[int] = Field(None, ge=1, description="Fock cutoff")
    threshold: Optional[float] = Field(None, ge=1, description="Likelihood-ratio threshold")
    thresholds: Optional[List[float]] = Field(None)
    trajectories: Optional[int] = Field(None, ge=1, description="Monte-Carlo samples")
    losses: Optional[List[int]] = Field(None, description="Modes hit by single-photon loss")
    model: Optional[MeasurementModel] = Field(None)
    strategy: Optional[GateStrategy] = Field(None)

    @field_validator("theta", "phi", "theta_bs", mode="before")
    @classmethod
    def _angle(cls, value: Any) -> Any:
        return None if value is None else parse_angle(value)

    @field_validator("thetas", mode="before")
    @classmethod
    def _angles(cls, value: Any) -> Any:
        value = _split_list(value)
        return None if value is None else [parse_angle(v) for v in value]

    @field_validator(
        "alphas", "ns", "lams", "ms", "epsilons", "f_mins", "thresholds", "losses",
        mode="before",
    )
    @classmethod
    def _lists(cls, value: Any) -> Any:
        return _split_list(value)


class ExperimentConfig(BaseModel):
    """A fully resolved ``catsim run`` invocation."""

    experiment: ExperimentKind = Field(..., description="Experiment to run")
    parameters: ExperimentParameters = Field(default_factory=ExperimentParameters)
    output: Optional[Path] = Field(None, description="Result file")
    format: OutputFormat = Field(OutputFormat.CSV, description="Result file format")
    seed: int = Field(0, ge=0, description="Root seed for every sampler")

    def provenance(self) -> Dict[str, Any]:
        """Config summary written into result headers."""
        return {
            "experiment": self.experiment.value,
            "parameters": self.parameters.model_dump(
                mode="json", by_alias=True, exclude_none=True
            ),
            "seed": self.seed,
        }


class ExperimentResult(BaseModel):
    """Rows produced by one experiment, with the published reference."""

    experiment: ExperimentKind
    columns: List[str] = Field(..., min_length=1)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    paper_target: Optional[str] = Field(None, description="Published value being reproduced")
    tolerance: Optional[float] = Field(None, description="Acceptance tolerance")
