"""
Runtime settings for catsim.

Values come from the environment (optionally a ``.env`` file); nothing is
required and every setting has a documented default.
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """Numerical tolerances and defaults shared by every engine."""

    model_config = ConfigDict(frozen=True)

    tail_tolerance: float = Field(
        1e-10, gt=0, description="Maximum mass allowed in the top two Fock levels"
    )
    zero_probability: float = Field(
        1e-30, gt=0, description="Outcome probabilities below this are undefined"
    )
    merge_tolerance: float = Field(
        1e-12, ge=0, description="Coherent labels closer than this are merged"
    )
    teleport_max_rounds: int = Field(
        10, ge=1, description="Cap on the doubling retry schedule"
    )
    log_level: str = Field("WARNING", description="CLI log level")


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    """Build the settings once from ``CATSIM_*`` environment variables."""
    return Settings(
        tail_tolerance=float(os.getenv("CATSIM_TAIL_TOLERANCE", "1e-10")),
        zero_probability=float(os.getenv("CATSIM_ZERO_PROBABILITY", "1e-30")),
        merge_tolerance=float(os.getenv("CATSIM_MERGE_TOLERANCE", "1e-12")),
        teleport_max_rounds=int(os.getenv("CATSIM_TELEPORT_MAX_ROUNDS", "10")),
        log_level=os.getenv("CATSIM_LOG_LEVEL", "WARNING").upper(),
    )
