"""
Base models and common functionality for catsim state and result types.
"""

from typing import Any, Dict

import numpy as np
from pydantic import BaseModel as PydanticBaseModel
from pydantic import ConfigDict, Field, SerializerFunctionWrapHandler, field_serializer


def frozen_array(value: Any, dtype: Any = complex) -> np.ndarray:
    """Copy ``value`` into a read-only numpy array of ``dtype``."""
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


def as_complex(value: Any) -> complex:
    """Coerce ints, floats and numpy scalars to a Python complex."""
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)


def to_json_numbers(value: Any) -> Any:
    """Arrays become nested lists; complex numbers become ``[real, imag]`` pairs."""
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return np.stack([value.real, value.imag], axis=-1).tolist()
        return value.tolist()
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


class BaseModel(PydanticBaseModel):
    """Base model with common configuration.

    Models are frozen; arrays they hold are made read-only by their
    validators, so a state can be shared freely between computations.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_serializer("*", mode="wrap", when_used="json")
    def _serialize_numbers(self, value: Any, handler: SerializerFunctionWrapHandler) -> Any:
        if isinstance(value, (np.ndarray, complex, np.complexfloating)):
            return to_json_numbers(value)
        return handler(value)


class MetadataModel(BaseModel):
    """Base model carrying free-form numeric annotations."""

    metadata: Dict[str, float] = Field(
        default_factory=dict, description="Additional numeric annotations"
    )
