"""
Exceptions raised by the catsim engines.
"""

from typing import List, Optional, Sequence, Tuple


class CatsimError(Exception):
    """Base class for all catsim numerical errors."""


class TruncationError(CatsimError):
    """Raised when a state does not fit inside its Fock cutoff."""

    def __init__(self, message: str, tail_mass: Optional[float] = None):
        super().__init__(message)
        self.tail_mass = tail_mass


class ZeroProbabilityError(CatsimError):
    """Raised when a conditional state is requested for an impossible outcome."""

    def __init__(self, message: str, probability: Optional[float] = None):
        super().__init__(message)
        self.probability = probability


class DimensionMismatchError(CatsimError):
    """Raised when two states live in different spaces."""

    def __init__(self, message: str, shapes: Optional[Sequence[Tuple[int, ...]]] = None):
        super().__init__(message)
        self.shapes: List[Tuple[int, ...]] = list(shapes or [])


class InfeasibleError(CatsimError):
    """Raised when a requested fidelity target cannot be reached."""

    def __init__(self, message: str, best_fidelity: Optional[float] = None):
        super().__init__(message)
        self.best_fidelity = best_fidelity


class UncorrectableError(CatsimError):
    """Raised when more errors occurred than a code can correct."""

    def __init__(self, message: str, flipped_modes: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.flipped_modes: List[int] = list(flipped_modes or [])
