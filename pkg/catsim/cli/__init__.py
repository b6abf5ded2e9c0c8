"""
Command Line Interface for the catsim simulator.
"""

from .main import app

__all__ = ["app"]
