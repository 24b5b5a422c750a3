"""Exact bookkeeping for newform conductors of generic representations of SO(2n+1)."""

from .errors import ArtifactError, ConsistencyError, InputError, InvariantViolation
from .symbolics import HALF, HalfInt, QLaurent, UnitSign

__all__ = ["ArtifactError", "ConsistencyError", "InputError", "InvariantViolation",
           "HALF", "HalfInt", "QLaurent", "UnitSign"]
__version__ = "0.1.0"
