"""Exact selective graph coloring and random perfect graph generation."""

from ._accel import backend
from .errors import (AccuracyError, CapabilityError, GenerationFailure, InputError,
                     InstanceFormatError, PerfectnessViolation, SelColError, SolverFailure,
                     UndefinedDensityError)
from .graph import Graph
from .instance import SelColInstance
from .solver import SolveReport, solve

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "CapabilityError", "GenerationFailure", "Graph", "InputError",
    "InstanceFormatError", "PerfectnessViolation", "SelColError", "SelColInstance",
    "SolveReport", "SolverFailure", "UndefinedDensityError", "backend", "solve",
]
