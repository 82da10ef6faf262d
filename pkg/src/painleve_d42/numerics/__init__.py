"""Numerical integration and numeric cross-checks of the exact results."""
from .core import BACKEND, CSV_HEADER, CompiledField, PolyEvaluator, Trajectory, integrate

__all__ = ["BACKEND", "CSV_HEADER", "CompiledField", "PolyEvaluator", "Trajectory", "integrate"]
