"""Exact arithmetic for p-adic power series with log-growth norms.

Submodules: ``padic_arith`` (scalars), ``growth_series`` (truncated series
and their norms), ``line_opens`` (growth classes on the line),
``ode_solver`` (formal solutions of linear systems), ``tube_engine``
(tempered tubes and Koszul reduction), ``derham_cech`` (truncated
cohomology) and ``cli``.
"""
from .errors import (DivergentSubstitution, FormatError, NotDivisible,
                     PresentationDefect, RelationError, SpecMismatch,
                     TemperedError, WindowError)
from .growth_series import GrowthClass, GrowthSeries, SeriesSpec
from .kernels import BACKEND
from .padic_arith import Prime

__version__ = "0.1.0"

__all__ = ["BACKEND", "DivergentSubstitution", "FormatError", "GrowthClass",
           "GrowthSeries", "NotDivisible", "PresentationDefect", "Prime",
           "RelationError", "SeriesSpec", "SpecMismatch", "TemperedError",
           "WindowError"]
