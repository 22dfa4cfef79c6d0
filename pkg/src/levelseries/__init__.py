"""Exact computations with level-delta limit linear series on a two-component
nodal curve of rational components."""

from .abelmap import AbelClass, Divisor, abel, compare_Pg, divisor_of_section, enumerate_Pg
from .curvemodel import CurveConfig, LimitSeries, fiber_sample, forget, series_profile, validate_series
from .linked import LinkedSequence, expand_to_exact, is_exact, numerical_profile, truncate
from .numfn import NumericalFunction, enumerate_refinements, fiber_dimension, is_admissible, refine_fff, restrict
from .qlinalg import GF, QQ, Field, Matrix, Subspace

__version__ = "0.1.0"

__all__ = [
    "AbelClass",
    "CurveConfig",
    "Divisor",
    "Field",
    "GF",
    "LimitSeries",
    "LinkedSequence",
    "Matrix",
    "NumericalFunction",
    "QQ",
    "Subspace",
    "abel",
    "compare_Pg",
    "divisor_of_section",
    "enumerate_Pg",
    "enumerate_refinements",
    "expand_to_exact",
    "fiber_dimension",
    "fiber_sample",
    "forget",
    "is_admissible",
    "is_exact",
    "numerical_profile",
    "refine_fff",
    "restrict",
    "series_profile",
    "truncate",
    "validate_series",
]
