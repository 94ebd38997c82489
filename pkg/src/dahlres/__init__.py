"""Optimal relative backward error of one-step methods on the test equation y' = lambda*y."""
from .backward_error import (
    OrderStar,
    ResidualSample,
    SkeletonStep,
    alpha_from_skeleton,
    delta_series,
    measure_order,
    optimal_delta,
    optimal_interpolant,
    unwinding_k,
)
from .contour import ContourSet, contours
from .field import Field, GridSpec, sample_field
from .kernels import BACKEND
from .methods import MethodInfo, MethodSpec, parse_spec, resolve, resolve_string, tau_stability_function
from .ratfun import ButcherTableau, Polynomial, RationalFunction, eval_rf, pade_exp, series, stability_function

__version__ = "0.1.0"

__all__ = [
    "OrderStar", "ResidualSample", "SkeletonStep", "alpha_from_skeleton", "delta_series",
    "measure_order", "optimal_delta", "optimal_interpolant", "unwinding_k",
    "ContourSet", "contours", "Field", "GridSpec", "sample_field", "BACKEND",
    "MethodInfo", "MethodSpec", "parse_spec", "resolve", "resolve_string", "tau_stability_function",
    "ButcherTableau", "Polynomial", "RationalFunction", "eval_rf", "pade_exp", "series",
    "stability_function",
]
