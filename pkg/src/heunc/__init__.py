"""Numerical evaluation of the confluent Heun functions.

    >>> from heunc import HeunCl, Params
    >>> e = HeunCl(Params(0.25, 0, 0.5, 0.5, 0), 0.25)   # sqrt(1 - z)
    >>> abs(e.f - 0.75 ** 0.5) < 1e-15
    True
"""

from .core import (
    DEFAULT_CONFIG,
    Config,
    ConvergenceError,
    DomainError,
    EvalQuad,
    FarFieldError,
    HeunError,
    ParameterClassError,
    Params,
    Region,
    SingularMatrixError,
    SingularPointError,
    SingularValueError,
    StepUnderflowError,
    classify_point,
    ode_coefficients,
)
from .evaluator import (
    Dispatch,
    FunctionKind,
    HeunCAinf,
    HeunCBinf,
    HeunCl,
    HeunCs,
    evaluate,
    evaluate_with_trace,
)

__all__ = [
    "Config", "DEFAULT_CONFIG", "Dispatch", "EvalQuad", "FunctionKind", "Params", "Region",
    "HeunCl", "HeunCs", "HeunCAinf", "HeunCBinf", "evaluate", "evaluate_with_trace",
    "classify_point", "ode_coefficients",
    "HeunError", "ConvergenceError", "DomainError", "FarFieldError", "ParameterClassError",
    "SingularMatrixError", "SingularPointError", "SingularValueError", "StepUnderflowError",
]
