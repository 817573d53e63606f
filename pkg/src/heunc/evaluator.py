"""Single-point evaluation of the four confluent Heun solutions.

``evaluate`` picks a method from the geometry of the point: the series at the
origin, the connection to z = 1, the far-field combination, or plain
continuation. With ``use_improvements=False`` only the series at the origin
and continuation are used.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import connection as cn
from . import series_zero as sz
from .continuation import ContinuationTrace, eval_HeunCl_traced, eval_HeunCs_traced
from .core import (
    DEFAULT_CONFIG,
    Config,
    EvalQuad,
    FarFieldError,
    HeunError,
    Params,
    Region,
    SingularPointError,
    as_point,
    classify_point,
)


class FunctionKind(enum.Enum):
    Cl = "cl"
    Cs = "cs"
    AInf = "ainf"
    BInf = "binf"

    @classmethod
    def parse(cls, s) -> "FunctionKind":
        if isinstance(s, cls):
            return s
        key = str(s).strip().lower()
        for k in cls:
            if k.value == key or k.name.lower() == key:
                return k
        raise ValueError(f"unknown function kind {s!r}; choose from cl, cs, ainf, binf")


@dataclass(frozen=True)
class Dispatch:
    """Which region the point fell in and which method produced the value."""

    kind: FunctionKind
    region: Region
    method: str
    improvements: bool

    def to_dict(self):
        return {"kind": self.kind.value, "region": self.region.value,
                "method": self.method, "improvements": self.improvements}


def _local(kind, params, z, cfg):
    if kind is FunctionKind.Cl:
        e = sz.eval_HeunCl_at0(params, z, cfg)
    else:
        e = sz.eval_HeunCs_at0(params, z, cfg)
    return e, ContinuationTrace(e.r, e.n_terms, 0), "series_zero"


def _continued(kind, params, z, cfg):
    fn = eval_HeunCl_traced if kind is FunctionKind.Cl else eval_HeunCs_traced
    e, trace = fn(params, z, cfg)
    return e, trace, "continuation"


def _dispatch(kind, params, z, cfg, improve):
    region = classify_point(params, z, cfg)
    which = "L" if kind is FunctionKind.Cl else "S"
    if kind in (FunctionKind.AInf, FunctionKind.BInf):
        if params.epsilon_zero(cfg.tau_zero):
            raise FarFieldError(f"{kind.name} is undefined for epsilon = 0", module="evaluator")
        if z == 0 or z == 1:
            raise SingularPointError(f"z = {z} is a singular point", module="evaluator")
        e, trace = cn.eval_inf_solution(params, z, "A" if kind is FunctionKind.AInf else "B", cfg)
        method = "asymptotic" if region is Region.FarField else "continuation_from_infinity"
        return e, trace, method, region
    if region is Region.SingularPoint:
        if z == 0:
            e, trace, method = _local(kind, params, z, cfg)
            return e, trace, method, region
        if not improve:
            raise SingularPointError("z = 1 needs the connection at 1 (improvements are off)",
                                     module="evaluator")
        e = cn.eval_near_one(params, z, which, cfg)
        return e, ContinuationTrace(e.r, e.n_terms, 0), "near_one", region
    if region is Region.LocalZero:
        e, trace, method = _local(kind, params, z, cfg)
        return e, trace, method, region
    if improve and region is Region.NearOne:
        e = cn.eval_near_one(params, z, which, cfg)
        return e, ContinuationTrace(e.r, e.n_terms, 0), "near_one", region
    if improve and region is Region.FarField and cn.far_field_reliable(params, z, cfg):
        e = cn.eval_far_field(params, z, which, cfg)
        return e, ContinuationTrace(e.r, e.n_terms, 0), "far_field", region
    e, trace, method = _continued(kind, params, z, cfg)
    return e, trace, method, region


def evaluate_with_trace(kind, params, z, cfg: Config = DEFAULT_CONFIG,
                        use_improvements: bool = True):
    """Evaluate and return ``(EvalQuad, ContinuationTrace, Dispatch)``."""
    kind = FunctionKind.parse(kind)
    params = Params.of(params)
    z = as_point(z)
    region = None
    try:
        region = classify_point(params, z, cfg)
        e, trace, method, region = _dispatch(kind, params, z, cfg, use_improvements)
    except HeunError as exc:
        if exc.region is None:
            exc.region = region
        raise
    return e, trace, Dispatch(kind, region, method, use_improvements)


def evaluate(kind, params, z, cfg: Config = DEFAULT_CONFIG, use_improvements: bool = True) -> EvalQuad:
    """Value, derivative, error estimate and term count of one function at z."""
    return evaluate_with_trace(kind, params, z, cfg, use_improvements)[0]


def HeunCl(params, z, cfg: Config = DEFAULT_CONFIG, use_improvements: bool = True) -> EvalQuad:
    return evaluate(FunctionKind.Cl, params, z, cfg, use_improvements)


def HeunCs(params, z, cfg: Config = DEFAULT_CONFIG, use_improvements: bool = True) -> EvalQuad:
    return evaluate(FunctionKind.Cs, params, z, cfg, use_improvements)


def HeunCAinf(params, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    return evaluate(FunctionKind.AInf, params, z, cfg)


def HeunCBinf(params, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    return evaluate(FunctionKind.BInf, params, z, cfg)
