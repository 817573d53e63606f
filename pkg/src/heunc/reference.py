"""Closed-form identities for checking the evaluators.

Nine parameter sets for which HeunCl, HeunCs (or a fixed combination) reduce
to elementary functions. Each oracle returns value, first and second
derivative on the principal branch, with points on the cuts taken as the limit
from the upper half-plane.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Tuple

from . import series_zero as sz
from .continuation import eval_HeunCl_traced, eval_HeunCs_traced
from .core import (
    DEFAULT_CONFIG,
    Config,
    EvalQuad,
    HeunError,
    Params,
    as_point,
    cpow,
    one_minus,
)
from .evaluator import FunctionKind, evaluate

EXCLUSION_RADIUS = 1e-6
CUT_BAND = 1e-12


class ExclusionZoneError(HeunError):
    """The closed form is not defined (or not finite) at the requested point."""


# -- closed forms ------------------------------------------------------------

def _roots(z):
    z = as_point(z)
    return z, cmath.sqrt(one_minus(z)), cmath.sqrt(z)


def _h1(z):
    _, a, _ = _roots(z)
    return a, -0.5 / a, -0.25 / a**3


def _h2(z):
    _, _, b = _roots(z)
    return b, 0.5 / b, -0.25 / b**3


def _h3(z):
    return 6 * z * z - 6 * z + 1, 12 * z - 6, 12 + 0j


def _h4(z):
    z = as_point(z)
    w = one_minus(z)
    P, dP, d2P = _h3(z)
    L = cmath.log(z) - cmath.log(w) - 3
    dL = 1 / z + 1 / w
    d2L = -1 / z**2 + 1 / w**2
    f = P * L - 6 * z + 3
    df = dP * L + P * dL - 6
    d2f = d2P * L + 2 * dP * dL + P * d2L
    return f, df, d2f


def _theta(z):
    z, a, b = _roots(z)
    th = cmath.log(a + 1j * b)
    ab = a * b
    d1 = 0.5j / ab
    d2 = -0.25j * (1 - 2 * z) / ab**3
    return th, d1, d2


def _h5(z):
    th, t1, t2 = _theta(z)
    c, s = cmath.cos(th), cmath.sin(th)
    return c, -s * t1, -c * t1 * t1 - s * t2


def _h6(z):
    th, t1, t2 = _theta(z)
    c, s = cmath.cos(th), cmath.sin(th)
    return -1j * s, -1j * c * t1, -1j * (-s * t1 * t1 + c * t2)


def _h7(z):
    z, a, _ = _roots(z)
    e = cmath.exp(-z)
    return e * a, e * (-a - 0.5 / a), e * (a + 1 / a - 0.25 / a**3)


def _h8(z):
    z, _, b = _roots(z)
    e = cmath.exp(-z)
    return e * b, e * (-b + 0.5 / b), e * (b - 1 / b - 0.25 / b**3)


def _h9(z):
    z = as_point(z)
    e = cmath.exp(-z)
    return e * (1 - z), e * (z - 2), e * (3 - z)


@dataclass(frozen=True)
class IdentityCase:
    """Identity HeunC-combination(params; z) = h(z).

    ``terms`` lists (weight, kind) pairs summed at the single parameter set.
    """

    index: int
    params: Params
    terms: Tuple[Tuple[complex, FunctionKind], ...]
    oracle: Callable
    entire: bool = False
    label: str = ""


_L, _S = FunctionKind.Cl, FunctionKind.Cs

CASES = {
    1: IdentityCase(1, Params(0.25, 0, 0.5, 0.5, 0), ((1, _L),), _h1, label="sqrt(1-z)"),
    2: IdentityCase(2, Params(0.25, 0, 0.5, 0.5, 0), ((1, _S),), _h2, label="sqrt(z)"),
    3: IdentityCase(3, Params(6, 0, 1, 1, 0), ((1, _L),), _h3, entire=True, label="6z^2-6z+1"),
    4: IdentityCase(4, Params(6, 0, 1, 1, 0), ((1, _S),), _h4,
                    label="(6z^2-6z+1)(log z-log(1-z)-3)-6z+3"),
    5: IdentityCase(5, Params(-0.25, 0, 0.5, 0.5, 0), ((1, _L),), _h5,
                    label="cos log(sqrt(1-z)+i sqrt(z))"),
    6: IdentityCase(6, Params(-0.25, 0, 0.5, 0.5, 0), ((1, _S),), _h6,
                    label="-i sin log(sqrt(1-z)+i sqrt(z))"),
    7: IdentityCase(7, Params(0.75, 1.5, 0.5, 0.5, 1), ((1, _L),), _h7, label="exp(-z) sqrt(1-z)"),
    8: IdentityCase(8, Params(1.25, 1.5, 0.5, 0.5, 1), ((1, _S),), _h8, label="exp(-z) sqrt(z)"),
    9: IdentityCase(9, Params(-2, 0, -1, 0, 1), ((1, _L), (1.5, _S)), _h9, entire=True,
                    label="exp(-z)(1-z)"),
}


def get_case(index: int) -> IdentityCase:
    try:
        return CASES[int(index)]
    except (KeyError, ValueError):
        raise ValueError(f"identity index must be 1..9, got {index!r}") from None


def in_exclusion_zone(z) -> bool:
    """Within 1e-6 of 0 or 1, or within 1e-12 of a cut."""
    z = as_point(z)
    if abs(z) < EXCLUSION_RADIUS or abs(z - 1) < EXCLUSION_RADIUS:
        return True
    return abs(z.imag) < CUT_BAND and (z.real < 0 or z.real > 1)


def distance_to_singular_set(z) -> float:
    """Distance from z to {0, 1} and the two cuts."""
    z = as_point(z)
    x, y = z.real, abs(z.imag)
    d0 = y if x < 0 else abs(z)
    d1 = y if x > 1 else abs(z - 1)
    return min(d0, d1)


def closed_form(index: int, z, order: int = 1):
    """(h, h') of identity ``index`` at z, or (h, h', h'') with ``order=2``."""
    case = get_case(index)
    z = as_point(z)
    if not case.entire and in_exclusion_zone(z):
        raise ExclusionZoneError(f"h{index} is excluded at z = {z}", module="reference")
    vals = case.oracle(z)
    return vals[:2] if order == 1 else vals


def oracle_residual(index: int, z) -> float:
    """|h'' + c1 h' + c0 h| / (1 + |h''|) of the closed form in the equation."""
    case = get_case(index)
    z = as_point(z)
    h, dh, d2h = closed_form(index, z, order=2)
    p = case.params
    c1 = p.gamma / z + p.delta / (z - 1) + p.epsilon
    c0 = (p.alpha * z - p.q) / (z * (z - 1))
    return abs(d2h + c1 * dh + c0 * h) / (1 + abs(d2h))


def evaluate_case(index: int, z, cfg: Config = DEFAULT_CONFIG, use_improvements: bool = True,
                  evaluator=None) -> EvalQuad:
    """The library's side of identity ``index`` (weighted sum of Heun functions)."""
    case = get_case(index)
    ev = evaluator or evaluate
    f = df = 0j
    r = 0.0
    n = 0
    for weight, kind in case.terms:
        e = ev(kind, case.params, z, cfg, use_improvements)
        f += weight * e.f
        df += weight * e.df
        r += abs(weight) * e.r
        n += e.n_terms
    return EvalQuad(f, df, r, n)


def lambda_metric(index: int, z, evaluated: EvalQuad) -> float:
    """|Delta|/(1+|h|) + |Delta'|/(1+|h'|) against the closed form."""
    h, dh = closed_form(index, z)
    return abs(evaluated.f - h) / (1 + abs(h)) + abs(evaluated.df - dh) / (1 + abs(dh))


def wronskian_weight(params: Params, z) -> complex:
    """z^-gamma (1-z)^-delta exp(-eps z), the Wronskian up to a constant."""
    p = Params.of(params)
    z = as_point(z)
    return cpow(z, -p.gamma) * cpow(one_minus(z), -p.delta) * cmath.exp(-p.epsilon * z)


def wronskian(params, z, cfg: Config = DEFAULT_CONFIG, use_improvements: bool = True,
              evaluator=None) -> complex:
    ev = evaluator or evaluate
    L = ev(FunctionKind.Cl, params, z, cfg, use_improvements)
    S = ev(FunctionKind.Cs, params, z, cfg, use_improvements)
    return L.f * S.df - L.df * S.f


def wronskian_check(params, z1, z2, evaluator=None, cfg: Config = DEFAULT_CONFIG,
                    use_improvements: bool = True) -> float:
    """|W(z1) w(z2) / (W(z2) w(z1)) - 1| with W from the evaluators."""
    p = Params.of(params)
    W1 = wronskian(p, z1, cfg, use_improvements, evaluator)
    W2 = wronskian(p, z2, cfg, use_improvements, evaluator)
    w1 = wronskian_weight(p, z1)
    w2 = wronskian_weight(p, z2)
    if W1 == 0 or W2 == 0 or w1 == 0 or w2 == 0:
        raise ExclusionZoneError("Wronskian underflows at one of the points", module="reference")
    return abs((W1 * w2) / (W2 * w1) - 1)


def transform_deviation(params, z, cfg: Config = DEFAULT_CONFIG) -> float:
    """Check of the exp(-eps z) transform identity at z, relative to 1 + |HeunCl|.

    For gamma in {0, -1, ...} the left side gains the log-mixing term
    A * HeunCs. All evaluations use plain continuation (no exp-reduction),
    so both sides are computed independently.
    """
    p = Params.of(params)
    z = as_point(z)
    tp = sz.exp_transform(p)
    lhs = eval_HeunCl_traced(p, z, cfg, exp_reduction=False)[0].f
    if p.gamma_nonpos_int(cfg.tau_int):
        A = sz.log_mixing_constant(p)
        if A != 0:
            lhs += A * eval_HeunCs_traced(p, z, cfg, exp_reduction=False)[0].f
    rhs = cmath.exp(-p.epsilon * z) * eval_HeunCl_traced(tp, z, cfg, exp_reduction=False)[0].f
    return abs(lhs - rhs) / (1 + abs(lhs))
