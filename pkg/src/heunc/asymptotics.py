"""Formal solutions at infinity and their optimally truncated sums."""

from __future__ import annotations

import cmath
import functools
import math

from .core import (
    ConvergenceError,
    EvalQuad,
    MACHINE_EPS,
    FarFieldError,
    ParameterClassError,
    Params,
    as_point,
    cpow,
)
from .series_zero import exp_transform

MAX_ASYMPTOTIC_TERMS = 500


def _require_eps(params: Params):
    if params.epsilon == 0:
        raise FarFieldError("the expansion at infinity needs epsilon != 0", module="asymptotics")


def beta_coeffs(params: Params, up_to: int) -> list:
    """beta_0..beta_up_to; the n-th series term is beta_n n! / (eps z)^n."""
    _require_eps(params)
    return list(_iter_beta(params, up_to + 1))


def beta_recurrence_terms(p: Params, n: int):
    """(Q~_n, R~_n) with beta_n = Q~_n beta_{n-1} + R~_n beta_{n-2}."""
    q, a, g, d, e = p.astuple()
    s = a / e
    Qt = 1 + (-q + s * (2 * n - g - d - 1 + s) + (g + d - e + 1) * (1 - n) + a - 1) / (n * n)
    if n >= 2:
        Rt = e * (n - 2 + s) * (g - n + 1 - s) / (n * n * (n - 1))
    else:
        Rt = 0j
    return Qt, Rt


def _iter_beta(p: Params, count: int):
    bm1, b0 = 0j, 1 + 0j
    if count <= 0:
        return
    yield b0
    for n in range(1, count):
        Qt, Rt = beta_recurrence_terms(p, n)
        b = Qt * b0 + Rt * bm1
        yield b
        bm1, b0 = b0, b


def _sum_truncated(p: Params, z: complex):
    """Optimally truncated sum of beta_n n!/(eps z)^n and its z-derivative.

    Returns (S, dS, r_rel, n). Summation stops at the least term or once both
    partial sums are stable; ``r_rel`` is the first omitted term's magnitude.
    """
    e = p.epsilon
    x = 1 / (e * z)
    S = 1 + 0j
    dS = 0j
    prev_mag = 1.0
    term_scale = 1 + 0j  # n! / (eps z)^n
    stable = 0
    it = _iter_beta(p, MAX_ASYMPTOTIC_TERMS + 2)
    next(it)
    n = 0
    r = 0.0
    for n, b in enumerate(it, start=1):
        term_scale *= n * x
        t = b * term_scale
        mag = abs(t)
        if mag > prev_mag and prev_mag < 1:
            # past the least term
            r = mag
            n -= 1
            break
        nS = S + t
        ndS = dS - n * t / z
        if nS == S and ndS == dS:
            stable += 1
        else:
            stable = 0
        S, dS = nS, ndS
        if mag != 0:
            prev_mag = mag
        r = mag
        if stable >= 2:
            break
    else:
        raise ConvergenceError("asymptotic series did not reach its least term", module="asymptotics")
    return S, dS, r, n


def eval_A_inf(params: Params, z) -> EvalQuad:
    """(-z)^(-alpha/eps) * sum beta_n n!/(eps z)^n, optimally truncated."""
    p = Params.of(params)
    _require_eps(p)
    z = as_point(z)
    if z == 0:
        raise FarFieldError("the expansion at infinity is meaningless at z = 0", module="asymptotics")
    s = p.alpha / p.epsilon
    S, dS, r_rel, n = _sum_truncated(p, z)
    pref = cpow(-z, -s)
    f = pref * S
    df = pref * (dS - s * S / z)
    return EvalQuad(f, df, abs(pref) * (r_rel + n * MACHINE_EPS * abs(S)), n)


def eval_B_inf(params: Params, z) -> EvalQuad:
    """exp(-eps z) times the power-type solution of the transformed equation."""
    p = Params.of(params)
    _require_eps(p)
    z = as_point(z)
    arg = -p.epsilon * z
    if arg.real > 709:
        raise FarFieldError(f"exp(-eps z) overflows: log|.| = {arg.real:.1f}", module="asymptotics")
    inner = eval_A_inf(exp_transform(p), z)
    w = cmath.exp(arg)
    return EvalQuad(w * inner.f, w * (inner.df - p.epsilon * inner.f), abs(w) * inner.r, inner.n_terms)


def term_magnitudes(params: Params, z, count: int) -> list:
    """|beta_n n!/(eps z)^n| for n < count (diagnostic scan)."""
    p = Params.of(params)
    _require_eps(p)
    x = 1 / (p.epsilon * complex(z))
    out = []
    scale = 1 + 0j
    for n, b in enumerate(_iter_beta(p, count)):
        if n:
            scale *= n * x
        out.append(abs(b * scale))
    return out


def eps_zero_coeffs(params: Params, sign: int, up_to: int) -> list:
    """beta^{+-}_n for the epsilon = 0, alpha != 0 expansion."""
    p = Params.of(params)
    if p.epsilon != 0 or p.alpha == 0:
        raise ParameterClassError("this expansion needs epsilon = 0 and alpha != 0",
                                  module="asymptotics")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    q, a, g, d, _ = p.astuple()
    ra = cmath.sqrt(a)
    gd = g + d
    b = [0j, 0j, 1 + 0j]  # beta_{-2}, beta_{-1}, beta_0
    for n in range(1, up_to + 1):
        P = 4j * n * ra
        Q = (n - 1.5) * (n + 0.5) + 4 * (a - q) - gd * (gd - 2)
        R = 4j * ra * (n - 2 + d)
        S = -(n - 1.5 - g + d) * (n - 3.5 + g + d)
        b.append((sign * Q * b[-1] + R * b[-2] + sign * S * b[-3]) / P)
    return b[2:]


def eval_eps_zero(params: Params, sign: int, z, n_terms: int):
    """K-term sum of the epsilon = 0 expansion; returns (f, f', f'')."""
    p = Params.of(params)
    z = as_point(z)
    beta = eps_zero_coeffs(p, sign, n_terms - 1)
    lam = 0.25 - (p.gamma + p.delta) / 2
    root = cmath.sqrt(p.alpha * z)
    # d/dz of 2i*sign*sqrt(alpha z) = i*sign*sqrt(alpha z)/z
    phase = cmath.exp(2j * sign * root)
    pref = cpow(z, lam) * phase
    dlog = lam / z + 1j * sign * root / z
    d2log = -lam / z**2 - 0.5j * sign * root / z**2
    S = dS = d2S = 0j
    for n, b in enumerate(beta):
        k = -n / 2
        t = b * cpow(z, complex(k))
        S += t
        dS += k * t / z
        d2S += k * (k - 1) * t / z**2
    f = pref * S
    df = pref * (dS + dlog * S)
    d2f = pref * (d2S + 2 * dlog * dS + (dlog * dlog + d2log) * S)
    return f, df, d2f


@functools.lru_cache(maxsize=None)
def far_field_radius(machine_eps: float) -> float:
    """Smallest R on a 0.5 grid where min_n n!/R^n drops below machine_eps."""
    if not 0 < machine_eps < 1:
        raise ValueError("machine_eps must lie in (0, 1)")
    R = 0.5
    while True:
        if _min_term(R) < machine_eps:
            return R
        R += 0.5


def _min_term(R: float) -> float:
    # n!/R^n is minimal at n = floor(R)
    n = int(math.floor(R))
    return math.exp(math.lgamma(n + 1) - n * math.log(R))
