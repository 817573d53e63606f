"""Frobenius solutions about z = 0.

HeunCl is the solution normalised to 1 at the origin; HeunCs is the companion
solution with exponent 1 - gamma (logarithmic when gamma = 1). For gamma a
nonpositive integer HeunCl itself carries a log term and is fixed by c_{n*} = 0.
"""

from __future__ import annotations

import cmath
import enum
import math
from typing import NamedTuple

from .core import (
    DEFAULT_CONFIG,
    Config,
    ConvergenceError,
    DomainError,
    EvalQuad,
    ParameterClassError,
    Params,
    SingularValueError,
    cpow,
)
from .taylor_step import STABLE_TERMS, combined_estimate


class SeriesKind(enum.Enum):
    """Local expansion used at z = 0."""

    GenericL = "GenericL"
    LogL = "LogL"
    Sgamma1 = "Sgamma1"
    SviaReduction = "SviaReduction"


class Partial(NamedTuple):
    """Partial sums of a local expansion: value and its first two derivatives."""

    f: complex
    df: complex
    d2f: complex
    last: float
    n: int


def _pqr(p: Params, n: int):
    q, a, g, d, e = p.astuple()
    P = n * (g - 1 + n)
    Q = -q + (n - 1) * (g + d - e + n - 2)
    R = (n - 2) * e + a
    return P, Q, R


def _stu(p: Params, n: int):
    g, d, e = p.gamma, p.delta, p.epsilon
    return 1 - g - 2 * n, g + d - e + 2 * n - 3, e


def coeffs_generic(params: Params, up_to: int) -> list:
    """b_0..b_up_to of the analytic solution normalised to 1 at the origin."""
    if params.gamma_nonpos_int():
        raise ParameterClassError("gamma is a nonpositive integer; use coeffs_log",
                                  module="series_zero")
    return list(_iter_generic(params, up_to + 1))


def _iter_generic(p: Params, count: int):
    bm1, b0 = 0j, 1 + 0j
    if count <= 0:
        return
    yield b0
    for n in range(1, count):
        P, Q, R = _pqr(p, n)
        b = (Q * b0 + R * bm1) / P
        yield b
        bm1, b0 = b0, b


def _check_log_class(params: Params):
    k = params.gamma_int()
    if k is None or k > 0:
        raise ParameterClassError("gamma is not a nonpositive integer", module="series_zero")
    return 1 - k


def coeffs_log(params: Params, up_to: int):
    """(c_n, s_n, n*) for gamma in {0, -1, -2, ...}.

    ``s`` is returned as a full-length list with zeros below n*.
    """
    n_star = _check_log_class(params)
    c, s = [], []
    for cn, sn in _iter_log(params, n_star, up_to + 1):
        c.append(cn)
        s.append(sn)
    return c, s, n_star


def _iter_log(p: Params, n_star: int, count: int):
    """Yield (c_n, s_n) pairs; s_n = 0 for n < n*."""
    # gamma is snapped to the exact integer so that P_{n*} is exactly zero
    p = Params(p.q, p.alpha, complex(1 - n_star), p.delta, p.epsilon)
    cm1, c0 = 0j, 0j
    sm1, s0 = 0j, 0j
    for n in range(count):
        if n == 0:
            c, s = 1 + 0j, 0j
        elif n < n_star:
            P, Q, R = _pqr(p, n)
            c, s = (Q * c0 + R * cm1) / P, 0j
        elif n == n_star:
            _, Q, R = _pqr(p, n)
            s = (Q * c0 + R * cm1) / n_star
            c = 0j
        else:
            P, Q, R = _pqr(p, n)
            s = (Q * s0 + R * sm1) / P
            S, T, U = _stu(p, n)
            c = (Q * c0 + R * cm1 + S * s + T * s0 + U * sm1) / P
        yield c, s
        cm1, c0 = c0, c
        sm1, s0 = s0, s


def _iter_gamma1(p: Params, count: int):
    """Yield (d_n, t_n) for the logarithmic HeunCs at gamma = 1."""
    p = Params(p.q, p.alpha, 1 + 0j, p.delta, p.epsilon)
    dm1, d0 = 0j, 0j
    tm1, t0 = 0j, 0j
    for n in range(count):
        if n == 0:
            d, t = 0j, 1 + 0j
        else:
            P, Q, R = _pqr(p, n)
            t = (Q * t0 + R * tm1) / P
            S, T, U = _stu(p, n)
            d = (Q * d0 + R * dm1 + S * t + T * t0 + U * tm1) / P
        yield d, t
        dm1, d0 = d0, d
        tm1, t0 = t0, t


def _sum_plain(coeffs, z: complex, max_terms: int) -> Partial:
    it = iter(coeffs)
    b0 = next(it)
    b1 = next(it, 0j)
    f = b0 + b1 * z
    df = b1
    d2f = 0j
    last = abs(b1 * z)
    if z == 0:
        return Partial(f, df, d2f, 0.0, 1)
    hp = 1 + 0j  # z**(n-2)
    stable = 0
    n = 1
    for n, b in enumerate(it, start=2):
        t2 = b * hp
        d2f += n * (n - 1) * t2
        t1 = t2 * z
        t0 = t1 * z
        nf = f + t0
        ndf = df + n * t1
        if nf == f and ndf == df:
            stable += 1
        else:
            stable = 0
        f, df = nf, ndf
        hp *= z
        last = abs(t0)
        if stable >= STABLE_TERMS:
            break
        if n >= max_terms:
            raise ConvergenceError(f"series at 0 did not converge at z = {z}", module="series_zero")
    return Partial(f, df, d2f, last, n)


def _sum_log(pairs, z: complex, max_terms: int) -> Partial:
    """Sum sum(c_n z^n) + log(z) sum(s_n z^n) with derivatives."""
    L = cmath.log(z)
    iz = 1 / z
    it = iter(pairs)
    c0, s0 = next(it)
    c1, s1 = next(it)
    C, C1, C2 = c0 + c1 * z, c1, 0j
    S, S1, S2 = s0 + s1 * z, s1, 0j
    f = C + L * S
    df = C1 + S * iz + L * S1
    last = abs(c1 * z) + abs(L * s1 * z)
    hp = 1 + 0j
    stable = 0
    n = 1
    for n, (c, s) in enumerate(it, start=2):
        nn = n * (n - 1)
        c2, s2 = c * hp, s * hp
        C2 += nn * c2
        S2 += nn * s2
        c2 *= z
        s2 *= z
        C1 += n * c2
        S1 += n * s2
        c2 *= z
        s2 *= z
        C += c2
        S += s2
        nf = C + L * S
        ndf = C1 + S * iz + L * S1
        if nf == f and ndf == df:
            stable += 1
        else:
            stable = 0
        f, df = nf, ndf
        hp *= z
        last = abs(c2) + abs(L * s2)
        if stable >= STABLE_TERMS:
            break
        if n >= max_terms:
            raise ConvergenceError(f"log series at 0 did not converge at z = {z}", module="series_zero")
    d2f = C2 - S * iz * iz + 2 * S1 * iz + L * S2
    return Partial(f, df, d2f, last, n)


def _check_disc(z: complex):
    if abs(z) >= 1:
        raise DomainError(f"|z| = {abs(z)} outside the unit disc of the series at 0",
                          module="series_zero")


def _quad(params: Params, z: complex, part: Partial, cfg: Config) -> EvalQuad:
    if z == 0:
        return EvalQuad(part.f, part.df, cfg.machine_eps * abs(part.f), part.n)
    r = combined_estimate(params, z, part.f, part.df, part.d2f, part.last, part.n, cfg.machine_eps)
    return EvalQuad(part.f, part.df, r, part.n)


def series_kind(params: Params, which: str = "L", cfg: Config = DEFAULT_CONFIG) -> SeriesKind:
    """Which local expansion about z = 0 is used for HeunCl ("L") or HeunCs ("S")."""
    if which == "L":
        return SeriesKind.LogL if params.gamma_nonpos_int(cfg.tau_int) else SeriesKind.GenericL
    if which == "S":
        return SeriesKind.Sgamma1 if params.gamma_is_one(cfg.tau_int) else SeriesKind.SviaReduction
    raise ValueError(f"which must be 'L' or 'S', got {which!r}")


def sum_HeunCl_at0(params: Params, z: complex, cfg: Config = DEFAULT_CONFIG) -> Partial:
    z = complex(z)
    _check_disc(z)
    limit = cfg.max_terms + STABLE_TERMS + 1
    if series_kind(params, "L", cfg) is SeriesKind.LogL:
        n_star = _check_log_class(params)
        if z == 0:
            if n_star == 1:
                raise SingularValueError("HeunCl'(z) ~ -q log z diverges at z = 0 for gamma = 0 "
                                         "(HeunCl(0) = 1)", module="series_zero")
            c = [cn for cn, _ in _iter_log(params, n_star, 2)]
            return Partial(1 + 0j, c[1], 0j, 0.0, 1)
        return _sum_log(_iter_log(params, n_star, limit), z, cfg.max_terms)
    return _sum_plain(_iter_generic(params, limit), z, cfg.max_terms)


def eval_HeunCl_at0(params: Params, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    z = complex(z)
    return _quad(params, z, sum_HeunCl_at0(params, z, cfg), cfg)


def reduced_params(params: Params) -> Params:
    """Parameters of the analytic factor in HeunCs = z^(1-gamma) HeunCl(...)."""
    q, a, g, d, e = params.astuple()
    return Params(q + (g - 1) * (d - e), a + e * (1 - g), 2 - g, d, e)


def sum_HeunCs_at0(params: Params, z: complex, cfg: Config = DEFAULT_CONFIG) -> Partial:
    z = complex(z)
    _check_disc(z)
    if series_kind(params, "S", cfg) is SeriesKind.Sgamma1:
        if z == 0:
            raise SingularValueError("HeunCs has a log singularity at z = 0 for gamma = 1",
                                     module="series_zero")
        limit = cfg.max_terms + STABLE_TERMS + 1
        return _sum_log(_iter_gamma1(params, limit), z, cfg.max_terms)
    w = 1 - params.gamma
    k = params.gamma_int(cfg.tau_int)
    if k is not None:
        w = complex(1 - k)
    if z == 0:
        return _HeunCs_at_origin(params, w, cfg)
    inner = sum_HeunCl_at0(reduced_params(params), z, cfg)
    return scale_by_power(inner, z, w)


def scale_by_power(inner: Partial, z: complex, w: complex) -> Partial:
    """Product rule for z^w * g(z)."""
    zw = cpow(z, w)
    g, dg, d2g = inner.f, inner.df, inner.d2f
    iz = 1 / z
    f = zw * g
    df = zw * (dg + w * iz * g)
    d2f = zw * (d2g + 2 * w * iz * dg + w * (w - 1) * iz * iz * g)
    return Partial(f, df, d2f, abs(zw) * inner.last, inner.n)


def _HeunCs_at_origin(params: Params, w: complex, cfg: Config) -> Partial:
    if w.real < 0 or (w.real == 0 and w != 0):
        raise SingularValueError("HeunCs is unbounded at z = 0", module="series_zero")
    if w == 0:
        # gamma = 1 handled by the caller; unreachable for exact w = 0
        raise SingularValueError("HeunCs is logarithmic at z = 0", module="series_zero")
    inner_p = reduced_params(params)
    if inner_p.gamma_nonpos_int(cfg.tau_int):
        raise SingularValueError("HeunCs carries a log term at z = 0", module="series_zero")
    if w == 1:
        return Partial(0j, 1 + 0j, 0j, 0.0, 1)
    if w.real > 1:
        return Partial(0j, 0j, 0j, 0.0, 1)
    raise SingularValueError("HeunCs'(z) is unbounded at z = 0", module="series_zero")


def eval_HeunCs_at0(params: Params, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    z = complex(z)
    part = sum_HeunCs_at0(params, z, cfg)
    if z == 0:
        return EvalQuad(part.f, part.df, 0.0, part.n)
    return _quad(params, z, part, cfg)


def exp_transform(params: Params) -> Params:
    """Parameters of g in HeunC(p; z) = exp(-epsilon z) g(z)."""
    q, a, g, d, e = params.astuple()
    return Params(q - e * g, a - e * (g + d), g, d, -e)


def log_mixing_constant(params: Params) -> complex:
    """Constant A with HeunCl + A HeunCs = exp(-eps z) HeunCl(transformed) for gamma <= 0 integer."""
    n_star = _check_log_class(params)
    e = params.epsilon
    total = 0j
    for n, (c, _) in enumerate(_iter_log(params, n_star, n_star + 1)):
        k = n_star - n
        total += c * (e**k if k else 1) / math.factorial(k)
    return -total
