"""Power series about a regular point and the two error estimators."""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

from .core import (
    DEFAULT_CONFIG,
    Config,
    ConvergenceError,
    DomainError,
    EvalQuad,
    HeunError,
    Params,
    SingularPointError,
)

# a partial sum must stay bitwise unchanged this many terms in a row
STABLE_TERMS = 2


class NearZStar(HeunError):
    """The residual estimate is unreliable: q - alpha z is nearly zero."""


class StepSeed(NamedTuple):
    z0: complex
    H0: complex
    H0p: complex


def z_star_guard(params: Params, z: complex) -> bool:
    """True when the residual estimate should not be trusted at ``z``."""
    q, a = params.q, params.alpha
    return abs(q - a * z) < 1e-2 * (1 + abs(q) + abs(a) * abs(z))


def residual_estimate(params: Params, z: complex, f: complex, df: complex, d2f: complex) -> float:
    """|f_ - f| where f_ is the value implied by the equation from (f', f'')."""
    if z_star_guard(params, z):
        raise NearZStar(f"residual estimate unreliable near z* = q/alpha (z = {z})",
                        module="taylor_step")
    p = params
    implied = (z * (z - 1) * d2f
               + (p.gamma * (z - 1) + p.delta * z + p.epsilon * z * (z - 1)) * df) / (p.q - p.alpha * z)
    return abs(implied - f)


def heuristic_estimate(last_term: float, n: int, partial_sum: float, machine_eps: float) -> float:
    return math.sqrt(n) * last_term + machine_eps * n * partial_sum


def combined_estimate(params, z, f, df, d2f, last_term, n, machine_eps) -> float:
    """Heuristic estimate inside the z* guard, otherwise the larger of both."""
    rh = heuristic_estimate(last_term, max(n, 1), abs(f), machine_eps)
    if z_star_guard(params, z):
        return rh
    return max(rh, residual_estimate(params, z, f, df, d2f))


def _check_center(z0):
    if z0 == 0 or z0 == 1:
        raise SingularPointError(f"cannot expand about the singular point {z0}",
                                 module="taylor_step")


def step_coeffs(params: Params, seed: StepSeed, up_to: int) -> list:
    """Coefficients c_0..c_up_to of the expansion about ``seed.z0``."""
    z0 = complex(seed.z0)
    _check_center(z0)
    q, a, g, d, e = params.astuple()
    out = [complex(seed.H0), complex(seed.H0p)][: up_to + 1]
    cm1, c0, c1 = 0j, out[0], (out[1] if up_to >= 1 else 0j)
    zz = z0 * (z0 - 1)
    A1 = e * z0 * z0 + z0 * (g + d - e) - g
    B1 = a * z0 - q
    two_z0_m1 = 2 * z0 - 1
    C1 = 2 * e * z0 + g - e + d
    for n in range(2, up_to + 1):
        P = n * (1 - n) * zz
        Q = (n - 1) * (A1 + (n - 2) * two_z0_m1)
        R = B1 + (n - 2) * (C1 + n - 3)
        S = a + (n - 3) * e
        c = (Q * c1 + R * c0 + S * cm1) / P
        out.append(c)
        cm1, c0, c1 = c0, c1, c
    return out


def sum_step(params: Params, seed: StepSeed, z: complex, cfg: Config = DEFAULT_CONFIG):
    """Sum the expansion at ``z``; returns (f, f', f'', last_term, N)."""
    z0 = complex(seed.z0)
    _check_center(z0)
    z = complex(z)
    h = z - z0
    H0, H0p = complex(seed.H0), complex(seed.H0p)
    if h == 0:
        return H0, H0p, None, 0.0, 0
    radius = min(abs(z0), abs(z0 - 1))
    if abs(h) >= radius:
        raise DomainError(f"|z - z0| = {abs(h)} outside the disc of radius {radius}",
                          module="taylor_step")
    q, a, g, d, e = params.astuple()
    zz = z0 * (z0 - 1)
    A1 = e * z0 * z0 + z0 * (g + d - e) - g
    B1 = a * z0 - q
    two_z0_m1 = 2 * z0 - 1
    C1 = 2 * e * z0 + g - e + d
    # recur on the scaled terms a_n = c_n h^n: the c_n themselves grow like
    # radius^-n and overflow for small discs
    ih = 1 / h
    ih2 = ih * ih
    hQ, hR, hS = h, h * h, h * h * h
    am1, a0, a1 = 0j, H0, H0p * h
    f = H0 + a1
    df = H0p
    d2f = 0j
    stable = 0
    last = abs(a1)
    max_terms = cfg.max_terms
    n = 1
    for n in range(2, max_terms + 1):
        P = n * (1 - n) * zz
        Q = (n - 1) * (A1 + (n - 2) * two_z0_m1)
        R = B1 + (n - 2) * (C1 + n - 3)
        S = a + (n - 3) * e
        t0 = (Q * hQ * a1 + R * hR * a0 + S * hS * am1) / P
        am1, a0, a1 = a0, a1, t0
        t1 = n * t0 * ih
        d2f += (n - 1) * t1 * ih
        nf = f + t0
        ndf = df + t1
        if nf == f and ndf == df:
            stable += 1
        else:
            stable = 0
            if not (cmath.isfinite(nf) and cmath.isfinite(ndf)):
                raise ConvergenceError(f"Taylor series about {z0} overflowed at {z}",
                                       module="taylor_step")
        f, df = nf, ndf
        if stable >= STABLE_TERMS:
            last = abs(t0)
            break
    else:
        raise ConvergenceError(f"Taylor series about {z0} did not converge at {z} "
                               f"within {max_terms} terms", module="taylor_step")
    return f, df, d2f, last, n


def eval_step(params: Params, seed: StepSeed, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    f, df, d2f, last, n = sum_step(params, seed, z, cfg)
    if n == 0:
        return EvalQuad(f, df, 0.0, 0)
    r = combined_estimate(params, complex(z), f, df, d2f, last, n, cfg.machine_eps)
    return EvalQuad(f, df, r, n)
