"""Numerical connection coefficients and the evaluators built on them.

Near z = 1 the local solutions at 0 are written in the basis of the solutions
at 1; for large |eps z| they are written in the basis of the two formal
solutions at infinity. The coefficients are found by matching values and
derivatives at a point and cached per parameter set.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

from . import asymptotics as asy
from . import series_zero as sz
from .continuation import (
    ContinuationTrace,
    continue_along,
    eval_HeunCl_traced,
    eval_HeunCs_traced,
)
from .core import (
    DEFAULT_CONFIG,
    Config,
    EvalQuad,
    FarFieldError,
    Params,
    SingularMatrixError,
    SingularValueError,
    as_point,
    one_minus,
)

DET_TOL = 1e-10
THETA_NUDGE = 1e-6


@dataclass(frozen=True)
class Solve2:
    """Solution of a 2x2 matching system with a propagated error bound."""

    x1: complex
    x2: complex
    err: float
    scaled_det: float


def solve_matching(a11, a12, a21, a22, b1, b2, err_rows=(0.0, 0.0, 0.0)) -> Solve2:
    """Solve [[a11, a12], [a21, a22]] x = [b1, b2] by explicit inversion.

    ``err_rows`` = (error of b, error of column 1, error of column 2) feeds a
    first-order bound on the error of x.
    """
    det = a11 * a22 - a12 * a21
    n1 = math.hypot(abs(a11), abs(a12))
    n2 = math.hypot(abs(a21), abs(a22))
    scale = n1 * n2
    sdet = abs(det) / scale if scale else 0.0
    if not sdet >= DET_TOL:
        raise SingularMatrixError(f"matching matrix is singular (scaled det {sdet:.2e})",
                                  module="connection")
    x1 = (a22 * b1 - a12 * b2) / det
    x2 = (a11 * b2 - a21 * b1) / det
    inv_norm = (abs(a11) + abs(a12) + abs(a21) + abs(a22)) / abs(det)
    eb, e1, e2 = err_rows
    err = inv_norm * (2 * eb + 2 * (e1 * abs(x1) + e2 * abs(x2)))
    return Solve2(x1, x2, err, sdet)


def mirrored_params(params: Params) -> Params:
    """Parameters of the local solutions at 1, taken as functions of 1 - z."""
    q, a, g, d, e = params.astuple()
    return Params(q - a, -a, d, g, -e)


@dataclass(frozen=True)
class OneConnection:
    C1: complex
    C2: complex
    err: float


@dataclass(frozen=True)
class InfConnection:
    E1: complex
    E2: complex
    D1: complex
    D2: complex
    d: tuple  # ((d11, d12), (d21, d22))
    err: float
    theta: float


class CoeffCache:
    """Process-wide store of connection coefficients keyed by exact parameter bits.

    Reads are lock-free; the first value stored under a key is the one served.
    """

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()
        self.solves = 0

    def get(self, key):
        return self._data.get(key)

    def put_if_absent(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()
            self.solves = 0

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data


CACHE = CoeffCache()


def _eval(which, params, z, cfg):
    if abs(z) < cfg.kappa:
        # direct local sums keep a signed-zero imaginary part intact, which
        # the mirrored variable 1 - z relies on for the upper-limit rule
        if which == "L":
            return sz.eval_HeunCl_at0(params, z, cfg)
        return sz.eval_HeunCs_at0(params, z, cfg)
    if which == "L":
        return eval_HeunCl_traced(params, z, cfg)[0]
    return eval_HeunCs_traced(params, z, cfg)[0]


def _cfg_key(cfg: Config):
    return (cfg.kappa, cfg.n_diamond, cfg.one_matching_point, cfg.infinity_matching_radius,
            cfg.resolved_far_field_R(), cfg.adaptive, cfg.max_terms)


def match_at_one(params: Params, which: str = "L", cfg: Config = DEFAULT_CONFIG,
                 cache: CoeffCache = CACHE) -> OneConnection:
    """Coefficients of HeunCl (or HeunCs) in the basis of the local solutions at 1."""
    params = Params.of(params)
    if which not in ("L", "S"):
        raise ValueError("which must be 'L' or 'S'")
    key = ("one", which, params.key(), _cfg_key(cfg))
    hit = cache.get(key)
    if hit is not None:
        return hit
    zm = complex(cfg.one_matching_point)
    mp = mirrored_params(params)
    f0 = _eval(which, params, zm, cfg)
    w = one_minus(as_point(zm))
    f1 = _eval("L", mp, w, cfg)
    f2 = _eval("S", mp, w, cfg)
    sol = solve_matching(f1.f, f2.f, -f1.df, -f2.df, f0.f, f0.df, (f0.r, f1.r, f2.r))
    cache.solves += 1
    return cache.put_if_absent(key, OneConnection(sol.x1, sol.x2, sol.err))


def eval_near_one(params: Params, z, which: str = "L", cfg: Config = DEFAULT_CONFIG,
                  cache: CoeffCache = CACHE) -> EvalQuad:
    params = Params.of(params)
    z = as_point(z)
    con = match_at_one(params, which, cfg, cache)
    mp = mirrored_params(params)
    w = one_minus(z)
    f1 = _eval("L", mp, w, cfg)
    C1, C2 = con.C1, con.C2
    if C2 != 0 and w == 0 and abs(C2) <= con.err + 10 * cfg.machine_eps * abs(C1):
        # the unbounded partner's coefficient is zero within its own accuracy
        C2 = 0j
    if C2 == 0:
        f2 = EvalQuad(0j, 0j, 0.0, 0)
    else:
        try:
            f2 = _eval("S", mp, w, cfg)
        except SingularValueError as exc:
            raise SingularValueError(f"function is unbounded at z = {z}: {exc}",
                                     module="connection") from exc
    f = C1 * f1.f + C2 * f2.f
    df = -C1 * f1.df - C2 * f2.df
    r = abs(C1) * f1.r + abs(C2) * f2.r + con.err * (abs(f1.f) + abs(f2.f))
    return EvalQuad(f, df, r, f1.n_terms + f2.n_terms)


def sector_of(z: complex) -> int:
    """+1 for the upper half-plane (and the real axis, by the upper-limit rule), else -1."""
    return 1 if z.imag >= 0 else -1


def matching_angle(epsilon: complex, sector: int) -> float:
    """Direction of the anti-Stokes ray (i/eps or -i/eps) that lies in the sector."""
    for cand in (1j / epsilon, -1j / epsilon):
        th = cmath.phase(cand)
        # strictly inside, with a margin against sin(pi) != 0 in floating point
        if sector * math.sin(th) > 1e-12:
            return th
    # ray along the real axis: nudge into the sector
    return cmath.phase(1j / epsilon) + sector * THETA_NUDGE


def far_field_reliable(params: Params, z, cfg: Config = DEFAULT_CONFIG) -> bool:
    """Whether the matched far-field combination can be trusted at z.

    The coefficients are matched on the anti-Stokes ray theta of the sector of
    z; across the Stokes lines the expansions pick up switching terms of size
    exp(-|eps z| sin D), D the angle between z and the opposite ray theta + pi.
    Inside the half-plane this only matters when eps is nearly imaginary.
    """
    params = Params.of(params)
    z = as_point(z)
    if params.epsilon_zero(cfg.tau_zero):
        return False
    theta = matching_angle(params.epsilon, sector_of(z))
    D = abs(cmath.phase(z * cmath.exp(-1j * (theta + math.pi))))
    if D >= math.pi / 2:
        return True
    return abs(params.epsilon * z) * math.sin(D) >= cfg.resolved_far_field_R()


def _transform_matrix(params: Params, cfg: Config):
    """K with exp(-eps z) [Cl(Tp), Cs(Tp)] = [Cl(p), Cs(p)] K (columns)."""
    k = params.gamma_int(cfg.tau_int)
    if k is not None and k <= 0:
        A = sz.log_mixing_constant(params)
        return ((1, 0), (A, 1))
    if k is not None and k >= 2:
        A = sz.log_mixing_constant(sz.reduced_params(params))
        return ((1, A), (0, 1))
    return ((1, 0), (0, 1))


def _far_seed_and_match(p: Params, theta: float, R: float, cfg: Config):
    u = cmath.exp(1j * theta)
    z_inf = u * (R / abs(p.epsilon))
    z_hat = u * cfg.infinity_matching_radius
    seed = asy.eval_A_inf(p, z_inf)
    f0, _ = continue_along(p, [z_inf, z_hat], seed, cfg)
    f1 = eval_HeunCl_traced(p, z_hat, cfg)[0]
    f2 = eval_HeunCs_traced(p, z_hat, cfg)[0]
    return solve_matching(f1.f, f2.f, f1.df, f2.df, f0.f, f0.df, (f0.r, f1.r, f2.r))


def match_at_infinity(params: Params, sector: int, cfg: Config = DEFAULT_CONFIG,
                      cache: CoeffCache = CACHE) -> InfConnection:
    params = Params.of(params)
    if params.epsilon_zero(cfg.tau_zero):
        raise FarFieldError("no connection to infinity for epsilon = 0", module="connection")
    if sector not in (1, -1):
        raise ValueError("sector must be +1 or -1")
    key = ("inf", sector, params.key(), _cfg_key(cfg))
    hit = cache.get(key)
    if hit is not None:
        return hit
    R = cfg.resolved_far_field_R()
    theta = matching_angle(params.epsilon, sector)
    E = _far_seed_and_match(params, theta, R, cfg)
    tp = sz.exp_transform(params)
    Dt = _far_seed_and_match(tp, theta, R, cfg)
    K = _transform_matrix(params, cfg)
    D1 = K[0][0] * Dt.x1 + K[0][1] * Dt.x2
    D2 = K[1][0] * Dt.x1 + K[1][1] * Dt.x2
    E1, E2 = E.x1, E.x2
    det = E1 * D2 - E2 * D1
    scale = math.hypot(abs(E1), abs(E2)) * math.hypot(abs(D1), abs(D2))
    if not (scale and abs(det) / scale >= DET_TOL):
        raise SingularMatrixError("connection matrix at infinity is singular", module="connection")
    d = ((D2 / det, -E2 / det), (-D1 / det, E1 / det))
    inv_norm = max(abs(d[0][0]) + abs(d[0][1]), abs(d[1][0]) + abs(d[1][1]))
    err = inv_norm * (E.err + Dt.err) * max(1.0, abs(K[0][1]) + abs(K[1][0]))
    cache.solves += 1
    return cache.put_if_absent(key, InfConnection(E1, E2, D1, D2, d, err, theta))


def eval_far_field(params: Params, z, which: str = "L", cfg: Config = DEFAULT_CONFIG,
                   cache: CoeffCache = CACHE) -> EvalQuad:
    params = Params.of(params)
    z = as_point(z)
    if params.epsilon_zero(cfg.tau_zero):
        raise FarFieldError("far-field evaluation is unsupported for epsilon = 0", module="connection")
    con = match_at_infinity(params, sector_of(z), cfg, cache)
    row = con.d[0] if which == "L" else con.d[1]
    A = asy.eval_A_inf(params, z)
    B = asy.eval_B_inf(params, z)
    f = row[0] * A.f + row[1] * B.f
    df = row[0] * A.df + row[1] * B.df
    r = abs(row[0]) * A.r + abs(row[1]) * B.r + con.err * (abs(A.f) + abs(B.f))
    return EvalQuad(f, df, r, A.n_terms + B.n_terms)


def eval_inf_solution(params: Params, z, kind: str = "A", cfg: Config = DEFAULT_CONFIG):
    """HeunC_A (or HeunC_B) at any z: the asymptotic sum when |eps z| exceeds the
    far-field radius, otherwise continuation inward from the anti-Stokes seed
    of the sector containing z. Returns ``(EvalQuad, trace)``."""
    params = Params.of(params)
    z = as_point(z)
    if params.epsilon_zero(cfg.tau_zero):
        raise FarFieldError("HeunC_A/HeunC_B need epsilon != 0", module="connection")
    p = params if kind == "A" else sz.exp_transform(params)
    R = cfg.resolved_far_field_R()
    if abs(p.epsilon * z) > R:
        e = asy.eval_A_inf(p, z)
        trace = ContinuationTrace(e.r, e.n_terms, 0)
    else:
        theta = matching_angle(p.epsilon, sector_of(z))
        z_inf = cmath.exp(1j * theta) * (R / abs(p.epsilon))
        seed = asy.eval_A_inf(p, z_inf)
        e, trace = continue_along(p, [z_inf, z], seed, cfg)
    if kind == "B":
        arg = -params.epsilon * z
        if arg.real > 709:
            raise FarFieldError(f"exp(-eps z) overflows: log|.| = {arg.real:.1f}", module="connection")
        w = cmath.exp(arg)
        e = EvalQuad(w * e.f, w * (e.df - params.epsilon * e.f), abs(w) * e.r, e.n_terms)
    return e, trace
