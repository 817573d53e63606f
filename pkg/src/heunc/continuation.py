"""Analytic continuation of local solutions along polylines by Taylor stepping."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import List, Sequence

from .core import (
    DEFAULT_CONFIG,
    Config,
    ConvergenceError,
    EvalQuad,
    HeunError,
    Params,
    SingularPointError,
    SingularValueError,
    StepUnderflowError,
    as_point,
    cpow,
)
from . import series_zero as sz
from .taylor_step import StepSeed, eval_step


@dataclass
class ContinuationTrace:
    r_sigma: float = 0.0
    n_sigma: int = 0
    steps: int = 0

    def add(self, e: EvalQuad):
        self.r_sigma += e.r
        self.n_sigma += e.n_terms + 1
        self.steps += 1

    def merge(self, other: "ContinuationTrace"):
        self.r_sigma += other.r_sigma
        self.n_sigma += other.n_sigma
        self.steps += other.steps


class Path(tuple):
    """Polyline of complex waypoints; the first is the expansion origin."""

    def __new__(cls, waypoints: Sequence[complex]):
        pts = tuple(complex(w) for w in waypoints)
        if len(pts) < 2:
            raise ValueError("a path needs at least two waypoints")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError(f"consecutive waypoints coincide at {a}")
        for w in pts[1:]:
            if w == 0 or w == 1:
                raise SingularPointError(f"path waypoint {w} is a singular point", module="continuation")
        return super().__new__(cls, pts)

    @property
    def start(self):
        return self[0]

    @property
    def end(self):
        return self[-1]


def in_omega(z: complex) -> int:
    """+1 / -1 if z lies in the two-segment wedge above / below the cut (1, inf), else 0.

    Points exactly on the cut count as the upper wedge.
    """
    if z.real > 1:
        if 0 <= z.imag < z.real:
            return 1
        if 0 < -z.imag < z.real:
            return -1
    return 0


def build_default_path(z) -> Path:
    z = as_point(z)
    if z == 0 or z == 1:
        raise SingularPointError(f"z = {z} is a singular point", module="continuation")
    s = in_omega(z)
    if s:
        return Path([0j, complex(1, s), z])
    return Path([0j, z])


def _next_radius(cfg: Config, z: complex, prev_R: float, prev_N: int) -> float:
    cap = cfg.kappa * min(abs(z), abs(z - 1))
    if not cfg.adaptive or prev_N <= 0:
        return cap
    R = prev_R * cfg.n_diamond / prev_N
    return min(max(R, cfg.min_step), cap)


def continue_along(params: Params, path: Sequence[complex], seed: EvalQuad,
                   cfg: Config = DEFAULT_CONFIG, trace: ContinuationTrace = None,
                   hops: list = None):
    """Carry ``seed`` (a solution's value and derivative at ``path[0]``) to ``path[-1]``.

    The first waypoint must be a regular point. Returns ``(EvalQuad, trace)``;
    the quad's ``r`` and ``n_terms`` are the accumulated totals including the
    seed. If ``hops`` is a list, every hop's (z_from, z_to, EvalQuad) is appended.
    """
    if trace is None:
        trace = ContinuationTrace(seed.r, seed.n_terms, 0)
    pts = [complex(w) for w in path]
    zp = pts[0]
    f, df = seed.f, seed.df
    R = None
    N_prev = 0
    for target in pts[1:]:
        while zp != target:
            if trace.steps >= cfg.max_steps:
                raise ConvergenceError(f"continuation exceeded {cfg.max_steps} steps",
                                       module="continuation", hop=trace.steps)
            if R is None:
                R = cfg.kappa * min(abs(zp), abs(zp - 1))
            else:
                R = _next_radius(cfg, zp, R, N_prev)
            if R < 1e-12 * (1 + abs(zp)):
                raise StepUnderflowError(f"step size {R:.3g} collapsed at z = {zp}",
                                         module="continuation", hop=trace.steps)
            delta = target - zp
            dist = abs(delta)
            znext = target if dist <= R else zp + delta * (R / dist)
            try:
                e = eval_step(params, StepSeed(zp, f, df), znext, cfg)
            except HeunError as exc:
                exc.hop = trace.steps
                raise
            if hops is not None:
                hops.append((zp, znext, e))
            trace.add(e)
            f, df = e.f, e.df
            N_prev = e.n_terms
            zp = znext
    return EvalQuad(f, df, trace.r_sigma, trace.n_sigma), trace


def _local(which: str, params: Params, z: complex, cfg: Config) -> EvalQuad:
    if which == "L":
        return sz.eval_HeunCl_at0(params, z, cfg)
    return sz.eval_HeunCs_at0(params, z, cfg)


def _first_hop(z_dir: complex, cfg: Config) -> complex:
    return z_dir * (cfg.kappa / abs(z_dir))


def _from_origin(which: str, params: Params, path: Sequence[complex], cfg: Config,
                 hops: list = None):
    """Local series at kappa along the first segment, then Taylor steps."""
    first = complex(path[1])
    if abs(first) < cfg.kappa and len(path) == 2:
        e = _local(which, params, first, cfg)
        return e, ContinuationTrace(e.r, e.n_terms, 0)
    if abs(first) <= cfg.kappa:
        # short first segment: seed at its end directly
        z1 = first
        rest = list(path[1:])
    else:
        z1 = _first_hop(first, cfg)
        rest = [z1] + list(path[1:])
    seed = _local(which, params, z1, cfg)
    trace = ContinuationTrace()
    trace.add(seed)
    if len(rest) == 1:
        return seed, trace
    return continue_along(params, rest, seed, cfg, trace, hops)


def _plain_HeunCl(params: Params, z: complex, cfg: Config, hops=None):
    if abs(z) < cfg.kappa:
        e = sz.eval_HeunCl_at0(params, z, cfg)
        return e, ContinuationTrace(e.r, e.n_terms, 0)
    return _from_origin("L", params, build_default_path(z), cfg, hops)


def _times_exp(e: EvalQuad, eps: complex, z: complex) -> EvalQuad:
    """exp(-eps z) * g with the product rule."""
    w = cmath.exp(-eps * z)
    return EvalQuad(w * e.f, w * (e.df - eps * e.f), abs(w) * e.r, e.n_terms)


def _lin(a: complex, x: EvalQuad, b: complex, y: EvalQuad) -> EvalQuad:
    return EvalQuad(a * x.f + b * y.f, a * x.df + b * y.df,
                    abs(a) * x.r + abs(b) * y.r, x.n_terms + y.n_terms)


def _use_exp_reduction(params: Params, z: complex, cfg: Config) -> bool:
    return (not params.epsilon_zero(cfg.tau_zero)) and (-params.epsilon * z).real > 0 \
        and abs(z) >= cfg.kappa


def eval_HeunCl_traced(params: Params, z, cfg: Config = DEFAULT_CONFIG, exp_reduction: bool = True):
    z = as_point(z)
    if z == 1:
        raise SingularPointError("z = 1 is a singular point", module="continuation")
    if exp_reduction and _use_exp_reduction(params, z, cfg):
        tp = sz.exp_transform(params)
        g, trace = _plain_HeunCl(tp, z, cfg)
        out = _times_exp(g, params.epsilon, z)
        if params.gamma_nonpos_int(cfg.tau_int):
            A = sz.log_mixing_constant(params)
            if A != 0:
                s, tr2 = eval_HeunCs_traced(params, z, cfg, exp_reduction)
                trace.merge(tr2)
                out = _lin(1, out, -A, s)
        return out, trace
    return _plain_HeunCl(params, z, cfg)


def eval_HeunCs_traced(params: Params, z, cfg: Config = DEFAULT_CONFIG, exp_reduction: bool = True):
    z = as_point(z)
    if z == 1:
        raise SingularPointError("z = 1 is a singular point", module="continuation")
    if params.gamma_is_one(cfg.tau_int):
        if z == 0:
            raise SingularValueError("HeunCs has a log singularity at z = 0", module="continuation")
        if abs(z) < cfg.kappa:
            e = sz.eval_HeunCs_at0(params, z, cfg)
            return e, ContinuationTrace(e.r, e.n_terms, 0)
        return _from_origin("S", params, build_default_path(z), cfg)
    if abs(z) < cfg.kappa:
        e = sz.eval_HeunCs_at0(params, z, cfg)
        return e, ContinuationTrace(e.r, e.n_terms, 0)
    k = params.gamma_int(cfg.tau_int)
    w = complex(1 - k) if k is not None else 1 - params.gamma
    g, trace = eval_HeunCl_traced(sz.reduced_params(params), z, cfg, exp_reduction)
    zw = cpow(z, w)
    f = zw * g.f
    df = zw * (g.df + w * g.f / z)
    return EvalQuad(f, df, abs(zw) * g.r, g.n_terms), trace


def eval_HeunCl(params: Params, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    return eval_HeunCl_traced(Params.of(params), z, cfg)[0]


def eval_HeunCs(params: Params, z, cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    return eval_HeunCs_traced(Params.of(params), z, cfg)[0]


def eval_multivalued(params: Params, path: Sequence[complex], which: str = "L",
                     cfg: Config = DEFAULT_CONFIG) -> EvalQuad:
    """Continue HeunCl (``which='L'``) or HeunCs (``'S'``) strictly along ``path``.

    ``path`` starts at 0; no exp-reduction and no cut conventions are applied,
    so the result follows the branch reached by the polyline.
    """
    if which not in ("L", "S"):
        raise ValueError("which must be 'L' or 'S'")
    pts: List[complex] = [complex(w) for w in path]
    if pts[0] != 0:
        raise ValueError("a multivalued path must start at 0")
    path = Path(pts)
    return _from_origin(which, Params.of(params), path, cfg)[0]
