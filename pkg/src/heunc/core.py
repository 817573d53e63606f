"""Domain types, parameter classification, branch conventions and configuration."""

from __future__ import annotations

import cmath
import enum
import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Union


class HeunError(Exception):
    """Base class for evaluation failures.

    ``module``, ``region`` and ``hop`` are filled in where known so that a
    failed continuation can be traced back to the step that broke.
    """

    def __init__(self, message, *, module=None, region=None, hop=None):
        super().__init__(message)
        self.module = module
        self.region = region
        self.hop = hop

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "module": self.module,
            "region": None if self.region is None else str(self.region),
            "hop": self.hop,
        }


class SingularPointError(HeunError):
    """The requested point is a singular point of the equation (0 or 1)."""


class SingularValueError(HeunError):
    """The function (or its derivative) is unbounded at the requested point."""


class ParameterClassError(HeunError):
    """Parameters fall in the wrong class for the requested expansion."""


class ConvergenceError(HeunError):
    """A series did not terminate within the term budget."""


class DomainError(HeunError):
    """The point lies outside the disc of convergence of an expansion."""


class StepUnderflowError(HeunError):
    """Continuation step collapsed (path runs into a singular point)."""


class SingularMatrixError(HeunError):
    """A matching system is numerically singular."""


class FarFieldError(HeunError):
    """Far-field evaluation is unsupported or failed (overflow, epsilon = 0)."""


class Region(enum.Enum):
    LocalZero = "LocalZero"
    NearOne = "NearOne"
    FarField = "FarField"
    Generic = "Generic"
    OnCutZero = "OnCutZero"
    OnCutOne = "OnCutOne"
    SingularPoint = "SingularPoint"

    def __str__(self):
        return self.value


TAU_INT = 1e-12
MACHINE_EPS = sys.float_info.epsilon


def _nearest_int(w: complex, tol: float):
    k = round(w.real)
    if abs(w - k) <= tol:
        return int(k)
    return None


@dataclass(frozen=True)
class Params:
    """The five parameters ``(q, alpha, gamma, delta, epsilon)`` of the equation

        f'' + (gamma/z + delta/(z-1) + epsilon) f' + (alpha z - q)/(z(z-1)) f = 0.
    """

    q: complex
    alpha: complex
    gamma: complex
    delta: complex
    epsilon: complex

    def __post_init__(self):
        for name in ("q", "alpha", "gamma", "delta", "epsilon"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise ValueError(f"parameter {name} must be finite, got {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def of(cls, p: "ParamsLike") -> "Params":
        if isinstance(p, Params):
            return p
        return cls(*p)

    def astuple(self):
        return (self.q, self.alpha, self.gamma, self.delta, self.epsilon)

    def key(self):
        """Exact bit-level key, used for caching."""
        return tuple((v.real.hex(), v.imag.hex()) for v in self.astuple())

    def gamma_int(self, tol: float = TAU_INT):
        """gamma as an ``int`` if it is an integer within ``tol``, else None."""
        return _nearest_int(self.gamma, tol)

    def gamma_nonpos_int(self, tol: float = TAU_INT) -> bool:
        k = self.gamma_int(tol)
        return k is not None and k <= 0

    def gamma_is_one(self, tol: float = TAU_INT) -> bool:
        return abs(self.gamma - 1) <= tol

    def epsilon_zero(self, tol: float = 0.0) -> bool:
        return abs(self.epsilon) <= tol

    def conjugate(self) -> "Params":
        return Params(*(v.conjugate() for v in self.astuple()))

    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.astuple())


ParamsLike = Union[Params, tuple]


class EvalQuad(NamedTuple):
    """Value, derivative, error estimate and number of series terms used."""

    f: complex
    df: complex
    r: float
    n_terms: int


@dataclass(frozen=True)
class Config:
    kappa: float = 0.38
    n_diamond: int = 40
    near_one_radius: float = 0.05
    far_field_R: Union[float, str] = "auto"
    max_terms: int = 2000
    max_steps: int = 20000
    tau_int: float = TAU_INT
    tau_zero: float = 0.0
    machine_eps: float = MACHINE_EPS
    one_matching_point: float = 0.5
    infinity_matching_radius: float = 1.25
    min_step: float = 1e-3
    adaptive: bool = True

    def __post_init__(self):
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")
        if self.n_diamond <= 0 or self.max_terms <= 0 or self.max_steps <= 0:
            raise ValueError("n_diamond, max_terms and max_steps must be positive")
        if self.near_one_radius <= 0:
            raise ValueError("near_one_radius must be positive")
        if self.far_field_R != "auto" and not float(self.far_field_R) > 0:
            raise ValueError("far_field_R must be positive or 'auto'")

    def resolved_far_field_R(self) -> float:
        if self.far_field_R == "auto":
            from .asymptotics import far_field_radius

            return far_field_radius(self.machine_eps)
        return float(self.far_field_R)


DEFAULT_CONFIG = Config()


def as_point(z) -> complex:
    """Normalise a point: finite complex with a positive-zero imaginary part on
    the real axis, so that principal-branch functions return the limit from
    the upper half-plane on the cuts."""
    z = complex(z)
    if not cmath.isfinite(z):
        raise ValueError(f"point must be finite, got {z}")
    if z.imag == 0:
        z = complex(z.real, 0.0)
    return z


def one_minus(z: complex) -> complex:
    # keeps the sign of a zero imaginary part flipped, so 1 - (x + 0i) lands
    # on the lower side of the negative axis for x > 1
    return complex(1.0 - z.real, -z.imag)


def cpow(z: complex, w: complex) -> complex:
    """Principal branch ``z**w`` with exact integer powers."""
    if w.imag == 0 and w.real == int(w.real) and abs(w.real) < 64:
        k = int(w.real)
        if k >= 0:
            return z**k
        return 1 / z**(-k)
    if z == 0:
        if w.real > 0:
            return 0j
        raise SingularValueError("0 raised to a power with nonpositive real part")
    return cmath.exp(w * cmath.log(z))


def classify_point(params: Params, z, cfg: Config = DEFAULT_CONFIG) -> Region:
    z = as_point(z)
    if z == 0 or z == 1:
        return Region.SingularPoint
    if abs(z) < cfg.kappa:
        return Region.LocalZero
    if abs(z - 1) < cfg.near_one_radius:
        return Region.NearOne
    if not params.epsilon_zero(cfg.tau_zero):
        if abs(params.epsilon * z) > cfg.resolved_far_field_R():
            return Region.FarField
    if z.imag == 0:
        if z.real < 0:
            return Region.OnCutZero
        if z.real > 1:
            return Region.OnCutOne
    return Region.Generic


def ode_coefficients(params: Params, z) -> tuple:
    """Return ``(c1, c0)`` with the equation written as f'' + c1 f' + c0 f = 0."""
    z = complex(z)
    if z == 0 or z == 1:
        raise SingularPointError(f"z = {z} is a singular point", module="core")
    p = params
    c1 = p.gamma / z + p.delta / (z - 1) + p.epsilon
    c0 = (p.alpha * z - p.q) / (z * (z - 1))
    return c1, c0


def residual_of(params: Params, z, f, df, d2f) -> complex:
    """Residual of (f, f', f'') in the polynomial form of the equation."""
    p = params
    return (z * (z - 1) * d2f
            + (p.gamma * (z - 1) + p.delta * z + p.epsilon * z * (z - 1)) * df
            + (p.alpha * z - p.q) * f)


def is_finite_quad(e: EvalQuad) -> bool:
    return cmath.isfinite(e.f) and cmath.isfinite(e.df) and math.isfinite(e.r)
