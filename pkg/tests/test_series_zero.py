import cmath
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from heunc import series_zero as sz
from heunc.core import ConvergenceError, Config, DomainError, ParameterClassError, Params, \
    SingularValueError, residual_of
from heunc.taylor_step import z_star_guard

from conftest import H1, H3, H9, rel

small = st.floats(-2, 2, allow_nan=False)
cplx = st.builds(complex, small, small)
# gamma kept away from the integers so the generic branch applies
gammas = st.builds(complex, st.floats(0.15, 0.85) | st.floats(1.15, 2.85) | st.floats(-1.85, -1.15),
                   st.floats(-0.5, 0.5))
params = st.builds(Params, cplx, cplx, gammas, cplx, cplx)
disc = st.builds(cmath.rect, st.floats(0.01, 0.3), st.floats(-3.1, 3.1))


def binom_sqrt_one_minus(n):
    # Taylor coefficients of sqrt(1 - z): (-1)^n C(1/2, n)
    c = 1.0
    for k in range(n):
        c *= (0.5 - k) / (k + 1)
    return c * (-1) ** n


def test_generic_coefficients_h1():
    b = sz.coeffs_generic(H1, 10)
    assert b[0] == 1
    assert b[1] == -0.5 == -H1.q / H1.gamma
    assert b[2] == -0.125 and b[3] == -0.0625
    for n in range(11):
        assert abs(b[n] - binom_sqrt_one_minus(n)) < 1e-15


def test_generic_coefficients_vanish_for_q_alpha_zero():
    b = sz.coeffs_generic(Params(0, 0, 1.7, 0.3 - 1j, 2.5), 30)
    assert b[0] == 1 and all(x == 0 for x in b[1:])


def test_generic_rejects_log_class():
    with pytest.raises(ParameterClassError):
        sz.coeffs_generic(H9, 5)


def test_log_coefficients_example():
    c, s, n_star = sz.coeffs_log(H9, 6)
    assert n_star == 2
    assert c[:3] == [1, -2, 0]
    assert s[:3] == [0, 0, 0]
    assert s[1] == 0  # s_{n*-1} = 0
    with pytest.raises(ParameterClassError):
        sz.coeffs_log(H1, 3)


def test_log_seed_equation():
    p = Params(0.7 - 0.2j, 1.3, -2, 0.4, 0.9 + 0.1j)
    c, s, n_star = sz.coeffs_log(p, 5)
    q, a, g, d, e = p.astuple()
    lhs = n_star * s[n_star]
    rhs = c[n_star - 1] * (-q + g * (1 - d + e)) + c[n_star - 2] * (a - e * (1 + g))
    assert abs(lhs - rhs) < 1e-14 * (1 + abs(lhs))
    assert c[n_star] == 0


def test_gamma_zero_log_derivative_limit():
    p = Params(0.8, 0.3, 0, 0.6, 1.1)
    z = 1e-9
    e = sz.eval_HeunCl_at0(p, z)
    assert abs(e.df / math.log(z) - (-p.q)) < 0.1
    with pytest.raises(SingularValueError):
        sz.eval_HeunCl_at0(p, 0)


def test_eval_HeunCl_at0_examples():
    e = sz.eval_HeunCl_at0(H1, 0)
    assert (e.f, e.df) == (1, -0.5)
    e = sz.eval_HeunCl_at0(H1, 0.25)
    assert abs(e.f - math.sqrt(0.75)) < 1e-15
    e = sz.eval_HeunCl_at0(H9, 0)
    assert (e.f, e.df) == (1, -2)


def test_eval_HeunCs_at0_examples():
    e = sz.eval_HeunCs_at0(H1, 0.25)
    assert abs(e.f - 0.5) < 1e-15
    assert sz.coeffs_generic(sz.reduced_params(H1), 8)[1:] == [0] * 8
    e = sz.eval_HeunCs_at0(H3, 0.5)
    assert abs(e.f - 1.5) < 1e-14
    e = sz.eval_HeunCs_at0(Params(0.4, 0.2, -1.5, 0.3, 0.7), 0)  # z^(5/2) g(z)
    assert (e.f, e.df) == (0, 0)
    e = sz.eval_HeunCs_at0(Params(0.4, 0.2, 0, 0.3, 0.7), 0)  # z g(z)
    assert (e.f, e.df) == (0, 1)
    with pytest.raises(SingularValueError):
        sz.eval_HeunCs_at0(H1, 0)  # sqrt(z): derivative unbounded


def test_HeunCs_unbounded_at_origin():
    with pytest.raises(SingularValueError):
        sz.eval_HeunCs_at0(Params(0.1, 0, 1.5, 0.2, 0.3), 0)  # z^(-1/2)
    with pytest.raises(SingularValueError):
        sz.eval_HeunCs_at0(H3, 0)  # gamma = 1: log z


def test_disc_and_term_guards():
    with pytest.raises(DomainError):
        sz.eval_HeunCl_at0(H1, 1.2)
    with pytest.raises(ConvergenceError):
        sz.eval_HeunCl_at0(Params(0.3, 0.1, 0.5, 0.5, 0.2), 0.99, Config(max_terms=20))


def test_exp_transform_examples():
    assert sz.exp_transform(Params(0.75, 1.5, 0.5, 0.5, 1)) == Params(0.25, 0.5, 0.5, 0.5, -1)
    assert sz.exp_transform(H1) == H1


@given(params)
def test_exp_transform_involution(p):
    back = sz.exp_transform(sz.exp_transform(p))
    for u, v in zip(back.astuple(), p.astuple()):
        assert abs(u - v) <= 1e-14 * (1 + abs(v)) * 10


def test_log_mixing_constant():
    assert sz.log_mixing_constant(H9) == 1.5
    assert sz.log_mixing_constant(Params(0.3, 0.4, -2, 0.7, 0)) == 0
    p = Params(0.3, 0.4, 0, 0.7, 1.3)
    c, _, _ = sz.coeffs_log(p, 2)
    assert abs(sz.log_mixing_constant(p) - (-(p.epsilon + c[1]))) < 1e-15
    with pytest.raises(ParameterClassError):
        sz.log_mixing_constant(H1)


@given(params, disc)
@settings(max_examples=100, deadline=None)
def test_transform_identity_generic(p, z):
    lhs = sz.eval_HeunCl_at0(p, z).f
    rhs = cmath.exp(-p.epsilon * z) * sz.eval_HeunCl_at0(sz.exp_transform(p), z).f
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@given(cplx, cplx, st.sampled_from([0, -1, -2, -3]), cplx, cplx, disc)
@settings(max_examples=100, deadline=None)
def test_log_mixing_identity(q, a, g, d, e, z):
    p = Params(q, a, g, d, e)
    A = sz.log_mixing_constant(p)
    lhs = sz.eval_HeunCl_at0(p, z).f + A * sz.eval_HeunCs_at0(p, z).f
    rhs = cmath.exp(-e * z) * sz.eval_HeunCl_at0(sz.exp_transform(p), z).f
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


def _naive_HeunCl(p, z, n=200):
    # plain summation, coded independently of the package's recurrences
    q, a, g, d, e = p.astuple()
    b = [0j, 1 + 0j]
    for k in range(1, n):
        P = k * (g - 1 + k)
        Q = -q + (k - 1) * (g + d - e + k - 2)
        R = (k - 2) * e + a
        b.append((Q * b[-1] + R * b[-2]) / P)
    return sum(c * z**k for k, c in enumerate(b[1:]))


@given(st.builds(Params, cplx, cplx, st.builds(complex, st.floats(-1.8, 0.8), st.floats(-0.5, 0.5)),
                 cplx, cplx), disc)
@settings(max_examples=60, deadline=None)
def test_reduction_consistency(p, z):
    assume(abs(p.gamma - round(p.gamma.real)) > 0.1)
    w = 1 - p.gamma
    expected = cmath.exp(w * cmath.log(z)) * _naive_HeunCl(sz.reduced_params(p), z)
    got = sz.eval_HeunCs_at0(p, z).f
    assert abs(got - expected) <= 1e-12 * (1 + abs(expected))


@pytest.mark.parametrize("p", [H1, H3, H9, Params(0.75, 1.5, 0.5, 0.5, 1), Params(1.25, 1.5, 0.5, 0.5, 1),
                               Params(-0.25, 0, 0.5, 0.5, 0)])
@pytest.mark.parametrize("z", [0.2, 0.3j, -0.25 + 0.1j, 0.1 - 0.3j])
def test_series_residual_bounded_by_estimate(p, z):
    for part, fn in ((sz.sum_HeunCl_at0(p, z), sz.eval_HeunCl_at0), (sz.sum_HeunCs_at0(p, z), sz.eval_HeunCs_at0)):
        e = fn(p, z)
        if z_star_guard(p, z):
            continue
        res = abs(residual_of(p, z, part.f, part.df, part.d2f)) / abs(p.q - p.alpha * z)
        assert res <= 1e3 * e.r


def test_conjugation_real_params():
    p = Params(1.2, -0.5, 0.7, 1.5, -0.8)
    z = 0.2 + 0.15j
    a, b = sz.eval_HeunCl_at0(p, z), sz.eval_HeunCl_at0(p, z.conjugate())
    assert rel(b.f, a.f.conjugate()) < 1e-15
    a, b = sz.eval_HeunCs_at0(p, z), sz.eval_HeunCs_at0(p, z.conjugate())
    assert rel(b.f, a.f.conjugate()) < 1e-14


def test_series_kind_selection():
    assert sz.series_kind(H1, "L") is sz.SeriesKind.GenericL
    assert sz.series_kind(H9, "L") is sz.SeriesKind.LogL
    assert sz.series_kind(Params(6, 0, 1, 1, 0), "S") is sz.SeriesKind.Sgamma1
    assert sz.series_kind(H1, "S") is sz.SeriesKind.SviaReduction
    with pytest.raises(ValueError):
        sz.series_kind(H1, "X")
