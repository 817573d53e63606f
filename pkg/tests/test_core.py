import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from heunc.core import (
    DEFAULT_CONFIG,
    Config,
    Params,
    Region,
    SingularPointError,
    as_point,
    classify_point,
    cpow,
    ode_coefficients,
    one_minus,
    residual_of,
)

from conftest import H1, H7

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def test_params_rejects_nonfinite():
    with pytest.raises(ValueError):
        Params(float("nan"), 0, 1, 1, 0)
    with pytest.raises(ValueError):
        Params(0, complex(0, math.inf), 1, 1, 0)


def test_params_classification():
    assert Params(0, 0, -2, 0, 0).gamma_nonpos_int()
    assert Params(0, 0, 0, 0, 0).gamma_nonpos_int()
    assert not Params(0, 0, 1, 0, 0).gamma_nonpos_int()
    assert Params(0, 0, 1 + 1e-13, 0, 0).gamma_is_one()
    assert not Params(0, 0, 1 + 1e-9, 0, 0).gamma_is_one()
    assert Params(0, 0, 1, 0, 0).epsilon_zero()
    assert not Params(0, 0, 1, 0, 1e-300).epsilon_zero()
    assert Params(0, 0, -1 + 1e-13, 0, 0).gamma_int() == -1


def test_params_key_is_bit_exact():
    assert Params(0.1, 0, 1, 1, 0).key() == Params(0.1, 0, 1, 1, 0).key()
    assert Params(0.1, 0, 1, 1, 0).key() != Params(0.1 + 1e-17 + 1e-16, 0, 1, 1, 0).key()


def test_config_defaults_and_validation():
    c = Config()
    assert (c.kappa, c.n_diamond, c.near_one_radius) == (0.38, 40, 0.05)
    assert c.resolved_far_field_R() == 39.0
    assert Config(far_field_R=10).resolved_far_field_R() == 10.0
    for bad in ({"kappa": 1.0}, {"kappa": 0}, {"n_diamond": 0}, {"max_terms": -1},
                {"near_one_radius": 0}, {"far_field_R": -3}):
        with pytest.raises(ValueError):
            Config(**bad)


def test_classify_point_examples():
    assert classify_point(H1, 0.2) is Region.LocalZero
    assert classify_point(H1, 1.03) is Region.NearOne
    assert classify_point(Params(0, 0, 1, 1, 1), 50, Config(far_field_R=39)) is Region.FarField
    assert classify_point(H1, 0) is Region.SingularPoint
    assert classify_point(H1, 1) is Region.SingularPoint
    assert classify_point(H1, -3) is Region.OnCutZero
    assert classify_point(H1, 3) is Region.OnCutOne
    assert classify_point(H1, 3 + 1j) is Region.Generic
    # epsilon = 0 never reaches the far field
    assert classify_point(H1, 1000j) is Region.Generic


def test_classify_precedence():
    # near one beats on-cut; far field beats on-cut
    assert classify_point(H1, 1.01) is Region.NearOne
    assert classify_point(H7, -60) is Region.FarField
    # local zero beats near one if the discs overlap
    cfg = Config(kappa=0.9, near_one_radius=0.5)
    assert classify_point(H1, 0.6, cfg) is Region.LocalZero


@given(cplx)
def test_classify_total(z):
    assert isinstance(classify_point(H7, z), Region)


def test_ode_coefficients_examples():
    c1, c0 = ode_coefficients(H1, 0.5)
    assert c1 == 0 and c0 == 1
    c1, c0 = ode_coefficients(Params(0.75, 1.5, 0.5, 0.5, 1), 2)
    assert c1 == 1.75 and c0 == 1.125
    assert ode_coefficients(Params(0, 0, 0.3, 0.2, 1), 2 + 1j)[1] == 0
    with pytest.raises(SingularPointError):
        ode_coefficients(H1, 1)
    with pytest.raises(SingularPointError):
        ode_coefficients(H1, 0)


@given(cplx, st.builds(Params, cplx, cplx, cplx, cplx, cplx))
@settings(max_examples=200)
def test_ode_coefficients_symmetry(z, p):
    assume(abs(z) > 1e-3 and abs(z - 1) > 1e-3)
    _, c0 = ode_coefficients(p, z)
    target = p.alpha * z - p.q
    assert abs(c0 * z * (z - 1) - target) <= 1e-12 * (1 + abs(target) + abs(p.alpha * z) + abs(p.q))


def test_residual_of_exact_polynomial():
    # h3 = 6z^2 - 6z + 1 solves the equation with (6, 0, 1, 1, 0)
    p = Params(6, 0, 1, 1, 0)
    for z in (0.3, 2 + 1j, -4j):
        f, df, d2f = 6 * z * z - 6 * z + 1, 12 * z - 6, 12
        assert abs(residual_of(p, z, f, df, d2f)) < 1e-12


def test_upper_limit_sign_conventions():
    z = as_point(complex(-4.0, -0.0))
    assert math.copysign(1, z.imag) == 1.0
    w = one_minus(as_point(3.0))
    assert w.real == -2.0 and math.copysign(1, w.imag) == -1.0
    # principal sqrt of 1 - z just above the cut (1, inf) lies in the lower half-plane
    import cmath
    assert cmath.sqrt(w).imag < 0
    assert cmath.sqrt(as_point(-4.0)) == 2j


def test_cpow_exact_integer_powers():
    assert cpow(3 + 0j, 2 + 0j) == 9
    assert cpow(2 + 0j, -1 + 0j) == 0.5
    assert abs(cpow(-4 + 0j, 0.5 + 0j) - 2j) < 1e-15
    assert DEFAULT_CONFIG.machine_eps == 2.0 ** -52
