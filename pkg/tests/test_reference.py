import cmath
import math
import random

import pytest

from heunc import reference as ref
from heunc.core import EvalQuad, Params

from conftest import H1, H7


def test_closed_form_examples():
    assert ref.closed_form(3, 1)[0] == 1
    assert ref.closed_form(9, 1)[0] == 0
    assert abs(ref.closed_form(4, 0.5)[0] - 1.5) < 1e-15
    with pytest.raises(ref.ExclusionZoneError):
        ref.closed_form(4, 1 + 1e-8)
    with pytest.raises(ref.ExclusionZoneError):
        ref.closed_form(1, -3)
    with pytest.raises(ValueError):
        ref.get_case(10)


def test_case_definitions():
    assert ref.CASES[9].terms[1][0] == 1.5
    assert ref.CASES[7].params == Params(0.75, 1.5, 0.5, 0.5, 1)
    assert ref.CASES[8].params == Params(1.25, 1.5, 0.5, 0.5, 1)


def test_derivatives_by_finite_differences():
    rng = random.Random(3)
    for idx in range(1, 10):
        for _ in range(20):
            z = complex(rng.uniform(-6, 6), rng.uniform(0.2, 6) * rng.choice([-1, 1]))
            h = 1e-6
            f, df, d2f = ref.closed_form(idx, z, order=2)
            fp = ref.closed_form(idx, z + h, order=2)
            fm = ref.closed_form(idx, z - h, order=2)
            assert abs((fp[0] - fm[0]) / (2 * h) - df) <= 1e-6 * (1 + abs(df))
            assert abs((fp[1] - fm[1]) / (2 * h) - d2f) <= 1e-6 * (1 + abs(d2f))


def test_oracle_self_consistency():
    rng = random.Random(11)
    for idx in range(1, 10):
        for _ in range(100):
            z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            if ref.distance_to_singular_set(z) < 1e-3:
                continue
            assert ref.oracle_residual(idx, z) <= 1e-10


def test_oracle_conjugation():
    rng = random.Random(5)
    for idx in range(1, 10):
        for _ in range(30):
            z = complex(rng.uniform(-10, 10), rng.uniform(0.01, 10))
            h, dh = ref.closed_form(idx, z)
            hc, dhc = ref.closed_form(idx, z.conjugate())
            assert abs(hc - h.conjugate()) <= 1e-13 * (1 + abs(h))
            assert abs(dhc - dh.conjugate()) <= 1e-13 * (1 + abs(dh))


def test_on_cut_upper_limit():
    z = complex(-4.0, 0.0)
    assert ref.in_exclusion_zone(z)
    assert ref.CASES[2].oracle(z)[0] == 2j
    assert abs(ref.CASES[1].oracle(3.0)[0] - (-math.sqrt(2) * 1j)) < 1e-15


def test_exclusion_zone_and_distance():
    assert ref.in_exclusion_zone(1e-7)
    assert ref.in_exclusion_zone(1 + 5e-7j)
    assert ref.in_exclusion_zone(complex(-3, 1e-13))
    assert not ref.in_exclusion_zone(complex(0.5, 0))
    assert not ref.in_exclusion_zone(complex(-3, 1e-11))
    assert ref.distance_to_singular_set(-3 + 0.2j) == pytest.approx(0.2)
    assert ref.distance_to_singular_set(0.5 + 0.1j) == pytest.approx(abs(0.5 + 0.1j))
    assert ref.distance_to_singular_set(4 - 2j) == pytest.approx(2)


def test_lambda_metric():
    z = 0.3 + 0.2j
    h, dh = ref.closed_form(1, z)
    assert ref.lambda_metric(1, z, EvalQuad(h, dh, 0, 0)) == 0
    e = EvalQuad(h + 1e-12 * (1 + abs(h)), dh, 0, 0)
    assert ref.lambda_metric(1, z, e) == pytest.approx(1e-12, rel=1e-3)
    # |Delta| = 1e-12 with |h| = 1 gives 5e-13 (case 3 at z = 1: h = 1)
    h3, dh3 = ref.closed_form(3, 1)
    assert ref.lambda_metric(3, 1, EvalQuad(h3 + 1e-12, dh3, 0, 0)) == pytest.approx(5e-13)
    # conjugation invariance for real parameters
    e = ref.evaluate_case(7, 2 + 3j)
    ec = ref.evaluate_case(7, 2 - 3j)
    assert ref.lambda_metric(7, 2 + 3j, e) == pytest.approx(ref.lambda_metric(7, 2 - 3j, ec), rel=0.5, abs=1e-15)


def test_wronskian_examples():
    # h1/h2 pair: exact Wronskian is 1/(2 sqrt(z(1-z)))
    def exact(kind, p, z, cfg=None, imp=True):
        h = ref.closed_form(1 if kind.value == "cl" else 2, z)
        return EvalQuad(h[0], h[1], 0, 0)
    assert ref.wronskian_check(H1, 0.3, 0.3 + 0.4j, evaluator=exact) < 1e-15
    assert ref.wronskian_check(H7, 0.3, 0.3 + 0.4j) <= 1e-8
    assert ref.wronskian_check(H7, -5 + 2j, 7 - 3j) <= 1e-8


def test_transform_deviation():
    assert ref.transform_deviation(H7, 2 + 1j) < 1e-10
    assert ref.transform_deviation(Params(-2, 0, -1, 0, 1), -3 + 1j) < 1e-10


def test_wronskian_cancellation_floor_h3_h4():
    # For the (6, 0, 1, 1, 0) set, L S' and L' S are ~1e5 while W ~ 1e-2 at
    # |z| ~ 10: even correctly rounded closed forms give deviations ~1e-8.
    def exact(kind, p, z, cfg=None, imp=True):
        h = ref.closed_form(3 if kind.value == "cl" else 4, z)
        return EvalQuad(h[0], h[1], 0, 0)
    z1, z2 = -3.6593679923058353 + 0.517454730148275j, -9.329728224080236 + 0.9473559486005527j
    p = ref.get_case(3).params
    floor = ref.wronskian_check(p, z1, z2, evaluator=exact)
    assert 1e-9 < floor < 1e-7
    assert ref.wronskian_check(p, z1, z2) < 10 * floor
