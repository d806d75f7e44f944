import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossing_lab.model import (
    SUMMATION_BAND,
    CoefficientModel,
    moments,
    weight_a,
    weight_b,
)


def test_weight_a_examples():
    assert weight_a(0, 1.0, 2) == pytest.approx(3.0, abs=0)
    assert weight_a(2, 0.0, 5) == 0.0
    # 0.5 + 0.25 + 0.125
    assert weight_a(1, 0.5, 3) == pytest.approx(0.875, rel=1e-15)


def test_weight_b_examples():
    assert weight_b(0, 1.0, 2) == pytest.approx(3.0, abs=0)
    assert weight_b(2, 0.0, 5) == 0.0
    # 1 + 2*0.5 + 3*0.25
    assert weight_b(1, 0.5, 3) == pytest.approx(2.75, rel=1e-15)


def test_weight_index_errors():
    with pytest.raises(IndexError):
        weight_a(3, 0.5, 2)
    with pytest.raises(IndexError):
        weight_b(-1, 0.5, 2)


@pytest.mark.parametrize("n", [3, 12, 40])
def test_weight_a_accuracy_on_grid(n):
    # relative error <= 1e-12 against exact rational evaluation, |x| <= 2
    for x in np.linspace(-2, 2, 41):
        for k in (0, n // 2, n):
            exact = mp.fsum(mp.mpf(float(x)) ** j for j in range(k, n + 1))
            got = weight_a(k, float(x), n)
            if exact == 0:
                assert got == pytest.approx(0.0, abs=1e-13)
            else:
                assert abs(got - float(exact)) <= 1e-12 * abs(float(exact)) + 1e-300


def test_seam_consistency():
    # closed form and compensated summation agree near the branch switch
    n = 25
    for offset in np.linspace(SUMMATION_BAND, 2 * SUMMATION_BAND, 7):
        for x in (1.0 - offset, 1.0 + offset, -1.0 - offset, -1.0 + offset):
            for k in (0, 5, n):
                closed_a = (x ** k - x ** (n + 1)) / (1.0 - x)
                summed_a = math.fsum(x ** j for j in range(k, n + 1))
                if summed_a != 0:
                    assert abs(closed_a - summed_a) <= 1e-10 * abs(summed_a)
                closed_b = weight_b(k, x, n)
                summed_b = math.fsum(
                    j * x ** (j - 1) for j in range(max(k, 1), n + 1))
                if summed_b != 0:
                    assert abs(closed_b - summed_b) <= 1e-10 * abs(summed_b)


@given(st.integers(1, 30), st.integers(0, 30),
       st.floats(-2.0, 2.0, allow_nan=False))
@settings(max_examples=120, deadline=None)
def test_weight_b_is_derivative_of_weight_a(n, k, x):
    k = min(k, n)
    h = 1e-5
    fd = (weight_a(k, x + h, n) - weight_a(k, x - h, n)) / (2 * h)
    assert abs(fd - weight_b(k, x, n)) <= 1e-6 * max(1.0, abs(fd))


def test_moments_hand_example():
    m = moments(CoefficientModel.unit_increments(2), 1.0)
    assert (m.a2, m.b2, m.c, m.e2) == (14.0, 22.0, 17.0, 19.0)


def test_moments_at_origin():
    m = moments(CoefficientModel.unit_increments(5), 0.0)
    assert (m.a2, m.b2, m.c, m.e2) == (1.0, 2.0, 1.0, 1.0)


def test_moments_cancellation_near_one():
    # extended-precision oracle for the Gram determinant at x = 0.999
    n = 30
    m = moments(CoefficientModel.unit_increments(n), 0.999)
    assert m.e2 >= 0.0
    with mp.workdps(60):
        x = mp.mpf("0.999")
        a = [mp.fsum(x ** j for j in range(k, n + 1)) for k in range(n + 1)]
        b = [mp.fsum(j * x ** (j - 1) for j in range(max(k, 1), n + 1))
             for k in range(n + 1)]
        a2 = mp.fsum(v * v for v in a)
        b2 = mp.fsum(v * v for v in b)
        c = mp.fsum(u * v for u, v in zip(a, b))
        e2 = a2 * b2 - c * c
    assert m.e2 == pytest.approx(float(e2), rel=1e-12)
    assert m.a2 == pytest.approx(float(a2), rel=1e-13)


def test_moments_reciprocal_path_matches_direct_extension():
    # just outside |x| = 1 the reciprocal path must agree with an exact
    # high-precision direct evaluation
    n = 18
    model = CoefficientModel.unit_increments(n)
    for x in (1.25, -1.25, 3.0, -7.5):
        m = moments(model, x)
        with mp.workdps(60):
            xx = mp.mpf(x)
            a = [mp.fsum(xx ** j for j in range(k, n + 1))
                 for k in range(n + 1)]
            b = [mp.fsum(j * xx ** (j - 1)
                         for j in range(max(k, 1), n + 1))
                 for k in range(n + 1)]
            a2 = mp.fsum(v * v for v in a)
            b2 = mp.fsum(v * v for v in b)
            c = mp.fsum(u * v for u, v in zip(a, b))
            e2 = a2 * b2 - c * c
        assert m.a2 == pytest.approx(float(a2), rel=1e-12)
        assert m.b2 == pytest.approx(float(b2), rel=1e-12)
        assert m.c == pytest.approx(float(c), rel=1e-12)
        assert m.e2 == pytest.approx(float(e2), rel=1e-9)


@given(st.integers(1, 25),
       st.floats(-3.0, 3.0, allow_nan=False),
       st.floats(0.05, 20.0))
@settings(max_examples=100, deadline=None)
def test_moments_homogeneous_in_sigma(n, x, lam):
    base = CoefficientModel.unit_increments(n)
    scaled = CoefficientModel(n=n, slope=0.0, sigma=tuple(lam for _ in range(n + 1)))
    m0 = moments(base, x)
    m1 = moments(scaled, x)
    assert m1.a2 == pytest.approx(lam ** 2 * m0.a2, rel=1e-12)
    assert m1.b2 == pytest.approx(lam ** 2 * m0.b2, rel=1e-12)
    assert m1.c == pytest.approx(lam ** 2 * m0.c, rel=1e-12)
    assert m1.e2 == pytest.approx(lam ** 4 * m0.e2, rel=1e-9, abs=1e-280)


@given(st.integers(1, 40), st.floats(-5.0, 5.0, allow_nan=False))
@settings(max_examples=200, deadline=None)
def test_gram_inequalities(n, x):
    m = moments(CoefficientModel.unit_increments(n), x)
    if not all(map(math.isfinite, (m.a2, m.b2, m.c))):
        return  # genuine double overflow at extreme x^n; nothing to check
    assert m.e2 >= 0.0
    assert m.c * m.c <= m.a2 * m.b2 * (1 + 1e-9) + 1e-12


def test_model_validation():
    with pytest.raises(ValueError):
        CoefficientModel(n=0, slope=0.0, sigma=(1.0,))
    with pytest.raises(ValueError):
        CoefficientModel(n=2, slope=0.0, sigma=(1.0, 1.0))
    with pytest.raises(ValueError):
        CoefficientModel(n=2, slope=0.0, sigma=(1.0, -1.0, 1.0))
    with pytest.raises(ValueError):
        CoefficientModel(n=2, slope=0.0, sigma=(0.0, 0.0, 0.0))


def test_presets():
    m = CoefficientModel.unit_increments(4, 2.0)
    assert m.sigma == (1.0,) * 5 and m.slope == 2.0
    p = CoefficientModel.pinned_origin(4)
    assert p.sigma == (0.0, 1.0, 1.0, 1.0, 1.0)
