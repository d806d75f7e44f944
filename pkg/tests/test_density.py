import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bivariate_density_oracle, erf_series
from crossing_lab.density import density_at, erf_eval, expected_crossings
from crossing_lab.model import CoefficientModel, DegenerateMoment


def test_erf_examples():
    assert erf_eval(0.0) == 0.0
    assert abs(erf_eval(10.0) - 1.0) <= 1e-12
    assert erf_eval(1.0) == pytest.approx(0.842700792949715, abs=1e-12)
    assert erf_eval(1.0) == pytest.approx(erf_series(1.0), abs=1e-14)


@given(st.floats(-4.0, 4.0, allow_nan=False))
@settings(max_examples=80, deadline=None)
def test_erf_odd_and_series(t):
    assert erf_eval(-t) == -erf_eval(t)
    assert erf_eval(t) == pytest.approx(erf_series(t), abs=1e-12)


def test_density_zero_slope_reduction():
    d = density_at(CoefficientModel.unit_increments(5, 0.0), 0.0)
    assert d.fn_value == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert d.fn_value == d.g1  # exact, not approximate
    assert d.g2 == d.g3 == d.g4 == d.g5 == 0.0


@pytest.mark.parametrize("n,x", [(3, 0.4), (8, -0.9), (12, 1.7), (20, -3.0)])
def test_density_zero_slope_reduction_everywhere(n, x):
    d = density_at(CoefficientModel.unit_increments(n, 0.0), x)
    assert d.fn_value == d.g1


@pytest.mark.parametrize("n,K,x", [
    (10, 2.0, 0.5),
    (10, 2.0, -0.7),
    (6, 1.0, 1.5),
    (8, -3.0, -2.2),
    (5, 0.7, 0.0),
    (14, 0.3, 0.95),
])
def test_density_matches_bivariate_oracle(n, K, x):
    model = CoefficientModel.unit_increments(n, K)
    mine = density_at(model, x).fn_value
    oracle = bivariate_density_oracle(model, x)
    assert mine == pytest.approx(oracle, rel=1e-8)


def test_density_continuous_across_unit_circle():
    # direct path (|x| <= 1) and reciprocal path (|x| > 1) must agree
    for n, K in ((7, 0.0), (13, 1.5), (24, -2.0)):
        model = CoefficientModel.unit_increments(n, K)
        for s in (1.0, -1.0):
            inner = density_at(model, s * (1 - 1e-10)).fn_value
            outer = density_at(model, s * (1 + 1e-10)).fn_value
            assert inner == pytest.approx(outer, rel=1e-6)


def test_degenerate_moment_raises():
    pinned = CoefficientModel.pinned_origin(6, 1.0)
    with pytest.raises(DegenerateMoment):
        density_at(pinned, 0.0)
    # off the degenerate point everything is fine
    assert density_at(pinned, 0.25).fn_value > 0.0


def test_density_nonnegative_sampled():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(1, 30))
        K = float(rng.normal() * 3)
        x = float(rng.normal() * 2)
        d = density_at(CoefficientModel.unit_increments(n, K), x)
        assert d.fn_value >= 0.0


def test_line_crosses_once():
    for K in (-3.0, 0.0, 7.0):
        ic = expected_crossings(CoefficientModel.unit_increments(1, K),
                                -math.inf, math.inf, tol=1e-8)
        assert ic.converged
        assert ic.expected == pytest.approx(1.0, abs=1e-6)


def test_interval_additivity():
    model = CoefficientModel.unit_increments(10, 0.0)
    tol = 1e-9
    left = expected_crossings(model, 0.0, 1.0, tol)
    right = expected_crossings(model, 1.0, math.inf, tol)
    both = expected_crossings(model, 0.0, math.inf, tol)
    assert left.expected + right.expected == pytest.approx(
        both.expected, abs=2 * (left.abs_error_estimate
                                + right.abs_error_estimate
                                + both.abs_error_estimate) + 1e-12)
    # a finite split point that is not a forced breakpoint
    mid = expected_crossings(model, -0.6, 0.4, tol)
    p1 = expected_crossings(model, -0.6, -0.1, tol)
    p2 = expected_crossings(model, -0.1, 0.4, tol)
    assert p1.expected + p2.expected == pytest.approx(mid.expected, abs=1e-8)


def test_growth_tracks_log_law():
    expected = {}
    for n in (2, 4, 8, 16, 32):
        ic = expected_crossings(CoefficientModel.unit_increments(n, 0.0),
                                -math.inf, math.inf, 1e-8)
        expected[n] = ic.expected
    values = [expected[n] for n in (2, 4, 8, 16, 32)]
    assert all(b > a for a, b in zip(values, values[1:]))
    asym32 = (math.log(65) + 1.920134478) / math.pi
    assert abs(expected[32] - asym32) < 0.15


def test_pinned_origin_integrable():
    # the degenerate point at x = 0 is a panel boundary, never evaluated
    model = CoefficientModel.pinned_origin(6, 0.0)
    ic = expected_crossings(model, -math.inf, math.inf, 1e-7)
    assert ic.converged and ic.expected > 0.5


def test_argument_validation():
    model = CoefficientModel.unit_increments(3)
    with pytest.raises(ValueError):
        expected_crossings(model, 2.0, 1.0, 1e-8)
    with pytest.raises(ValueError):
        expected_crossings(model, 0.0, 1.0, -1e-8)
    with pytest.raises(ValueError):
        density_at(model, math.inf)
