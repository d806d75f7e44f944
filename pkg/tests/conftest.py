"""Shared independent oracles for the test suite.

Everything here recomputes target quantities by a route different from the
implementation under test: Maclaurin series for erf, direct bivariate
quadrature for the crossing density, raw mpmath formulas for the
expansion profiles.
"""

import math

import mpmath as mp
import numpy as np
import pytest


def erf_series(t: float) -> float:
    """Maclaurin series of erf in 40-digit arithmetic (the alternating
    terms grow before they shrink, so double-precision terms lose digits
    past |t| ~ 2)."""
    with mp.workdps(40):
        x = mp.mpf(float(t))
        acc = mp.mpf(0)
        num = x
        for k in range(0, 200):
            term = num / (2 * k + 1)
            acc += term
            num *= -x * x / (k + 1)
            if abs(term) < mp.mpf("1e-45"):
                break
        return float(2 / mp.sqrt(mp.pi) * acc)


def bivariate_density_oracle(model, x: float) -> float:
    """Crossing density via direct 1-D quadrature of E|derivative| at a
    zero of the shifted process: independent of the g-term assembly."""
    from crossing_lab.model import moments

    mb = moments(model, x)
    a2, b2, c = mb.a2, mb.b2, mb.c
    K = model.slope
    m1, m2 = -K * x, -K
    det = a2 * b2 - c * c

    def pdf0(y):
        d0, d1 = -m1, y - m2
        q = (b2 * d0 * d0 - 2 * c * d0 * d1 + a2 * d1 * d1) / det
        return math.exp(-q / 2) / (2 * math.pi * math.sqrt(det))

    sd = math.sqrt(b2)
    lo, hi = m2 - 14 * sd, m2 + 14 * sd
    with mp.workdps(30):
        # split at y = 0: |y| has a kink there
        pieces = sorted({lo, hi, 0.0} | {m2})
        val = mp.mpf(0)
        for aa, bb in zip(pieces[:-1], pieces[1:]):
            if bb <= lo or aa >= hi:
                continue
            val += mp.quad(lambda y: abs(y) * pdf0(float(y)), [aa, bb])
    return float(val)


# raw mpmath transcriptions of the closed forms, arbitrary sign of t
# (principal branch); used for the mirror-identity checks
def mp_n1(t):
    t = mp.mpf(t)
    return ((4 * t - 15) * mp.e ** (4 * t) + (24 * t + 32) * mp.e ** (3 * t)
            - (8 * t ** 3 + 12 * t ** 2 + 36 * t + 18) * mp.e ** (2 * t)
            + 8 * t * mp.e ** t + 1)


def mp_r1(t):
    t = mp.mpf(t)
    den = 2 * t * (2 * t * mp.e ** (2 * t) - 3 * mp.e ** (2 * t)
                   + 4 * mp.e ** t - 1)
    return mp.sqrt(mp_n1(t)) / den


def mp_n2(t):
    t = mp.mpf(t)
    return ((1 + 4 * t) * mp.e ** (4 * t)
            - (2 + 4 * t + 12 * t ** 2 + 8 * t ** 3) * mp.e ** (2 * t) + 1)


def mp_r2(t):
    t = mp.mpf(t)
    m = (2 * t + 1) * mp.e ** (2 * t) - 1
    return mp.sqrt(mp_n2(t) / (t ** 2 * m ** 2)) / 2


def mp_s12(t):
    t = mp.mpf(t)
    return ((2 * t - 3) * mp.e ** (2 * t) + 4 * mp.e ** t - 1) ** 2 \
        * mp.sqrt(mp_n1(t))


def mp_s22(t):
    t = mp.mpf(t)
    return (4 * t * mp.e ** t
            + (8 * t + 32 * t ** 3 + 40 * t ** 2) * mp.e ** (3 * t)
            + (-8 * t ** 2 - 12 * t) * mp.e ** (5 * t))


def mp_s23(t):
    t = mp.mpf(t)
    return mp.sqrt((4 * t + 1) * mp.e ** (4 * t)
                   - 2 * mp.e ** (2 * t) * (1 + 2 * t + 6 * t ** 2
                                            + 4 * t ** 3) + 1) \
        * ((2 * t + 1) * mp.e ** (2 * t) - 1) ** 2


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240915)
