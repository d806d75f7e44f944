"""Closed-form expansion families for the density profile near x = +-1.

Under the maps x = +-(1 + t/n) and x = +-(1 - t/(n+t)), the scaled density
pi * f_n(x(t)) / n converges as n -> infinity to R(t) + S(t)/n + O(1/n^2)
with closed-form R and S built from polynomials in t and e^(+-t); the
slope-squared correction brings three more profile functions g21, g31, g51
per side.  This module evaluates all fourteen profiles in double
precision over the whole half-line:

* t < 0.5: Taylor tables.  Every profile is 0/0 at t = 0 with up to ten
  orders of cancellation, hopeless in floating point; the tables are
  generated at import time by exact rational power-series arithmetic in
  tau = sqrt(t) (exp series, products, quotients, square roots), so the
  evaluation is a plain Horner step.
* t >= 0.5: the closed forms, factored so only e^(-t) appears; no
  overflow at any t and no leading-order cancellation away from 0.

The S3 numerator below repairs a misprint: its e^(-6t) bracket must carry
the constant -63/4 (not -61/4) for the numerator to vanish at t = 0, as
the finite-n limit requires.  Likewise G31_INNER is the t -> -t mirror of
G31_OUTER on the principal branch; both fixes are pinned by tests against
high-precision finite-n limits.
"""

from __future__ import annotations

import math
from fractions import Fraction as Fr

import numpy as np

SMALL_T_SEAM = 0.5
TAIL_SWITCH = 40.0

_NT = 76  # tau-series order (t-order 38)


class _TauSeries:
    """Power series in tau = sqrt(t) with rational coefficients.

    A value is horner(a, tau) * sqrt(c); the separate positive square
    factor c lets square roots of series with non-square leading
    coefficients stay exact through products and quotients.
    """

    __slots__ = ("c", "a")

    def __init__(self, a, c=Fr(1)):
        self.a = (list(a) + [Fr(0)] * _NT)[:_NT]
        self.c = Fr(c)

    def __mul__(self, other):
        out = [Fr(0)] * _NT
        for i, ai in enumerate(self.a):
            if ai:
                for j, bj in enumerate(other.a):
                    if i + j >= _NT:
                        break
                    if bj:
                        out[i + j] += ai * bj
        return _TauSeries(out, self.c * other.c)

    def __truediv__(self, other):
        la = next((i for i, v in enumerate(self.a) if v), None)
        lb = next(i for i, v in enumerate(other.a) if v)
        if la is None:
            return _TauSeries([], 1)
        if la < lb:
            raise ArithmeticError("quotient would have a pole at t = 0")
        a = self.a[lb:] + [Fr(0)] * lb
        b = other.a[lb:] + [Fr(0)] * lb
        out = [Fr(0)] * _NT
        for i in range(_NT):
            acc = a[i]
            for j in range(1, i + 1):
                if b[j]:
                    acc -= b[j] * out[i - j]
            out[i] = acc / b[0]
        return _TauSeries(out, self.c / other.c)

    def __add__(self, other):
        assert self.c == other.c
        return _TauSeries([x + y for x, y in zip(self.a, other.a)], self.c)

    def __sub__(self, other):
        assert self.c == other.c
        return _TauSeries([x - y for x, y in zip(self.a, other.a)], self.c)

    def scale(self, k):
        k = Fr(k)
        return _TauSeries([k * x for x in self.a], self.c)

    def sqrt(self):
        assert self.c == 1
        la = next(i for i, v in enumerate(self.a) if v)
        if la % 2 or self.a[la] <= 0:
            raise ArithmeticError("square root needs even order, positive lead")
        c0 = self.a[la]
        u = [x / c0 for x in self.a[la:]] + [Fr(0)] * la
        out = [Fr(0)] * _NT
        out[0] = Fr(1)
        for i in range(1, _NT):
            acc = u[i]
            for j in range(1, i):
                acc -= out[j] * out[i - j]
            out[i] = acc / 2
        return _TauSeries([Fr(0)] * (la // 2) + out[: _NT - la // 2], c0)

    def floats(self) -> np.ndarray:
        m = math.sqrt(float(self.c))
        return np.array([float(x) * m for x in self.a])


def _tpoly(*coeffs):
    a = [Fr(0)] * _NT
    for i, c in enumerate(coeffs):
        if 2 * i < _NT:
            a[2 * i] = Fr(c)
    return _TauSeries(a)


def _tau():
    a = [Fr(0)] * _NT
    a[1] = Fr(1)
    return _TauSeries(a)


def _expmt(k):
    a = [Fr(0)] * _NT
    term = Fr(1)
    for i in range(_NT // 2):
        a[2 * i] = term
        term = term * Fr(-k) / (i + 1)
    return _TauSeries(a)


def _lc(*terms):
    out = terms[0][0] * terms[0][1]
    for p, e in terms[1:]:
        out = out + p * e
    return out


def _build_series_tables() -> dict:
    one = _tpoly(1)
    w = _expmt(1)
    v = _expmt(2)
    w2 = w * w
    w3 = w2 * w
    w4 = w2 * w2
    w5 = w4 * w
    w6 = w4 * w2
    v2 = v * v
    v3 = v2 * v

    ntil = _lc((_tpoly(-15, 4), one), (_tpoly(32, 24), w),
               (_tpoly(-18, -36, -12, -8), w2), (_tpoly(0, 8), w3), (one, w4))
    dtil = _lc((_tpoly(-3, 2), one), (_tpoly(4), w), (_tpoly(-1), w2))
    s11 = _lc((_tpoly(-27, -6, 4), one), (_tpoly(156, -84, 116, -24), w),
              (_tpoly(-331, 220, -212, 96, -72, 16), w2),
              (_tpoly(328, -168, 128, -104), w3),
              (_tpoly(-153, 42, -32, 8, 8), w4), (_tpoly(28, -4, -4), w5),
              (_tpoly(-1), w6)).scale(Fr(-1, 4))
    n2 = _lc((_tpoly(1, 4), one), (_tpoly(-2, -4, -12, -8), v), (one, v2))
    m2 = _lc((_tpoly(1, 2), one), (_tpoly(-1), v))
    s21 = _lc((one, v3), (_tpoly(-3, 30, 48, -8, -8), v2),
              (_tpoly(3, -12, 52, 96, 40, -16), v), (_tpoly(-1, -18, -4), one))
    s22 = _lc((_tpoly(0, 4), v2), (_tpoly(0, 8, 40, 32), v),
              (_tpoly(0, -12, -8), one))
    n1m = _lc((_tpoly(-15, -4), w4), (_tpoly(32, -24), w3),
              (_tpoly(-18, 36, -12, 8), w2), (_tpoly(0, -8), w), (one, one))
    d1m = _lc((_tpoly(3, 2), w2), (_tpoly(-4), w), (one, one))
    s31 = _lc((_tpoly(Fr(-63, 4), Fr(-69, 2), -7), w6),
              (_tpoly(39, 35, -55, 6), w5),
              (_tpoly(Fr(-63, 4), 49, 91, -12, 22, -4), w4),
              (_tpoly(-30, -66, -44, -6), w3),
              (_tpoly(Fr(123, 4), Fr(35, 2), 16, -6, 2), w2),
              (_tpoly(-9, -1, -1), w), (_tpoly(Fr(3, 4)), one))
    d3m = _lc((_tpoly(-3, -2), w2), (_tpoly(4), w), (_tpoly(-1), one))
    n2m = _lc((_tpoly(1, -4), v2), (_tpoly(-2, 4, -12, 8), v), (one, one))
    m4 = _lc((one, one), (_tpoly(-1, 2), v))
    s41 = _lc((_tpoly(Fr(-3, 8), Fr(15, 4), Fr(-7, 2)), v3),
              (_tpoly(Fr(9, 8), Fr(-3, 2), Fr(19, 2), -22, 15, -2), v2),
              (_tpoly(Fr(-9, 8), Fr(-9, 4), 6, -3, 1), v),
              (_tpoly(Fr(3, 8)), one)).scale(8)
    s42 = _lc((_tpoly(0, -4), w), (_tpoly(0, -8, 40, -32), w3),
              (_tpoly(0, 12, -8), w5))

    sq_ntil = ntil.sqrt()
    sq_n2 = n2.sqrt()
    sq_n1m = n1m.sqrt()
    sq_n2m = n2m.sqrt()
    den2 = (sq_n2 * (m2 * m2)).scale(4)
    den4 = (sq_n2m * (m4 * m4)).scale(4)

    g31o_num = _lc((_tpoly(-1, 2, 4), one), (one, v))
    b5 = _lc((_tpoly(1, 6, 8), one), (_tpoly(-3, -12, -20, -32, -16), v),
             (_tpoly(3, 6, 12, 8), v2), (_tpoly(-1), v3))
    g31i_num = _lc((one, one), (_tpoly(-1, -2, 4), v))
    g51i_num = _lc((_tpoly(2, 4, -8), v), (_tpoly(-2), one))

    tables = {
        "R1": sq_ntil / (dtil * _tpoly(0, 2)),
        "S1": s11 / (dtil * dtil * sq_ntil),
        "R2": sq_n2 / (m2 * _tpoly(0, 2)),
        "S2_EVEN": (s21 + w * s22) / den2,
        "S2_ODD": (s21 - w * s22) / den2,
        "R3": sq_n1m / (d1m * _tpoly(0, 2)),
        "S3": s31 / (d3m * d3m * sq_n1m),
        "R4": sq_n2m / (m4 * _tpoly(0, 2)),
        "S4_EVEN": (s41 + s42) / den4,
        "S4_ODD": (s41 - s42) / den4,
        "G21_OUTER": (v * _lc((_tpoly(0, -8, 16, -16, -32), one),
                              (_tpoly(0, 8), v))) / n2,
        "G31_OUTER": (w * g31o_num).scale(-1) / (_tau() * (m2 * m2.sqrt())),
        "G51_OUTER": (_tau() * (w * g31o_num)).scale(-2) / b5.sqrt(),
        "G21_INNER": (_tpoly(0, 8) * _lc((one, one),
                                         (_tpoly(-1, -2, -2, 4), v)))
                     / n2m.scale(-1),
        "G31_INNER": g31i_num.scale(-1) / (_tau() * (m4 * m4.sqrt())),
        "G51_INNER": (_tau() * g51i_num) / (m4.sqrt() * sq_n2m),
    }
    return {name: ts.floats() for name, ts in tables.items()}


_SERIES = _build_series_tables()


def _horner_tau(name: str, t: float) -> float:
    tau = math.sqrt(t)
    acc = 0.0
    for c in _SERIES[name][::-1]:
        acc = acc * tau + c
    return acc


# ---------------------------------------------------------------------------
# factored closed forms, stable for all t >= SMALL_T_SEAM

def _r1_closed(t: float) -> float:
    w = math.exp(-t)
    ntil = ((4 * t - 15) + (24 * t + 32) * w
            - (8 * t**3 + 12 * t**2 + 36 * t + 18) * w * w
            + 8 * t * w**3 + w**4)
    return math.sqrt(ntil) / (2 * t * ((2 * t - 3) + 4 * w - w * w))


def _s1_closed(t: float) -> float:
    w = math.exp(-t)
    s11 = -0.25 * ((4 * t**2 - 6 * t - 27)
                   + (156 - 84 * t + 116 * t**2 - 24 * t**3) * w
                   + (16 * t**5 - 72 * t**4 + 96 * t**3 - 212 * t**2
                      + 220 * t - 331) * w**2
                   + (328 - 168 * t + 128 * t**2 - 104 * t**3) * w**3
                   + (8 * t**4 + 8 * t**3 - 32 * t**2 + 42 * t - 153) * w**4
                   + (28 - 4 * t - 4 * t**2) * w**5 - w**6)
    ntil = ((4 * t - 15) + (24 * t + 32) * w
            - (8 * t**3 + 12 * t**2 + 36 * t + 18) * w**2
            + 8 * t * w**3 + w**4)
    dtil = (2 * t - 3) + 4 * w - w * w
    return s11 / (dtil * dtil * math.sqrt(ntil))


def _n2_of(t: float, v: float) -> float:
    return (1 + 4 * t) - (2 + 4 * t + 12 * t**2 + 8 * t**3) * v + v * v


def _r2_closed(t: float) -> float:
    v = math.exp(-2 * t)
    return math.sqrt(_n2_of(t, v)) / (2 * t * (2 * t + 1 - v))


def _s2_closed(t: float, even: bool) -> float:
    v = math.exp(-2 * t)
    w = math.exp(-t)
    s21 = (v**3 + (-8 * t**4 - 8 * t**3 + 48 * t**2 + 30 * t - 3) * v**2
           + (-16 * t**5 + 40 * t**4 + 96 * t**3 + 52 * t**2 - 12 * t + 3) * v
           - (4 * t**2 + 18 * t + 1))
    s22 = 4 * t * v**2 + (32 * t**3 + 40 * t**2 + 8 * t) * v \
        - (8 * t**2 + 12 * t)
    den = 4 * math.sqrt(_n2_of(t, v)) * (2 * t + 1 - v) ** 2
    return (s21 + s22 * w if even else s21 - s22 * w) / den


def _n1m_of(t: float, w: float) -> float:
    return ((-4 * t - 15) * w**4 + (32 - 24 * t) * w**3
            - (-8 * t**3 + 12 * t**2 - 36 * t + 18) * w**2 - 8 * t * w + 1)


def _r3_closed(t: float) -> float:
    w = math.exp(-t)
    return math.sqrt(_n1m_of(t, w)) \
        / (2 * t * (2 * t * w * w + 3 * w * w - 4 * w + 1))


def _s3_closed(t: float) -> float:
    w = math.exp(-t)
    s31 = ((-7 * t**2 - 34.5 * t - 15.75) * w**6
           + (6 * t**3 - 55 * t**2 + 35 * t + 39) * w**5
           + (-4 * t**5 + 22 * t**4 - 12 * t**3 + 91 * t**2 + 49 * t
              - 15.75) * w**4
           - (6 * t**3 + 44 * t**2 + 66 * t + 30) * w**3
           + (2 * t**4 - 6 * t**3 + 16 * t**2 + 17.5 * t + 30.75) * w**2
           + (-t**2 - t - 9) * w + 0.75)
    d3m = (-2 * t - 3) * w * w + 4 * w - 1
    return s31 / (d3m * d3m * math.sqrt(_n1m_of(t, w)))


def _n2m_of(t: float, v: float) -> float:
    return (1 - 4 * t) * v * v + (8 * t**3 - 12 * t**2 + 4 * t - 2) * v + 1


def _r4_closed(t: float) -> float:
    v = math.exp(-2 * t)
    return math.sqrt(_n2m_of(t, v)) / (2 * t * (1 - (1 - 2 * t) * v))


def _s4_closed(t: float, even: bool) -> float:
    v = math.exp(-2 * t)
    w = math.exp(-t)
    s41 = 8 * ((3.75 * t - 3.5 * t**2 - 0.375) * v**3
               + (-2 * t**5 + 15 * t**4 - 22 * t**3 + 9.5 * t**2
                  - 1.5 * t + 1.125) * v**2
               + (t**4 - 3 * t**3 + 6 * t**2 - 2.25 * t - 1.125) * v + 0.375)
    s42 = -4 * t * w + (-32 * t**3 + 40 * t**2 - 8 * t) * w**3 \
        + (12 * t - 8 * t**2) * w**5
    den = 4 * math.sqrt(_n2m_of(t, v)) * ((1 - 2 * t) * v - 1) ** 2
    return (s41 + s42 if even else s41 - s42) / den


def _g21_outer_closed(t: float) -> float:
    v = math.exp(-2 * t)
    num = v * ((-32 * t**4 - 16 * t**3 + 16 * t**2 - 8 * t) + 8 * t * v)
    return num / _n2_of(t, v)


def _g31_outer_closed(t: float) -> float:
    v = math.exp(-2 * t)
    w = math.exp(-t)
    return -w * ((4 * t**2 + 2 * t - 1) + v) \
        / (math.sqrt(t) * (2 * t + 1 - v) ** 1.5)


def _g51_outer_closed(t: float) -> float:
    v = math.exp(-2 * t)
    w = math.exp(-t)
    b5 = ((8 * t**2 + 6 * t + 1)
          + (-16 * t**4 - 32 * t**3 - 20 * t**2 - 12 * t - 3) * v
          + (8 * t**3 + 12 * t**2 + 6 * t + 3) * v**2 - v**3)
    return -2 * math.sqrt(t) * ((4 * t**2 + 2 * t - 1) + v) * w / math.sqrt(b5)


def _g21_inner_closed(t: float) -> float:
    v = math.exp(-2 * t)
    num = 8 * t * (1 + (4 * t**3 - 2 * t**2 - 2 * t - 1) * v)
    return num / (-_n2m_of(t, v))


def _g31_inner_closed(t: float) -> float:
    v = math.exp(-2 * t)
    return -(1 + (4 * t**2 - 2 * t - 1) * v) \
        / (math.sqrt(t) * (1 - (1 - 2 * t) * v) ** 1.5)


def _g51_inner_closed(t: float) -> float:
    v = math.exp(-2 * t)
    num = math.sqrt(t) * ((-8 * t**2 + 4 * t + 2) * v - 2)
    return num / math.sqrt(((2 * t - 1) * v + 1) * _n2m_of(t, v))


_CLOSED = {
    "R1": _r1_closed,
    "S1": _s1_closed,
    "R2": _r2_closed,
    "S2_EVEN": lambda t: _s2_closed(t, True),
    "S2_ODD": lambda t: _s2_closed(t, False),
    "R3": _r3_closed,
    "S3": _s3_closed,
    "R4": _r4_closed,
    "S4_EVEN": lambda t: _s4_closed(t, True),
    "S4_ODD": lambda t: _s4_closed(t, False),
    "G21_OUTER": _g21_outer_closed,
    "G31_OUTER": _g31_outer_closed,
    "G51_OUTER": _g51_outer_closed,
    "G21_INNER": _g21_inner_closed,
    "G31_INNER": _g31_inner_closed,
    "G51_INNER": _g51_inner_closed,
}

# large-t limiting forms; None means the factored closed form already decays
# cleanly (the exponential-tail outer g profiles)
_TAILS = {
    "R1": lambda t: 0.5 * t ** -1.5,
    "S1": lambda t: -0.125 / math.sqrt(t),
    "R2": lambda t: 0.5 * t ** -1.5,
    "S2_EVEN": lambda t: -0.125 / math.sqrt(t),
    "S2_ODD": lambda t: -0.125 / math.sqrt(t),
    "R3": lambda t: 0.5 / t,
    "S3": lambda t: 0.75,
    "R4": lambda t: 0.5 / t,
    "S4_EVEN": lambda t: 0.75,
    "S4_ODD": lambda t: 0.75,
    "G21_OUTER": None,
    "G31_OUTER": None,
    "G51_OUTER": None,
    "G21_INNER": lambda t: -8.0 * t,
    "G31_INNER": lambda t: -1.0 / math.sqrt(t),
    "G51_INNER": lambda t: -2.0 * math.sqrt(t),
}


def profile_value(name: str, t: float) -> float:
    """Series/closed-form evaluation, accurate over the whole half-line.

    Used by the integrators: never replaces the function by its limiting
    tail, so regularized combinations keep their genuine decay.
    """
    if t <= 0.0:
        raise ValueError(f"profile {name} defined for t > 0 only, got {t}")
    if t < SMALL_T_SEAM:
        return _horner_tau(name, t)
    return _CLOSED[name](t)


def profile_with_tail(name: str, t: float) -> float:
    """Like profile_value, but switches to the limiting form past t = 40."""
    if t > TAIL_SWITCH and _TAILS[name] is not None:
        return _TAILS[name](t)
    return profile_value(name, t)
