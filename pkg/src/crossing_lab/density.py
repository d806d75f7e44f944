"""Crossing density of the random polynomial against the line y = K*x.

For a centered Gaussian pair (Q_n(x), Q_n'(x)) with moments a2, b2, c,
e2 = a2*b2 - c^2, the expected number of solutions of Q_n(x) = Kx in an
interval is the integral of

    f_n(x) = g1 exp(g2) + g3 exp(g4) erf(g5),

    g1 = E / (pi a2),                  E = sqrt(e2),
    g2 = -K^2 (a2 - 2cx + b2 x^2) / (2 e2),
    g3 = K (a2 - cx) / (sqrt(2 pi) a2^(3/2)),
    g4 = -K^2 x^2 / (2 a2),
    g5 = K (a2 - cx) / (sqrt(2) sqrt(a2) E),

which is the conditional-expectation form of the mean crossing rate: the
g1 term is the K = 0 zero-crossing rate, the erf term carries the drift of
the derivative past the line's slope.  f_n is nonnegative for all x.

Integration over unbounded intervals substitutes u = 1/x on |x| > 1, in
which the moments are evaluated directly in the reciprocal parametrization
(no overflow, no truncation point).  Panels are forced to break at
x in {-1, 0, 1}: the integrand develops shoulders of width ~1/n there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    CoefficientModel,
    DegenerateMoment,
    _LD,
    scaled_sums,
    weights_vector,
)
from .quadrature import MAX_PANELS_DEFAULT, integrate

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Points where the integrand changes character; quadrature panels must not
# straddle them.
FORCED_BREAKPOINTS = (-1.0, 0.0, 1.0)


@dataclass(frozen=True)
class DensitySample:
    """Density value and its intermediate terms at one point."""

    x: float
    fn_value: float
    g1: float
    g2: float
    g3: float
    g4: float
    g5: float


@dataclass(frozen=True)
class IntervalCount:
    """Expected crossings over (a, b) with the quadrature error estimate."""

    a: float
    b: float
    expected: float
    abs_error_estimate: float
    converged: bool = True


def erf_eval(t: float) -> float:
    """Error function erf(t) = 2*Phi(t*sqrt(2)) - 1.

    Delegates to the C library implementation, which is odd, saturates to
    +-1, and is accurate to well under the 1e-12 absolute contract.
    """
    return math.erf(float(t))


def _assemble(x: float, K: float, a2: float, e2: float, q2num: float,
              a2mcx: float, g4: float) -> DensitySample:
    """Build the sample from precomputed pieces.

    q2num = a2 - 2cx + b2 x^2 (the variance of Q_n - x Q_n', >= 0) and
    a2mcx = a2 - c*x; both are supplied by the caller because the stable
    way to compute them differs between the direct and reciprocal paths.
    """
    if not a2 > 0.0 or not e2 > 0.0:
        raise DegenerateMoment(
            f"degenerate Gaussian pair at x={x}: a2={a2}, e2={e2}"
        )
    E = math.sqrt(e2)
    A = math.sqrt(a2)
    g1 = E / (math.pi * a2)
    if K == 0.0:
        return DensitySample(x=x, fn_value=g1, g1=g1, g2=0.0, g3=0.0,
                             g4=0.0, g5=0.0)
    g2 = -K * K * q2num / (2.0 * e2)
    g3 = K * a2mcx / (_SQRT2PI * a2 * A)
    g5 = K * a2mcx / (A * E * _SQRT2)
    fn = g1 * math.exp(g2) + g3 * math.exp(g4) * erf_eval(g5)
    return DensitySample(x=x, fn_value=fn, g1=g1, g2=g2, g3=g3, g4=g4, g5=g5)


def _sample_direct(model: CoefficientModel, x: float) -> DensitySample:
    """Density at |x| <= 1 from the plain weight sums."""
    w = model.sigma_sq().astype(_LD)
    a, b = weights_vector(model.n, x)
    a2l = np.dot(a * a, w)
    b2l = np.dot(b * b, w)
    cl = np.dot(a * b, w)
    e2 = float(a2l * b2l - cl * cl)
    a2 = float(a2l)
    if e2 < 0.0:
        e2 = 0.0 if -e2 <= 1e-9 * a2 * float(b2l) else e2
    # variance of Q - x Q' as an explicit sum of squares: immune to the
    # cancellation that the expanded a2 - 2cx + b2 x^2 suffers near |x|=1
    d = a - _LD(x) * b
    q2num = float(np.dot(d * d, w))
    a2mcx = float(a2l - _LD(x) * cl)
    K = model.slope
    g4 = -K * K * x * x / (2.0 * a2) if a2 > 0.0 else -math.inf
    return _assemble(x, K, a2, e2, q2num, a2mcx, g4)


def _sample_reciprocal(model: CoefficientModel, u: float) -> DensitySample:
    """Density at x = 1/u for 0 < |u| < 1, fully in hatted (scaled) sums.

    The raw moments at large |x| carry factors x^(2n) that overflow; every
    g-term, however, is a ratio in which those factors reduce to modest
    powers of |x|, evaluated here in log space.
    """
    n = model.n
    K = model.slope
    x = 1.0 / u
    A2h, B2h, Ch, E2h = scaled_sums(model, u)
    if not A2h > 0.0 or not E2h > 0.0:
        raise DegenerateMoment(
            f"degenerate Gaussian pair at x={x}: scaled a2={A2h}, e2={E2h}"
        )
    Eh = math.sqrt(E2h)
    Ah = math.sqrt(A2h)
    ax = abs(x)
    g1 = Eh / (math.pi * ax * A2h)
    if K == 0.0:
        return DensitySample(x=x, fn_value=g1, g1=g1, g2=0.0, g3=0.0,
                             g4=0.0, g5=0.0)
    lax = math.log(ax)
    # Var(Q - x Q') = x^(2n) * sum((ahat - bhat)^2 sigma^2); the hatted sum
    # equals (n-1)^2 A2h - 2(n-1)D + F but is cheapest rebuilt from parts
    vh = (_LD(n - 1) * _LD(n - 1) * _LD(A2h)
          - 2 * _LD(n - 1) * (_LD(n) * _LD(A2h) - _LD(Ch))
          + (_LD(B2h) - _LD(n) * _LD(n) * _LD(A2h)
             + 2 * _LD(n) * (_LD(n) * _LD(A2h) - _LD(Ch))))
    q2h = float(vh)
    a2mcx_h = A2h - Ch  # (a2 - c x) = x^(2n) (A2h - Ch)
    g2 = -K * K * q2h * math.exp(-(2 * n - 2) * lax) / (2.0 * E2h)
    g3 = K * a2mcx_h * math.exp(-n * lax) / (_SQRT2PI * A2h * Ah)
    g4 = -K * K * math.exp(-(2 * n - 2) * lax) / (2.0 * A2h)
    g5 = K * a2mcx_h * math.exp(-(n - 1) * lax) / (Ah * Eh * _SQRT2)
    fn = g1 * math.exp(g2) + g3 * math.exp(g4) * erf_eval(g5)
    return DensitySample(x=x, fn_value=fn, g1=g1, g2=g2, g3=g3, g4=g4, g5=g5)


def density_at(model: CoefficientModel, x: float) -> DensitySample:
    """Crossing density f_n(x) with its g-term diagnostics.

    Raises DegenerateMoment where the Gaussian pair collapses (a2 = 0 or
    e2 = 0), which for the pinned-origin model happens at x = 0.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if abs(x) <= 1.0:
        return _sample_direct(model, x)
    return _sample_reciprocal(model, 1.0 / x)


def _f_direct_vec(model: CoefficientModel, xs: np.ndarray) -> np.ndarray:
    return np.array([_sample_direct(model, float(x)).fn_value for x in xs])


def _f_recip_vec(model: CoefficientModel, us: np.ndarray) -> np.ndarray:
    out = np.empty(len(us))
    for i, u in enumerate(us):
        out[i] = _sample_reciprocal(model, float(u)).fn_value / (u * u)
    return out


def _segments(a: float, b: float) -> list:
    """Split (a, b) at the forced breakpoints into direct/reciprocal pieces.

    Returns ('direct', lo, hi) for pieces inside [-1, 1] and
    ('recip', ulo, uhi) for pieces in |x| >= 1, mapped to u = 1/x.  The
    cuts at +-1 guarantee no piece straddles a region boundary.
    """
    cuts = [a] + [p for p in FORCED_BREAKPOINTS if a < p < b] + [b]
    segs = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if -1.0 <= lo and hi <= 1.0:
            segs.append(("direct", lo, hi))
        else:
            # u = 1/x is monotone on each side of zero, so the u-interval
            # endpoints swap: u_lo = 1/hi, u_hi = 1/lo (0 at infinity).
            u_lo = 0.0 if math.isinf(hi) else 1.0 / hi
            u_hi = 0.0 if math.isinf(lo) else 1.0 / lo
            segs.append(("recip", u_lo, u_hi))
    return segs


def expected_crossings(
    model: CoefficientModel,
    a: float,
    b: float,
    tol: float = 1e-8,
    max_panels: int = MAX_PANELS_DEFAULT,
) -> IntervalCount:
    """Expected number of solutions of Q_n(x) = Kx in the interval (a, b).

    Adaptive quadrature of the crossing density; +-inf endpoints are
    integrated exactly via the u = 1/x substitution on |x| > 1 rather than
    truncated.  The error estimate is the sum over panels of the embedded
    Gauss/Kronrod discrepancies.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"need a < b, got ({a}, {b})")
    if tol <= 0:
        raise ValueError("tol must be positive")
    segs = _segments(a, b)
    per_tol = tol / len(segs)
    total = 0.0
    err = 0.0
    ok = True
    for kind, lo, hi in segs:
        if kind == "direct":
            f = lambda xs: _f_direct_vec(model, xs)
        else:
            f = lambda us: _f_recip_vec(model, us)
        res = integrate(f, lo, hi, per_tol, max_panels=max_panels)
        total += res.value
        err += res.error
        ok = ok and res.converged
    return IntervalCount(a=a, b=b, expected=max(total, 0.0),
                         abs_error_estimate=err, converged=ok)
