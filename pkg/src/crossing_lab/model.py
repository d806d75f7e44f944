"""Coefficient model and second-moment machinery for random polynomials
whose coefficients are cumulative sums of independent centered Gaussian
increments (Brownian-motion observations).

The polynomial is Q_n(x) = sum_i A_i x^i with A_j = D_0 + ... + D_j and
D_k ~ N(0, sigma_k^2) independent.  Regrouping by increment gives

    Q_n(x)  = sum_k a_k(x) D_k,     a_k(x) = x^k + x^(k+1) + ... + x^n,
    Q_n'(x) = sum_k b_k(x) D_k,     b_k(x) = sum_{j=k}^n j x^(j-1),

so the joint law of (Q_n(x), Q_n'(x)) is a centered bivariate Gaussian with

    a2 = Var Q_n,  b2 = Var Q_n',  c = Cov(Q_n, Q_n'),  e2 = a2*b2 - c^2.

Everything downstream (the crossing density, its quadrature, the Monte
Carlo cross-checks) consumes these four numbers, so they are computed here
once, carefully: geometric closed forms away from the 0/0 point x = 1,
compensated summation near it, and extended precision for the cancellation-
prone e2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Half-width of the band around x = +-1 where the geometric closed forms
# for a_k/b_k are abandoned in favour of direct compensated summation.
# At x = 1 the closed forms are 0/0; the band is symmetric at -1 so the
# alternating variants share one policy.
SUMMATION_BAND = 1e-3

# e2 = a2*b2 - c^2 may come out as a tiny negative after rounding even
# though it is a Gram determinant.  Negatives within this relative
# tolerance of a2*b2 are clamped to zero; anything worse is a real bug.
E2_CLAMP_REL = 1e-9

_LD = np.longdouble


class DegenerateMoment(ValueError):
    """The Gaussian pair (Q_n(x), Q_n'(x)) is degenerate at this x.

    Raised when Var Q_n(x) = 0 or the Gram determinant e2 = 0, e.g. at
    x = 0 for models with sigma_0 = 0 where every sample path passes
    through the origin.
    """


@dataclass(frozen=True)
class CoefficientModel:
    """Degree, line slope and increment scales defining the random model.

    n      -- polynomial degree, n >= 1
    slope  -- slope K of the crossed line y = K*x
    sigma  -- n+1 increment standard deviations (sigma_0, ..., sigma_n)
    """

    n: int
    slope: float
    sigma: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"degree must be >= 1, got {self.n}")
        sigma = tuple(float(s) for s in self.sigma)
        if len(sigma) != self.n + 1:
            raise ValueError(
                f"sigma must have n+1 = {self.n + 1} entries, got {len(sigma)}"
            )
        if any(s < 0 for s in sigma):
            raise ValueError("sigma entries must be non-negative")
        if not any(s > 0 for s in sigma):
            raise ValueError("at least one sigma entry must be positive")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "slope", float(self.slope))

    @classmethod
    def unit_increments(cls, n: int, slope: float = 0.0) -> "CoefficientModel":
        """All n+1 increments standard normal (sigma_k = 1 for k = 0..n).

        This is the default model: the coefficient A_0 is itself random.
        """
        return cls(n=n, slope=slope, sigma=(1.0,) * (n + 1))

    @classmethod
    def pinned_origin(cls, n: int, slope: float = 0.0) -> "CoefficientModel":
        """Unit increments except sigma_0 = 0, so A_0 = 0 almost surely.

        Every sample path satisfies Q_n(0) = 0: the curve is pinned to the
        origin and x = 0 solves Q_n(x) = Kx identically.  The moment pair
        degenerates at x = 0, which callers must treat as a boundary.
        """
        return cls(n=n, slope=slope, sigma=(0.0,) + (1.0,) * n)

    def sigma_sq(self) -> np.ndarray:
        return np.asarray(self.sigma, dtype=float) ** 2


@dataclass(frozen=True)
class MomentBundle:
    """Second moments of (Q_n(x), Q_n'(x)) at one evaluation point."""

    x: float
    a2: float  # Var Q_n(x)
    b2: float  # Var Q_n'(x)
    c: float   # Cov(Q_n(x), Q_n'(x))
    e2: float  # a2*b2 - c^2 (Gram determinant, >= 0)


def weight_a(k: int, x: float, n: int) -> float:
    """Geometric-tail weight a_k(x) = x^k + x^(k+1) + ... + x^n.

    Closed form (x^k - x^(n+1)) / (1 - x) away from x = +-1, exact
    compensated summation inside the band around them.
    """
    _check_index(k, n)
    x = float(x)
    if abs(1.0 - x) <= SUMMATION_BAND or abs(1.0 + x) <= SUMMATION_BAND:
        return math.fsum(x ** j for j in range(k, n + 1))
    return (x ** k - x ** (n + 1)) / (1.0 - x)


def weight_b(k: int, x: float, n: int) -> float:
    """Derivative weight b_k(x) = sum_{j=k}^n j x^(j-1).

    Same branch policy as :func:`weight_a`.  The j = 0 term vanishes
    identically, so b_0 == b_1.
    """
    _check_index(k, n)
    x = float(x)
    if abs(1.0 - x) <= SUMMATION_BAND or abs(1.0 + x) <= SUMMATION_BAND:
        return math.fsum(j * x ** (j - 1) for j in range(max(k, 1), n + 1))
    if k == 0:
        # drop the k*x^(k-1) term rather than evaluate 0 * x^-1 at x = 0
        head = -(n + 1) * x ** n / (1.0 - x)
    else:
        head = (k * x ** (k - 1) - (n + 1) * x ** n) / (1.0 - x)
    return head + (x ** k - x ** (n + 1)) / (1.0 - x) ** 2


def _check_index(k: int, n: int) -> None:
    if not 0 <= k <= n:
        raise IndexError(f"weight index k={k} outside 0..{n}")


def weights_vector(n: int, x: float) -> tuple:
    """All weights (a_0..a_n, b_0..b_n) at once, as extended-precision arrays.

    Requires |x| <= 1 + SUMMATION_BAND; larger |x| overflows x^n for large
    n and is handled by the reciprocal parametrization (scaled_sums).
    """
    xl = _LD(x)
    j = np.arange(n + 1)
    powers = xl ** j.astype(_LD)
    xpow_jm1 = np.empty(n + 1, dtype=_LD)  # x^(j-1) with the j = 0 slot zeroed
    xpow_jm1[0] = 0.0
    xpow_jm1[1:] = powers[:-1]
    if abs(1.0 - x) <= SUMMATION_BAND or abs(1.0 + x) <= SUMMATION_BAND:
        a = np.cumsum(powers[::-1])[::-1]
        b = np.cumsum((j * xpow_jm1)[::-1])[::-1]
        b[0] = b[1]
        return a, b
    xn1 = xl ** _LD(n + 1)
    xn = powers[-1]
    one = _LD(1)
    a = (powers - xn1) / (one - xl)
    b = (j * xpow_jm1 - _LD(n + 1) * xn) / (one - xl) \
        + (powers - xn1) / (one - xl) ** 2
    b[0] = b[1]
    return a, b


def scaled_sums(model: CoefficientModel, u: float) -> tuple:
    """Moment sums for x = 1/u with |u| < 1, in overflow-free form.

    With a_k(x) = x^n * ahat_k(u) and b_k(x) = x^(n-1) * (n*ahat_k - chat_k),

        ahat_k(u) = (1 - u^(n-k+1)) / (1 - u),
        chat_k(u) = sum_{m=0}^{n-k} m u^m,

    all hatted quantities stay O(n) however large |x| is.  Returns
    (A2h, Bh2, Ch, E2h) with a2 = A2h * x^(2n), b2 = Bh2 * x^(2n-2),
    c = Ch * x^(2n-1), e2 = E2h * x^(4n-2).  E2h is assembled as
    A2h*F - D^2, which cancels the common near-parallel component of the
    weight vectors and stays accurate as u -> 0.
    """
    n = model.n
    w = model.sigma_sq().astype(_LD)
    ul = _LD(u)
    m = np.arange(n + 1)
    um = ul ** m.astype(_LD)  # u^m, m = 0..n
    one = _LD(1)
    if abs(1.0 - u) <= SUMMATION_BAND or abs(1.0 + u) <= SUMMATION_BAND:
        geo = np.cumsum(um)                # sum_{m<=M} u^m for M = 0..n
        ramp = np.cumsum(m * um)           # sum_{m<=M} m u^m
    else:
        un1 = ul ** _LD(n + 1)
        geo = (one - um * ul) / (one - ul)
        ramp = (ul - (m + 1).astype(_LD) * um * ul + m.astype(_LD) * um * ul * ul) \
            / (one - ul) ** 2
    # index k maps to M = n - k
    ahat = geo[::-1]
    chat = ramp[::-1]
    A2h = float(np.dot(ahat * ahat, w))
    D = float(np.dot(ahat * chat, w))
    F = float(np.dot(chat * chat, w))
    nl = _LD(n)
    Ch = float(nl * _LD(A2h) - _LD(D))
    B2h = float(nl * nl * _LD(A2h) - 2 * nl * _LD(D) + _LD(F))
    E2h = float(_LD(A2h) * _LD(F) - _LD(D) * _LD(D))
    E2h = _clamp_gram(E2h, A2h, B2h)
    return A2h, B2h, Ch, E2h


def _clamp_gram(e2: float, a2: float, b2: float) -> float:
    if e2 >= 0.0:
        return e2
    if -e2 <= E2_CLAMP_REL * a2 * b2:
        return 0.0
    raise ArithmeticError(
        f"Gram determinant {e2} below clamp tolerance for a2*b2 = {a2 * b2}"
    )


def moments(model: CoefficientModel, x: float) -> MomentBundle:
    """Second moments of (Q_n(x), Q_n'(x)) for the given model.

    e2 is accumulated in extended precision and clamped at zero: near
    x = +-1 the two products a2*b2 and c^2 agree to many digits.  For
    |x| > 1 the sums run in the reciprocal variable, so values overflow
    to inf only when the true moments exceed the double range.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    w = model.sigma_sq().astype(_LD)
    if abs(x) <= 1.0:
        a, b = weights_vector(model.n, x)
        a2l = np.dot(a * a, w)
        b2l = np.dot(b * b, w)
        cl = np.dot(a * b, w)
        e2 = float(a2l * b2l - cl * cl)
        a2, b2, c = float(a2l), float(b2l), float(cl)
        e2 = _clamp_gram(e2, a2, b2)
        return MomentBundle(x=x, a2=a2, b2=b2, c=c, e2=e2)
    A2h, B2h, Ch, E2h = scaled_sums(model, 1.0 / x)
    n = model.n
    lax = math.log(abs(x))
    s2n = math.exp(2 * n * lax)
    a2 = A2h * s2n
    b2 = B2h * math.exp((2 * n - 2) * lax)
    c = Ch * math.copysign(math.exp((2 * n - 1) * lax), x)
    e2 = E2h * math.exp((4 * n - 2) * lax)
    return MomentBundle(x=x, a2=a2, b2=b2, c=c, e2=e2)
