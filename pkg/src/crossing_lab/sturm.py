"""Exact counting of distinct real roots of float-coefficient polynomials.

Double-precision coefficients are scaled by a power of two into integers
(binary floats are dyadic rationals, so this is lossless), and the classic
sign-variation count runs over a primitive pseudo-remainder chain in
exact integer arithmetic.  Each chain element is a positive rational
multiple of the textbook remainder sequence, which leaves every sign
variation intact while keeping coefficient growth polynomial.

Interval conventions: the core counts roots in the open interval; callers
that need gap-free tilings of the line (the Monte Carlo buckets) ask for
half-open [a, b) counting, which assigns a root sitting exactly on a
shared endpoint to the interval on its right.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


class ZeroPolynomial(ValueError):
    """All coefficients are zero; root counting is meaningless."""


def _to_int_poly(coeffs: Sequence[float]) -> list:
    """Rescale dyadic-rational floats to integers (exact)."""
    fracs = []
    for c in coeffs:
        c = float(c)
        if not math.isfinite(c):
            raise ValueError(f"non-finite coefficient {c}")
        fracs.append(Fraction(c))
    while fracs and fracs[-1] == 0:
        fracs.pop()
    if not fracs:
        raise ZeroPolynomial("zero polynomial")
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // math.gcd(scale, f.denominator)
    return [int(f * scale) for f in fracs]


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _derivative(p: list) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def _primitive(p: list) -> list:
    g = math.gcd(*p) if p else 1
    return [c // g for c in p] if g > 1 else p


def _neg_prem(a: list, b: list) -> list:
    """-(positive multiple of rem(a, b)), primitive.

    Eliminates leading terms with the positive multiplier |lc(b)|, so the
    result is a positive rational multiple of -rem(a, b): exactly what the
    sign-variation chain needs.
    """
    lb = b[-1]
    mult = abs(lb)
    sgn = 1 if lb > 0 else -1
    r = list(a)
    db = len(b) - 1
    while len(r) - 1 >= db:
        lead = r.pop()
        if lead == 0:
            continue
        shift = len(r) - db
        slead = sgn * lead
        for i in range(len(r)):
            if i >= shift:
                r[i] = mult * r[i] - slead * b[i - shift]
            else:
                r[i] = mult * r[i]
    _trim(r)
    return _primitive([-c for c in r])


def sturm_chain(p: list) -> list:
    """Sign-faithful remainder chain of a primitive integer polynomial."""
    chain = [p]
    d = _trim(_derivative(p))
    if d:
        chain.append(_primitive(d))
    while len(chain[-1]) > 1:
        nxt = _neg_prem(chain[-2], chain[-1])
        if not nxt:
            break
        chain.append(nxt)
    return chain


def _exact_div(num: list, den: list) -> list:
    """Exact polynomial division over the rationals (asserts exactness)."""
    num = [Fraction(c) for c in num]
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    dd = len(den) - 1
    lead = Fraction(den[-1])
    work = list(num)
    for shift in range(len(q) - 1, -1, -1):
        c = work[shift + dd] / lead
        q[shift] = c
        if c:
            for i, bc in enumerate(den):
                work[shift + i] -= c * bc
    if any(work[:dd]):
        raise ArithmeticError("inexact polynomial division")
    scale = 1
    for f in q:
        scale = scale * f.denominator // math.gcd(scale, f.denominator)
    return _primitive([int(f * scale) for f in q])


def squarefree_part(p: list) -> tuple:
    """(squarefree part of p, whether p was already squarefree, its chain).

    The chain of p is a byproduct; when p was already squarefree (the
    generic case) the caller can reuse it.  The squarefree flag doubles as
    an exact nonvanishing test for the resultant of (p, p'): multiple
    roots exist iff deg gcd(p, p') > 0.
    """
    if len(p) <= 2:
        return p, True, sturm_chain(p)
    chain = sturm_chain(p)
    tail = chain[-1]
    if len(tail) > 1:
        reduced = _exact_div(p, tail)
        return reduced, False, sturm_chain(reduced)
    return p, True, chain


def _sign_at(p: list, point) -> int:
    """Sign of p at a Fraction/int, or at +-infinity (math.inf allowed)."""
    if point == math.inf:
        return (p[-1] > 0) - (p[-1] < 0)
    if point == -math.inf:
        s = (p[-1] > 0) - (p[-1] < 0)
        return s if (len(p) - 1) % 2 == 0 else -s
    if isinstance(point, int) or point.denominator == 1:
        z = int(point)
        acc = 0
        for c in reversed(p):
            acc = acc * z + c
    else:
        num, den = point.numerator, point.denominator
        acc = 0
        dp = len(p) - 1
        for i, c in enumerate(p):
            acc += c * num ** i * den ** (dp - i)
    return (acc > 0) - (acc < 0)


def _variations(chain: list, point) -> int:
    signs = [s for s in (_sign_at(p, point) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _as_endpoint(v: float):
    if v == math.inf or v == -math.inf:
        return v
    f = Fraction(float(v))
    return int(f) if f.denominator == 1 else f


def interval_counts(
    coeffs: Sequence[float],
    intervals: Sequence[tuple],
    include_left: bool = False,
) -> list:
    """Distinct-root counts over several disjoint ordered intervals,
    sharing one squarefree reduction and one sign chain.

    include_left=False counts open intervals; include_left=True counts
    [a, b) on finite left endpoints, so intervals tiling the line add up
    to the total root count with endpoint hits assigned rightward.
    """
    for a, b in intervals:
        if not a < b:
            raise ValueError(f"bad interval ({a}, {b})")
    p = _to_int_poly(coeffs)
    if len(p) == 1:
        return [0] * len(intervals)
    m = 0
    while p[m] == 0:
        m += 1
    origin_root = m > 0
    p = _primitive(p[m:])
    p, _, chain = squarefree_part(p)
    endpoints = sorted({_as_endpoint(v) for iv in intervals for v in iv
                        if v not in (math.inf, -math.inf)})
    deflated = set()
    for e in endpoints:
        if e != 0 and _sign_at(p, e) == 0:
            if isinstance(e, int):
                p = _exact_div(p, [-e, 1])
            else:
                p = _exact_div(p, [-e.numerator, e.denominator])
            deflated.add(e)
    if deflated:
        chain = sturm_chain(p)
    var = {e: _variations(chain, e) for e in endpoints}
    var[math.inf] = _variations(chain, math.inf)
    var[-math.inf] = _variations(chain, -math.inf)

    def roots_open(a, b) -> int:
        ea, eb = _as_endpoint(a), _as_endpoint(b)
        inside = var[ea] - var[eb]
        if origin_root and a < 0 < b:
            inside += 1
        return inside

    out = []
    for a, b in intervals:
        cnt = roots_open(a, b)
        if include_left and math.isfinite(a):
            ea = _as_endpoint(a)
            if ea in deflated or (origin_root and a == 0):
                cnt += 1
        out.append(cnt)
    return out


def count_distinct_roots(
    coeffs: Sequence[float],
    a: float,
    b: float,
    include_left: bool = False,
) -> int:
    """Distinct real roots of the polynomial in (a, b), exactly.

    coeffs is little-endian (coeffs[i] multiplies x^i).  With
    include_left=True a root exactly at a finite left endpoint is counted
    too, turning the interval into [a, b); adjacent intervals then tile
    the line with no double counting.
    """
    return interval_counts(coeffs, [(a, b)], include_left=include_left)[0]
