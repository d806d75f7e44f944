"""Closed asymptotics for the expected crossing count over the whole line.

The full-line expectation splits over (-inf,-1), (-1,0), (0,1), (1,inf);
on each piece a change of variables turns the density into a profile
R(t) + S(t)/n + K^2/n * (slope profiles) + O(1/n^2).  Integrating the
profiles once yields universal constants, and the crossing count becomes

    EN = (1/pi) log(2n+1) + C0/pi  - sqrt-term + K^2/(n pi) * CK
         + C1(parity)/(n pi) + o(1/n),

with C0 the sum of the four leading-profile integrals and CK the sum of
the two slope-profile integrals.  This module evaluates the profiles
(:func:`eval_expansion`), the ten regularized integrals behind the
constants (:func:`regularized_integral`), the assembled formulas
(:func:`theorem_formula`) and a self-audit against the reference values
(:func:`constant_audit`).

Two reference integrals are knowingly irreproducible: the S1 and S3
integrals evaluate to exactly -1/4 and +1/2, not to the reference
-0.25460172372 and 0.497593957 (the parity constants C1 are consistent
with -1/4 and 0.497593957, so the references are not a convention
difference but slips).  The audit reports these rows as flagged rather
than hiding the discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ._expansions import (
    SMALL_T_SEAM,
    profile_value,
    profile_with_tail,
)
from .quadrature import ToleranceNotReached, integrate


class FamilyName(Enum):
    R1 = "R1"
    S1 = "S1"
    R2 = "R2"
    S2 = "S2"
    R3 = "R3"
    S3 = "S3"
    R4 = "R4"
    S4 = "S4"
    G21_OUTER = "G21_OUTER"
    G31_OUTER = "G31_OUTER"
    G51_OUTER = "G51_OUTER"
    G21_INNER = "G21_INNER"
    G31_INNER = "G31_INNER"
    G51_INNER = "G51_INNER"


class Parity(Enum):
    ODD = "odd"
    EVEN = "even"
    NA = "na"


_PARITY_FAMILIES = {FamilyName.S2, FamilyName.S4}


@dataclass(frozen=True)
class ExpansionFamily:
    """A profile name plus the degree parity where the profile needs one.

    Only S2 and S4 depend on whether n is even or odd (their antisymmetric
    part flips sign); every other family carries parity NA.
    """

    family: FamilyName
    parity: Parity = Parity.NA

    def __post_init__(self):
        if (self.parity is not Parity.NA) != (self.family in _PARITY_FAMILIES):
            raise ValueError(
                f"{self.family.name} takes parity "
                f"{'ODD or EVEN' if self.family in _PARITY_FAMILIES else 'NA'}"
            )

    def key(self) -> str:
        if self.family in _PARITY_FAMILIES:
            return f"{self.family.name}_{self.parity.name}"
        return self.family.name


def eval_expansion(family, t: float) -> float:
    """Evaluate one expansion profile at t > 0.

    Accepts an ExpansionFamily or, for parity-free profiles, a bare
    FamilyName.  Below t = 0.5 evaluation runs on exact-arithmetic Taylor
    tables (the closed forms are 0/0 at t = 0); past t = 40 the known
    limiting forms take over where one exists.
    """
    if isinstance(family, FamilyName):
        family = ExpansionFamily(family)
    t = float(t)
    if t <= 0.0:
        raise ValueError(f"expansion profiles are defined for t > 0, got {t}")
    return profile_with_tail(family.key(), t)


class RegularizedIntegral(Enum):
    INT_R1 = "INT_R1"
    INT_S1_REG = "INT_S1_REG"
    INT_R2 = "INT_R2"
    INT_S2_REG = "INT_S2_REG"
    INT_R3_REG = "INT_R3_REG"
    INT_S3_COMBO = "INT_S3_COMBO"
    INT_R4_REG = "INT_R4_REG"
    INT_S4_COMBO = "INT_S4_COMBO"
    INT_K2_OUTER = "INT_K2_OUTER"
    INT_K2_INNER = "INT_K2_INNER"


_NEEDS_PARITY = {RegularizedIntegral.INT_S2_REG, RegularizedIntegral.INT_S4_COMBO}

# external reference values for the ten constants; the flagged S1/S3
# rows are retained verbatim so the audit can show the gap
PUBLISHED = {
    ("INT_R1", ""): 0.734874192,
    ("INT_S1_REG", ""): -0.25460172372,
    ("INT_R2", ""): 1.09564006,
    ("INT_S2_REG", "odd"): -0.0322863,
    ("INT_S2_REG", "even"): -0.4677136958,
    ("INT_R3_REG", ""): -0.28977126,
    ("INT_S3_COMBO", ""): 0.497593957,
    ("INT_R4_REG", ""): 0.3793914850,
    ("INT_S4_COMBO", "odd"): 1.499908194,
    ("INT_S4_COMBO", "even"): -0.4999082034,
    ("INT_K2_OUTER", ""): 1.593359902,
    ("INT_K2_INNER", ""): 1.533149028,
}

LOG_CONSTANT = 1.920134478     # sum of the four R-integrals
K2_CONSTANT = 3.126508929      # sum of the two slope-profile integrals
C1_ODD = 1.715215531
C1_EVEN = -0.7200279388

_QUAD_TOL = 1e-9
# truncation point for integrands that decay like e^(-t/2) or faster; the
# discarded tail is below 1e-17
_EXP_CUTOFF = 80.0


def _vec(f):
    return lambda ts: np.array([f(float(t)) for t in ts])


def _checked(res) -> float:
    if not res.converged:
        raise ToleranceNotReached(
            f"regularized integral piece stuck at error {res.error:.2e}",
            best=res.value, error=res.error)
    return res.value


def _indicator_tail_s(name: str, shift) -> float:
    """integral over (1, inf) of profile + shift(t), via s = t^(-1/2).

    The substitution t = 1/s^2 integrates the exact profile out to
    infinity; with the indicator counter-term the integrand tends to a
    finite limit at s = 0, so no truncation point is needed at all.
    """

    def g(s: float) -> float:
        t = 1.0 / (s * s)
        return (profile_value(name, t) + shift(t)) * 2.0 / (s ** 3)

    return _checked(integrate(_vec(g), 0.0, 1.0, _QUAD_TOL,
                              breakpoints=(0.5,)))


def _finite_part(f, hi: float = 1.0) -> float:
    return _checked(integrate(_vec(f), 0.0, hi, _QUAD_TOL,
                              breakpoints=(0.25, SMALL_T_SEAM)))


def _exp_tail(f, lo: float = 1.0) -> float:
    return _checked(integrate(_vec(f), lo, _EXP_CUTOFF, _QUAD_TOL,
                              breakpoints=(5.0, 20.0)))


@lru_cache(maxsize=None)
def _integral_value(name: str, parity: str) -> float:
    even = parity == "even"
    s2 = "S2_EVEN" if even else "S2_ODD"
    s4 = "S4_EVEN" if even else "S4_ODD"
    if name == "INT_R1":
        return _finite_part(lambda t: profile_value("R1", t)) \
            + _indicator_tail_s("R1", lambda t: 0.0)
    if name == "INT_S1_REG":
        return _finite_part(lambda t: profile_value("S1", t)) \
            + _indicator_tail_s("S1", lambda t: 0.125 / math.sqrt(t))
    if name == "INT_R2":
        return _finite_part(lambda t: profile_value("R2", t)) \
            + _indicator_tail_s("R2", lambda t: 0.0)
    if name == "INT_S2_REG":
        return _finite_part(lambda t: profile_value(s2, t)) \
            + _indicator_tail_s(s2, lambda t: 0.125 / math.sqrt(t))
    if name == "INT_R3_REG":
        return _finite_part(lambda t: profile_value("R3", t)) \
            + _exp_tail(lambda t: profile_value("R3", t) - 0.5 / t)
    if name == "INT_S3_COMBO":
        combo = lambda t: profile_value("S3", t) - 2 * t * profile_value("R3", t)
        return _finite_part(combo) + _exp_tail(lambda t: combo(t) + 0.25)
    if name == "INT_R4_REG":
        return _finite_part(lambda t: profile_value("R4", t)) \
            + _exp_tail(lambda t: profile_value("R4", t) - 0.5 / t)
    if name == "INT_S4_COMBO":
        combo = lambda t: profile_value(s4, t) - 2 * t * profile_value("R4", t)
        return _finite_part(combo) + _exp_tail(lambda t: combo(t) + 0.25)
    if name == "INT_K2_OUTER":
        combo = lambda t: (profile_value("R2", t) * profile_value("G21_OUTER", t)
                           + 2 * profile_value("G31_OUTER", t)
                           * profile_value("G51_OUTER", t))
        return _finite_part(combo) + _exp_tail(combo)
    if name == "INT_K2_INNER":
        combo = lambda t: (profile_value("R4", t) * profile_value("G21_INNER", t)
                           + 2 * profile_value("G31_INNER", t)
                           * profile_value("G51_INNER", t))
        return _finite_part(combo) + _exp_tail(combo)
    raise ValueError(f"unknown integral {name}")


def regularized_integral(which: RegularizedIntegral,
                         parity: Parity = Parity.NA) -> float:
    """One of the ten universal constants, to absolute accuracy ~1e-9.

    Regularized integrands follow their definitions: indicator
    counter-terms switch on at t = 1 (a forced panel boundary), algebraic
    tails are integrated exactly through the 1/sqrt(t) substitution, and
    exponentially decaying combinations are cut off where they fall below
    1e-17.
    """
    if which in _NEEDS_PARITY:
        if parity is Parity.NA:
            raise ValueError(f"{which.name} requires parity ODD or EVEN")
        return _integral_value(which.name, parity.value)
    return _integral_value(which.name, "")


class Regime(Enum):
    """Slope-growth regimes of the two closed formulas."""

    K_O_N14 = "n14"   # K = o(n^(1/4)): full expansion with 1/n terms
    K_O_N12 = "n12"   # K = o(n^(1/2)): log term and constant only


@dataclass(frozen=True)
class AsymptoticReport:
    """Itemized closed-formula estimate of EN over the whole line."""

    n: int
    k: float
    regime: Regime
    leading_log: float
    constant_term: float
    sqrt_correction: float
    k2_coefficient: float
    c1: float        # parity constant (0 when the regime omits it)
    c1_term: float   # its contribution c1 / (n pi)
    total: float


def theorem_formula(n: int, k: float, regime: Regime) -> AsymptoticReport:
    """Closed asymptotic formula for EN over (-inf, inf).

    The caller certifies the slope-growth intent: nothing in a single
    (n, K) pair can verify K = o(n^(1/4)) at runtime.  The parity constant
    uses the reference values verbatim.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    leading = math.log(2 * n + 1) / math.pi
    const = LOG_CONSTANT / math.pi
    if regime is Regime.K_O_N12:
        total = leading + const
        return AsymptoticReport(n=n, k=k, regime=regime, leading_log=leading,
                                constant_term=const, sqrt_correction=0.0,
                                k2_coefficient=0.0, c1=0.0, c1_term=0.0,
                                total=total)
    root2n = math.sqrt(2.0 * n)
    sqrt_corr = -(math.pi - 2.0 * math.atan(1.0 / (2.0 * root2n))) \
        / (math.pi * root2n)
    k2_term = K2_CONSTANT * k * k / (n * math.pi)
    c1 = C1_ODD if n % 2 else C1_EVEN
    c1_term = c1 / (n * math.pi)
    total = leading + const + sqrt_corr + k2_term + c1_term
    return AsymptoticReport(n=n, k=k, regime=regime, leading_log=leading,
                            constant_term=const, sqrt_correction=sqrt_corr,
                            k2_coefficient=k2_term, c1=c1, c1_term=c1_term,
                            total=total)


@dataclass(frozen=True)
class AuditRow:
    name: str
    computed: float
    reference: float
    abs_diff: float
    status: str  # "pass" | "flag" | "reported"


AUDIT_TOL = 1e-6


def constant_audit() -> list:
    """Recompute the ten integrals and cross-foot them against references.

    Per-integral rows pass at 1e-6 absolute; the two known-bad reference
    rows come out flagged.  The parity sums are compared against the
    reference C1 values and always reported (their residual is a property
    of the source, not of this implementation), alongside the residual of
    the four reference S-values themselves.
    """
    rows = []
    values = {}
    for (name, parity), ref in PUBLISHED.items():
        computed = _integral_value(name, parity)
        values[(name, parity)] = computed
        diff = abs(computed - ref)
        rows.append(AuditRow(
            name=f"{name}({parity})" if parity else name,
            computed=computed, reference=ref, abs_diff=diff,
            status="pass" if diff <= AUDIT_TOL else "flag"))

    r_sum = (values[("INT_R1", "")] + values[("INT_R2", "")]
             + values[("INT_R3_REG", "")] + values[("INT_R4_REG", "")])
    rows.append(AuditRow("R_SUM", r_sum, LOG_CONSTANT,
                         abs(r_sum - LOG_CONSTANT),
                         "pass" if abs(r_sum - LOG_CONSTANT) <= AUDIT_TOL
                         else "flag"))
    k2_sum = values[("INT_K2_OUTER", "")] + values[("INT_K2_INNER", "")]
    rows.append(AuditRow("K2_SUM", k2_sum, K2_CONSTANT,
                         abs(k2_sum - K2_CONSTANT),
                         "pass" if abs(k2_sum - K2_CONSTANT) <= AUDIT_TOL
                         else "flag"))

    for parity, c1 in (("odd", C1_ODD), ("even", C1_EVEN)):
        s_sum = (values[("INT_S1_REG", "")]
                 + values[("INT_S2_REG", parity)]
                 + values[("INT_S3_COMBO", "")]
                 + values[("INT_S4_COMBO", parity)])
        rows.append(AuditRow(f"S_SUM({parity})", s_sum, c1,
                             abs(s_sum - c1), "reported"))
        published_sum = (PUBLISHED[("INT_S1_REG", "")]
                         + PUBLISHED[("INT_S2_REG", parity)]
                         + PUBLISHED[("INT_S3_COMBO", "")]
                         + PUBLISHED[("INT_S4_COMBO", parity)])
        rows.append(AuditRow(f"S_SUM_PUBLISHED({parity})", published_sum, c1,
                             abs(published_sum - c1), "reported"))
    return rows
