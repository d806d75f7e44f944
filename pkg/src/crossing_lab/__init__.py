"""crossing-lab: expected real solutions of Q_n(x) = Kx for random
polynomials whose coefficients are Brownian-motion observations.

Three independent pillars, cross-validated against each other:

* exact quadrature of the crossing density (:mod:`crossing_lab.density`),
* closed asymptotic formulas with their universal constants
  (:mod:`crossing_lab.asymptotics`),
* Monte Carlo with exact integer root counting
  (:mod:`crossing_lab.montecarlo`).
"""

__version__ = "0.1.0"

from .model import (
    CoefficientModel,
    DegenerateMoment,
    MomentBundle,
    moments,
    weight_a,
    weight_b,
)
from .density import (
    DensitySample,
    IntervalCount,
    density_at,
    erf_eval,
    expected_crossings,
)
from .asymptotics import (
    AsymptoticReport,
    AuditRow,
    ExpansionFamily,
    FamilyName,
    Parity,
    Regime,
    RegularizedIntegral,
    constant_audit,
    eval_expansion,
    regularized_integral,
    theorem_formula,
)
from .montecarlo import (
    CountingMode,
    SimulationConfig,
    SimulationReport,
    count_real_roots,
    estimate,
    sample_coefficients,
    trial_rng,
)
from .quadrature import QuadResult, ToleranceNotReached, integrate
from .sturm import ZeroPolynomial, count_distinct_roots

__all__ = [
    "__version__",
    "CoefficientModel", "DegenerateMoment", "MomentBundle", "moments",
    "weight_a", "weight_b",
    "DensitySample", "IntervalCount", "density_at", "erf_eval",
    "expected_crossings",
    "AsymptoticReport", "AuditRow", "ExpansionFamily", "FamilyName",
    "Parity", "Regime", "RegularizedIntegral", "constant_audit",
    "eval_expansion", "regularized_integral", "theorem_formula",
    "CountingMode", "SimulationConfig", "SimulationReport",
    "count_real_roots", "estimate", "sample_coefficients", "trial_rng",
    "QuadResult", "ToleranceNotReached", "integrate",
    "ZeroPolynomial", "count_distinct_roots",
]
