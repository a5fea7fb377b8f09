"""Coverage and rate of random (PPP) cellular networks under generic fading.

Analytic pipeline: fading characteristic functions -> aggregate
interference CF (exp(-2 pi lambda beta)) -> Gil-Pelaez inversion to a
conditional CDF -> coverage probability and expected rate.  A seeded
Monte-Carlo network simulator validates every analytic result.
"""

from .coverage import (
    CcdfCurve,
    ChannelSpec,
    contact_distance_pdf,
    coverage_curve,
    coverage_probability,
    coverage_vs_reuse,
    link_success,
)
from .fading import (
    Deterministic,
    FadingModel,
    LognormalShadow,
    PointMassError,
    PowerVariable,
    Product,
    Rayleigh,
    Rician,
)
from .interference import (
    InterferenceContext,
    NetworkConfig,
    beta,
    beta_closed_pathloss,
    beta_closed_rayleigh,
    interference_cdf,
    interference_cf,
)
from .montecarlo import McEstimate, SimulationPlan, deploy, run, sample_sinr
from .numerics import (
    NonConvergenceError,
    QuadratureResult,
    QuadratureSettings,
    gauss_laguerre,
    integrate_finite,
    integrate_semi_infinite_oscillatory,
)
from .rate import RateParams, rate_direct, rate_from_ccdf, rate_vs_gamma_min

__version__ = "0.1.0"

__all__ = [
    "CcdfCurve", "ChannelSpec", "contact_distance_pdf", "coverage_curve",
    "coverage_probability", "coverage_vs_reuse", "link_success",
    "Deterministic", "FadingModel", "LognormalShadow", "PointMassError",
    "PowerVariable", "Product", "Rayleigh", "Rician",
    "InterferenceContext", "NetworkConfig", "beta", "beta_closed_pathloss",
    "beta_closed_rayleigh", "interference_cdf", "interference_cf",
    "McEstimate", "SimulationPlan", "deploy", "run", "sample_sinr",
    "NonConvergenceError", "QuadratureResult", "QuadratureSettings",
    "gauss_laguerre", "integrate_finite", "integrate_semi_infinite_oscillatory",
    "RateParams", "rate_direct", "rate_from_ccdf", "rate_vs_gamma_min",
    "__version__",
]
