"""Spectra of weighted composition operators with elliptic symbols on weighted Bergman spaces."""

__version__ = "0.1.0"

from .bergman import AnalyticVector, BergmanParams, DiskQuadrature, apply_wco, monomial_norm_sq, norm, wco_matrix
from .classifier import Region, SpectrumReport, ZeroProfile, classify
from .dynamics import (
    GOLDEN,
    EllipticAutomorphism,
    WeightCocycle,
    birkhoff_average,
    birkhoff_extremes,
    classify_and_conjugate,
    classify_mobius,
    cocycle,
    iterate,
)
from .estimator import SpectrumEstimator
from .exceptions import (
    EvaluationNearBoundaryError,
    FiniteOrderError,
    InvalidInputError,
    NonEllipticError,
    NotInvertibleError,
    WcoError,
)
from .hinf import BoundaryLogModulus, HInfFunction, compose_mobius, factor, outer_from_log_modulus, reciprocal
from .radius import boundary_envelopes, r_estimate, rho_estimate
from .verification import (
    annulus_mass_check,
    approx_eigenfunction,
    lower_bound_sample,
    pseudospectrum,
    residual_scan,
)

__all__ = [
    "__version__",
    "AnalyticVector",
    "BergmanParams",
    "BoundaryLogModulus",
    "DiskQuadrature",
    "EllipticAutomorphism",
    "EvaluationNearBoundaryError",
    "FiniteOrderError",
    "GOLDEN",
    "HInfFunction",
    "InvalidInputError",
    "NonEllipticError",
    "NotInvertibleError",
    "Region",
    "SpectrumEstimator",
    "SpectrumReport",
    "WcoError",
    "WeightCocycle",
    "ZeroProfile",
    "annulus_mass_check",
    "apply_wco",
    "approx_eigenfunction",
    "birkhoff_average",
    "birkhoff_extremes",
    "boundary_envelopes",
    "classify",
    "classify_and_conjugate",
    "classify_mobius",
    "cocycle",
    "compose_mobius",
    "factor",
    "iterate",
    "lower_bound_sample",
    "monomial_norm_sq",
    "norm",
    "outer_from_log_modulus",
    "pseudospectrum",
    "r_estimate",
    "reciprocal",
    "residual_scan",
    "rho_estimate",
    "wco_matrix",
]
