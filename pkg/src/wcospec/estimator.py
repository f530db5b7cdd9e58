"""Estimator-style front end around :func:`wcospec.classifier.classify`."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .bergman import BergmanParams
from .classifier import MERGE_TOL, classify
from .dynamics import EllipticAutomorphism, WeightCocycle
from .exceptions import InvalidInputError
from .hinf import HInfFunction, MobiusComposite, factor
from .radius import DEFAULT_SCHEDULE

__all__ = ["SpectrumEstimator", "check_weight", "check_map"]


def check_weight(weight, grid_size: int = 4096):
    """Accept an H^inf weight object or ascending polynomial coefficients."""
    if isinstance(weight, (HInfFunction, MobiusComposite)):
        return weight
    arr = np.asarray(weight)
    if arr.ndim == 1 and arr.size >= 1 and np.issubdtype(arr.dtype, np.number):
        return factor(arr.astype(complex), grid_size)
    raise InvalidInputError(f"cannot interpret {type(weight).__name__} as a weight")


def check_map(phi):
    if phi is None:
        return EllipticAutomorphism.rotation()
    if isinstance(phi, EllipticAutomorphism):
        return phi
    if isinstance(phi, (int, float, np.floating)):
        return EllipticAutomorphism.rotation(float(phi))
    raise InvalidInputError(f"cannot interpret {type(phi).__name__} as an elliptic map")


class SpectrumEstimator(BaseEstimator):
    """Classify the spectrum of ``C_{psi, phi}`` on ``A^p_alpha``.

    Parameters
    ----------
    p, alpha : float
        Bergman space exponent and weight.
    schedule : tuple of int
        Orbit lengths for the ergodic radius estimates.
    grid_size : int or None
        Resample boundary data to this grid before estimating.
    merge_tol : float
        Relative tolerance below which an annulus is reported as a circle.

    Attributes
    ----------
    report_ : SpectrumReport
    rho_, r_ : float
        Outer and inner radii (``nan`` where undefined).
    case_ : str
    """

    def __init__(self, p=2.0, alpha=0.0, schedule=DEFAULT_SCHEDULE, grid_size=None, merge_tol=MERGE_TOL):
        self.p = p
        self.alpha = alpha
        self.schedule = schedule
        self.grid_size = grid_size
        self.merge_tol = merge_tol

    def fit(self, weight, phi=None):
        params = BergmanParams(float(self.p), float(self.alpha))
        cw = WeightCocycle(check_weight(weight), check_map(phi))
        rep = classify(cw, params, tuple(self.schedule), self.grid_size, self.merge_tol)
        self.report_ = rep
        self.case_ = rep.case
        se = rep.sigma_e
        if se is None:
            self.rho_ = self.r_ = float("nan")
        else:
            ring = se.superset_of if se.kind == "partial" else se
            self.rho_ = float(ring.outer)
            self.r_ = 0.0 if ring.kind in ("disk", "point") else float(ring.inner)
        return self

    def predict(self, lam):
        """For each ``lambda``: 1 if it lies in the reported ``sigma_e``, else 0.

        Partial (open-case) regions count only their certified part.
        """
        check_is_fitted(self, "report_")
        se = self.report_.sigma_e
        if se is None:
            raise InvalidInputError("no spectrum report for a finite-order map")
        mod = np.abs(np.asarray(lam, dtype=complex))
        return np.array([int(se.contains_radius(float(m))) for m in mod.ravel()]).reshape(mod.shape)

    def transform(self, lam):
        """Signed distance of ``|lambda|`` to the reported ``sigma_e`` (negative inside)."""
        check_is_fitted(self, "report_")
        se = self.report_.sigma_e
        if se is None:
            raise InvalidInputError("no spectrum report for a finite-order map")
        if se.kind == "partial":
            se = se.superset_of
        mod = np.abs(np.asarray(lam, dtype=complex))
        lo = 0.0 if se.kind in ("disk", "point") else se.inner
        hi = se.outer
        return np.maximum(lo - mod, mod - hi)
