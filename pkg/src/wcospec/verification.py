"""Numerical corroboration of spectral claims.

Approximate eigenfunctions follow the telescoping construction

    f_k = sum_{j < n_k} lambda^(k-j-1) psi_(j) * (g o phi_(j-k)),
    (C - lambda) f_k = lambda^(k-n_k) psi_(n_k) (g o phi_(n_k-k)) - lambda^k (g o phi_(-k)),

with ``g`` a boundary peak polynomial. Everything runs in the rotation
model on Taylor coefficients, where ``C`` is lower triangular, so
truncation to degree ``n`` commutes with ``C - lambda``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .bergman import AnalyticVector, BergmanParams, DiskQuadrature, coefficient_norm, norm
from .dynamics import WeightCocycle, birkhoff_sums_grid
from .exceptions import InvalidInputError

__all__ = [
    "ResidualRecord",
    "PseudospectrumField",
    "TelescopeCheck",
    "approx_eigenfunction",
    "phase_average_error",
    "peak_polynomial",
    "residual_scan",
    "pseudospectrum",
    "polar_grid",
    "annulus_mass_check",
    "lower_bound_sample",
]

LOGGER = logging.getLogger(__name__)

IDENTITY_TOL = 1e-8
TINY_NORM = 1e-300


def _poly_degree(c: np.ndarray, tol: float = 0.0) -> int:
    nz = np.flatnonzero(np.abs(c) > tol * max(np.abs(c).max(), 1e-300))
    return int(nz[-1]) if nz.size else 0


def _conv(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    if a.size * b.size > 1 << 20:
        size = 1 << int(np.ceil(np.log2(a.size + b.size)))
        out = np.fft.ifft(np.fft.fft(a, size) * np.fft.fft(b, size))
    else:
        out = np.convolve(a, b)
    res = np.zeros(n + 1, dtype=complex)
    k = min(n + 1, out.size)
    res[:k] = out[:k]
    return res


class _RotationModel:
    """Taylor-side data for ``C_{psi, eta z}`` truncated at degree ``n``."""

    def __init__(self, cw: WeightCocycle, n: int):
        if cw.map.a != 0:
            raise InvalidInputError("rotation model needed; conjugate the cocycle first")
        self.cw = cw
        self.n = int(n)
        self.eta = cw.map.eta
        self.theta = 2.0 * np.pi * cw.map.angle
        self.psi = np.asarray(cw.weight.taylor_coefficients(self.n), dtype=complex)[: self.n + 1]

    def rotate(self, c: np.ndarray, m: int) -> np.ndarray:
        k = np.arange(c.size)
        # phases reduced mod 2 pi before multiplying by the degree
        ph = (m * self.cw.map.angle) % 1.0
        return c * np.exp(2j * np.pi * ((ph * k) % 1.0))

    def apply(self, f: np.ndarray) -> np.ndarray:
        return _conv(self.psi, self.rotate(f, 1), self.n)

    def cocycles(self, count: int):
        """``psi_(j)`` for ``j = 0..count`` (inclusive)."""
        cur = np.zeros(self.n + 1, dtype=complex)
        cur[0] = 1.0
        out = [cur]
        for j in range(count):
            cur = _conv(cur, self.rotate(self.psi, j), self.n)
            out.append(cur)
        return out


@dataclass(frozen=True, eq=False)
class TelescopeCheck:
    f: AnalyticVector
    lhs: np.ndarray
    rhs: np.ndarray
    relative_error: float
    scale_log: float = 0.0


def _lambda_powers(lam: complex, exps: np.ndarray):
    """``lam**exps`` with a common rescaling when the range over/underflows."""
    logs = exps * np.log(complex(lam))
    shift = 0.0
    if np.max(logs.real) > 600 or np.min(logs.real) < -600:
        shift = float(np.max(logs.real))
        LOGGER.info("rescaling lambda powers by exp(-%.3g)", shift)
    return np.exp(logs - shift), shift


def _terms(model: _RotationModel, g: np.ndarray, k: int, n_k: int, cocycles=None):
    if cocycles is None:
        cocycles = model.cocycles(n_k)
    return cocycles, [_conv(cocycles[j], model.rotate(g, j - k), model.n) for j in range(n_k)]


def _norm_coeffs(c: np.ndarray, params: BergmanParams) -> float:
    if params.p == 2:
        return coefficient_norm(AnalyticVector(c), params.alpha)
    f = AnalyticVector(c[: _poly_degree(c, 1e-16) + 1])
    if f.degree > 1024:
        raise InvalidInputError("p != 2 norms are limited to degree 1024 (quadrature cost)")
    return norm(f, params, check=False)


def approx_eigenfunction(
    cw: WeightCocycle,
    lam: complex,
    k: int,
    n_k: int,
    g: AnalyticVector,
    n_out: int | None = None,
    params: BergmanParams = BergmanParams(),
    check: bool = True,
    return_check: bool = False,
):
    """Truncated Taylor vector of the approximate eigenfunction ``f_k``.

    Parameters
    ----------
    cw : WeightCocycle
        Rotation-model cocycle (``map.a == 0``).
    lam : complex
        Nonzero spectral parameter.
    k, n_k : int
        Construction indices, ``n_k > k >= 1``.
    g : AnalyticVector
        Localizing polynomial.
    n_out : int, optional
        Truncation degree; defaults to ``deg g + n_k * deg psi`` for
        polynomial weights and ``deg g + 2 n_k + 64`` otherwise.
    check : bool
        Verify the telescoping identity to 1e-8 relative.

    Returns
    -------
    AnalyticVector, or TelescopeCheck when ``return_check`` is set.
    """
    lam = complex(lam)
    if lam == 0:
        raise InvalidInputError("lambda must be nonzero")
    if not (n_k > k >= 1):
        raise InvalidInputError(f"need n_k > k >= 1, got k={k}, n_k={n_k}")
    n_out = _default_degree(cw, g, n_k) if n_out is None else int(n_out)
    model = _RotationModel(cw, n_out)
    gc = g.padded(n_out).coeffs
    cocycles, terms = _terms(model, gc, k, n_k)
    pw, shift = _lambda_powers(lam, k - np.arange(n_k) - 1.0)
    f = np.tensordot(pw, np.array(terms), axes=1)
    if not np.all(np.isfinite(f)):
        raise FloatingPointError("non-finite coefficients in f_k after rescaling")
    if not (check or return_check):
        return AnalyticVector(f)
    lhs = model.apply(f) - lam * f
    p2 = np.exp(np.array([k - n_k, k], dtype=float) * np.log(lam) - shift)
    rhs = p2[0] * _conv(cocycles[n_k], model.rotate(gc, n_k - k), n_out) - p2[1] * model.rotate(gc, -k)
    fn = _norm_coeffs(f, params)
    err = _norm_coeffs(lhs - rhs, params) / max(fn, TINY_NORM)
    if check and err > IDENTITY_TOL:
        raise ArithmeticError(f"telescoping identity violated: relative error {err:.3g}")
    out = AnalyticVector(f)
    return TelescopeCheck(out, lhs, rhs, err, shift) if return_check else out


def _default_degree(cw, g: AnalyticVector, n_k: int) -> int:
    probe = np.asarray(cw.weight.taylor_coefficients(64), dtype=complex)
    d = _poly_degree(probe, 1e-14)
    if d < 64:
        return g.degree + n_k * d
    return g.degree + 2 * n_k + 64


def phase_average_error(
    cw: WeightCocycle, lam: complex, k: int, n_k: int, g: AnalyticVector, params: BergmanParams = BergmanParams()
) -> float:
    """Relative error of ``sum_s lam_s f_(k,s) = n_k psi_(k) g`` with ``lam_s = lam e^(2 pi i s / n_k)``."""
    n_out = _default_degree(cw, g, n_k)
    model = _RotationModel(cw, n_out)
    gc = g.padded(n_out).coeffs
    cocycles, terms = _terms(model, gc, k, n_k)
    terms = np.array(terms)
    total = np.zeros(n_out + 1, dtype=complex)
    for s in range(1, n_k + 1):
        ls = complex(lam) * np.exp(2j * np.pi * s / n_k)
        pw = ls ** (k - np.arange(n_k) - 1.0)
        total += ls * np.tensordot(pw, terms, axes=1)
    target = n_k * _conv(cocycles[k], gc, n_out)
    return _norm_coeffs(total - target, params) / max(_norm_coeffs(target, params), TINY_NORM)


def peak_polynomial(zeta: complex, power: int) -> AnalyticVector:
    """``((1 + conj(zeta) z) / 2) ** power`` for unimodular ``zeta``."""
    i = np.arange(power + 1)
    logc = gammaln(power + 1) - gammaln(i + 1) - gammaln(power - i + 1) - power * np.log(2.0)
    return AnalyticVector(np.exp(logc) * np.conj(zeta) ** i)


@dataclass(frozen=True)
class ResidualRecord:
    lam: complex
    k: int
    n_k: int
    residual: float
    peak: complex
    n_peak: int
    status: str = "ok"

    def to_dict(self) -> dict:
        return {
            "re": self.lam.real,
            "im": self.lam.imag,
            "k": self.k,
            "n_k": self.n_k,
            "residual": self.residual,
            "peak": [self.peak.real, self.peak.imag],
            "n_peak": self.n_peak,
            "status": self.status,
        }


def _peak_point(cw: WeightCocycle, k: int) -> complex:
    g = cw.weight.outer_log_modulus.finite_surrogate()
    s = birkhoff_sums_grid(g, cw.map.angle, k)
    return complex(np.exp(1j * g.theta[int(np.argmax(s))]))


def residual_scan(
    cw: WeightCocycle,
    params: BergmanParams = BergmanParams(),
    radii=(1.0,),
    ks=(8, 16, 32, 64),
    n_k=lambda k: 2 * k,
    n_peak=lambda k: 4 * k * k,
    phases: int = 16,
) -> list:
    """Best residual ``||(C - lambda) f_k|| / ||f_k||`` over ``phases`` phases of each radius.

    ``n_k`` and ``n_peak`` map ``k`` to the construction length and the
    peak power.
    """
    cw = cw.conjugated()
    cw.map.require_infinite_order()
    records = []
    for k in ks:
        k = int(k)
        nk = int(n_k(k))
        npk = int(n_peak(k))
        zeta = _peak_point(cw, k)
        g = peak_polynomial(zeta, npk)
        n_out = _default_degree(cw, g, nk)
        model = _RotationModel(cw, n_out)
        gc = g.padded(n_out).coeffs
        cocycles, terms = _terms(model, gc, k, nk)
        terms = np.array(terms)
        c_terms = np.array([model.apply(t) for t in terms])
        for R in radii:
            best, best_lam, status = np.inf, complex(R), "ok"
            for s in range(phases):
                lam = R * np.exp(2j * np.pi * s / phases)
                pw, _ = _lambda_powers(lam, k - np.arange(nk) - 1.0)
                f = np.tensordot(pw, terms, axes=1)
                fn = _norm_coeffs(f, params)
                if not fn > TINY_NORM:
                    status = "construction_degenerate"
                    continue
                res = _norm_coeffs(np.tensordot(pw, c_terms, axes=1) - lam * f, params) / fn
                if res < best:
                    best, best_lam = res, lam
            records.append(ResidualRecord(complex(best_lam), k, nk, float(best), zeta, npk, status))
    return records


@dataclass(frozen=True, eq=False)
class PseudospectrumField:
    lam: np.ndarray
    sigma_min: np.ndarray
    diagonal: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def rows(self):
        for l, v in zip(self.lam.ravel(), self.sigma_min.ravel()):
            yield (float(l.real), float(l.imag), float(v))


def polar_grid(r_max: float, n_radii: int = 48, n_angles: int = 64) -> np.ndarray:
    r = np.linspace(0.0, r_max, n_radii)
    t = 2.0 * np.pi * np.arange(n_angles) / n_angles
    return r[:, None] * np.exp(1j * t)[None, :]


def _smin(M, lam):
    return float(np.linalg.svd(M - lam * np.eye(M.shape[0]), compute_uv=False)[-1])


def pseudospectrum(M: np.ndarray, lam, threads: int = 1) -> PseudospectrumField:
    """Smallest singular value of ``M - lambda I`` at each ``lambda``."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError("square matrix expected")
    if M.shape[0] > 513:
        raise InvalidInputError("truncation order above 513")
    lam = np.asarray(lam, dtype=complex)
    flat = lam.ravel()
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            vals = list(ex.map(lambda l: _smin(M, l), flat))
    else:
        vals = [_smin(M, l) for l in flat]
    return PseudospectrumField(lam, np.array(vals).reshape(lam.shape), np.diag(M).copy())


def annulus_mass_check(f, R: float, params: BergmanParams = BergmanParams(), quad: DiskQuadrature | None = None):
    """Check ``I_2 >= C/(1+C) ||f||^p`` with ``C = (1 - R'^2)^alpha (R' - R)``, ``R' = (R+1)/2``.

    Returns
    -------
    ratio : float
        ``I_2 (1 + C) / (C ||f||^p)``.
    passed : bool
        ``ratio >= 1 - 1e-6``.
    """
    if not 0 < R < 1:
        raise InvalidInputError("R must lie in (0, 1)")
    if quad is None:
        deg = f.degree if isinstance(f, AnalyticVector) else 64
        quad = DiskQuadrature.for_degree(deg, params.alpha, params.p)
    i1, i2 = quad.split_masses(f, R, params.p)
    total = i1 + i2
    if not total > 0:
        raise InvalidInputError("f must be nonzero")
    rp = 0.5 * (R + 1.0)
    C = (1.0 - rp * rp) ** params.alpha * (rp - R)
    ratio = i2 * (1.0 + C) / (C * total)
    return float(ratio), bool(ratio >= 1.0 - 1e-6)


def lower_bound_sample(
    cw: WeightCocycle,
    lam: complex,
    params: BergmanParams = BergmanParams(),
    trials: int = 200,
    degree: int = 64,
    seed: int = 0,
) -> float:
    """Minimum of ``||(C - lambda) f|| / ||f||`` over random Gaussian polynomials.

    A sampled witness only; values ``>= 1e-2`` are reported as consistent
    with ``C - lambda`` being bounded below.
    """
    cw = cw.conjugated()
    rng = np.random.default_rng(seed)
    probe = np.asarray(cw.weight.taylor_coefficients(64), dtype=complex)
    d = _poly_degree(probe, 1e-14)
    n_out = degree + (d if d < 64 else 64)
    model = _RotationModel(cw, n_out)
    best = np.inf
    for _ in range(trials):
        c = np.zeros(n_out + 1, dtype=complex)
        c[: degree + 1] = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        r = model.apply(c) - complex(lam) * c
        best = min(best, _norm_coeffs(r, params) / _norm_coeffs(c, params))
    return float(best)
