"""Weighted Bergman spaces A^p_alpha: norms, operator action, truncations."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz
from scipy.special import gammaln, roots_jacobi

from .dynamics import WeightCocycle, iterate
from .exceptions import InvalidInputError

__all__ = [
    "N_MAX",
    "BergmanParams",
    "AnalyticVector",
    "DiskQuadrature",
    "monomial_norm_sq",
    "norm",
    "coefficient_norm",
    "apply_wco",
    "wco_matrix",
]

LOGGER = logging.getLogger(__name__)

N_MAX = 1 << 16


@dataclass(frozen=True)
class BergmanParams:
    p: float = 2.0
    alpha: float = 0.0

    def __post_init__(self):
        if not self.p >= 1:
            raise InvalidInputError(f"p must be >= 1, got {self.p}")
        if not self.alpha > -1:
            raise InvalidInputError(f"alpha must be > -1, got {self.alpha}")


@dataclass(frozen=True, eq=False)
class AnalyticVector:
    """Taylor coefficients ``coeffs[k]`` of ``z**k`` of a polynomial."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("coefficients must be finite")
        if c.size - 1 > N_MAX:
            raise InvalidInputError(f"degree {c.size - 1} exceeds N_MAX={N_MAX}")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    eval = __call__

    def padded(self, n: int) -> "AnalyticVector":
        c = np.zeros(n + 1, dtype=complex)
        k = min(n + 1, self.coeffs.size)
        c[:k] = self.coeffs[:k]
        return AnalyticVector(c)

    def _binary(self, other, op):
        n = max(self.degree, other.degree)
        return AnalyticVector(op(self.padded(n).coeffs, other.padded(n).coeffs))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        return AnalyticVector(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return AnalyticVector(-self.coeffs)

    def compose_rotation(self, eta: complex) -> "AnalyticVector":
        return AnalyticVector(self.coeffs * eta ** np.arange(self.coeffs.size))

    @classmethod
    def monomial(cls, k: int) -> "AnalyticVector":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = 1.0
        return cls(c)


def monomial_norm_sq(n, alpha: float):
    """``||z^n||^2 = n! Gamma(alpha+2) / Gamma(n+alpha+2)`` in A^2_alpha."""
    n = np.asarray(n, dtype=float)
    return np.exp(gammaln(n + 1) + gammaln(alpha + 2) - gammaln(n + alpha + 2))


@lru_cache(maxsize=64)
def _radial_rule(q: int, alpha: float):
    x, w = roots_jacobi(q, alpha, 0.0)
    t = (x + 1.0) / 2.0
    weights = 0.5 * 2.0 ** (-alpha - 1.0) * w
    return np.sqrt(t), weights


@dataclass(frozen=True, eq=False)
class DiskQuadrature:
    """Product rule: Gauss-Jacobi in ``r**2`` times the uniform angular rule.

    The radial weights integrate ``h(r) (1 - r^2)^alpha r dr`` on [0, 1]
    exactly when ``h`` is a polynomial of degree ``< 2 q`` in ``r**2``.
    """

    alpha: float = 0.0
    q: int = 128
    m: int = 4096

    def __post_init__(self):
        if self.q < 1 or self.m < 1:
            raise InvalidInputError("quadrature orders must be positive")
        r, w = _radial_rule(int(self.q), float(self.alpha))
        if np.any(w <= 0):
            raise InvalidInputError("non-positive quadrature weight")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "radial_weights", w)

    @classmethod
    def for_degree(cls, n: int, alpha: float, p: float = 2.0) -> "DiskQuadrature":
        # |f|^p for p = 2 is a polynomial of degree n in r^2 after angular averaging
        q = max(16, int(np.ceil(p * (n + 1) / 2)) + 8)
        if p != 2:
            # |f|^p is not polynomial in r^2; convergence is only algebraic
            q = max(q, 128)
        m = 1 << max(6, int(np.ceil(np.log2(p * (n + 1) + 2))) + 1)
        return cls(alpha, q, m)

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.m) / self.m

    def integrate(self, values: np.ndarray) -> float:
        """Integral against the normalized measure of values on the (q, m) grid."""
        ang = np.mean(values, axis=1)
        return float(2.0 * (1.0 + self.alpha) * np.dot(self.radial_weights, ang))

    def split_masses(self, f, radius: float, p: float = 2.0) -> tuple[float, float]:
        """Masses of ``|f|^p dA_alpha`` over ``|z| < radius`` and ``radius <= |z| < 1``.

        Each piece gets its own rule in ``t = r**2`` (Gauss-Legendre on
        ``[0, radius**2]``, Gauss-Jacobi on ``[radius**2, 1]``).
        """
        a = self.alpha
        t_split = radius * radius
        xl, wl = np.polynomial.legendre.leggauss(self.q)
        t_in = t_split * (xl + 1.0) / 2.0
        w_in = t_split / 2.0 * wl * (1.0 - t_in) ** a
        xj, wj = roots_jacobi(self.q, a, 0.0)
        s = (xj + 1.0) / 2.0
        t_out = t_split + (1.0 - t_split) * s
        w_out = (1.0 - t_split) ** (a + 1.0) * 2.0 ** (-a - 1.0) * wj
        eith = np.exp(1j * self.theta)[None, :]
        masses = []
        for t, w in ((t_in, w_in), (t_out, w_out)):
            vals = np.abs(np.asarray(f(np.sqrt(t)[:, None] * eith))) ** p
            masses.append(float((1.0 + a) * np.dot(w, vals.mean(axis=1))))
        return masses[0], masses[1]

    def nodes(self) -> np.ndarray:
        return self.radii[:, None] * np.exp(1j * self.theta)[None, :]


def coefficient_norm(f: AnalyticVector, alpha: float) -> float:
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * monomial_norm_sq(np.arange(f.coeffs.size), alpha))))


def norm(f, params: BergmanParams = BergmanParams(), quad: DiskQuadrature | None = None, check: bool = True) -> float:
    """``(integral |f|^p dA_alpha)^(1/p)`` by quadrature.

    For ``p == 2`` and an :class:`AnalyticVector` the coefficient formula is
    evaluated as well and the two must agree to 1e-8 relative.
    """
    if quad is None:
        deg = f.degree if isinstance(f, AnalyticVector) else 64
        quad = DiskQuadrature.for_degree(deg, params.alpha, params.p)
    elif quad.alpha != params.alpha:
        raise InvalidInputError("quadrature alpha does not match space alpha")
    vals = np.abs(np.asarray(f(quad.nodes()))) ** params.p
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite function value on quadrature nodes")
    result = quad.integrate(vals) ** (1.0 / params.p)
    if check and params.p == 2 and isinstance(f, AnalyticVector):
        ref = coefficient_norm(f, params.alpha)
        if abs(result - ref) > 1e-8 * max(ref, 1e-300):
            raise ArithmeticError(f"quadrature norm {result} disagrees with coefficient norm {ref}")
    return result


def _mult_series(psi_c: np.ndarray, f_c: np.ndarray, n_out: int) -> np.ndarray:
    n1 = n_out + 1
    if psi_c.size * f_c.size > 1 << 22:
        size = 1 << int(np.ceil(np.log2(psi_c.size + f_c.size)))
        out = np.fft.ifft(np.fft.fft(psi_c, size) * np.fft.fft(f_c, size))
    else:
        out = np.convolve(psi_c, f_c)
    res = np.zeros(n1, dtype=complex)
    k = min(n1, out.size)
    res[:k] = out[:k]
    return res


def apply_wco(
    cw: WeightCocycle,
    f: AnalyticVector,
    n_out: int | None = None,
    method: str = "auto",
    r0: float = 0.5,
    m_sample: int | None = None,
    return_error: bool = False,
):
    """Taylor coefficients of ``psi * (f o phi)`` through degree ``n_out``.

    ``method="series"`` multiplies Taylor series (rotations only, no
    aliasing). ``method="sample"`` samples on the circle ``|z| = r0``,
    transforms and unscales by ``r0**k``; the geometric aliasing tail
    ``sup|F| * r0**M`` is returned when ``return_error`` is set.
    """
    if n_out is None:
        n_out = f.degree
    if method == "auto":
        method = "series" if cw.map.a == 0 else "sample"
    if method == "series":
        if cw.map.a != 0:
            raise InvalidInputError("series method needs a rotation; conjugate first")
        fc = f.compose_rotation(cw.map.eta).coeffs[: n_out + 1]
        psi_c = cw.weight.taylor_coefficients(n_out)
        out = AnalyticVector(_mult_series(psi_c, fc, n_out))
        return (out, 0.0) if return_error else out
    if m_sample is None:
        m_sample = 1 << max(4, int(np.ceil(np.log2(4 * (n_out + 1)))))
    if n_out > m_sample // 4:
        raise InvalidInputError(f"n_out={n_out} too large for a {m_sample}-point sample grid")
    z = r0 * np.exp(2j * np.pi * np.arange(m_sample) / m_sample)
    vals = np.asarray(cw.weight.eval(z)) * f(iterate(cw.map, 1, z))
    c = np.fft.fft(vals) / m_sample
    out = AnalyticVector(c[: n_out + 1] / r0 ** np.arange(n_out + 1))
    err = float(np.max(np.abs(vals)) * r0 ** (m_sample - n_out))
    LOGGER.debug("apply_wco sample path: aliasing bound %.3g", err)
    return (out, err) if return_error else out


def wco_matrix(psi, eta: complex, n: int, alpha: float) -> np.ndarray:
    """Matrix of ``C_{psi, eta z}`` on ``e_k = z^k / sqrt(m_k)``, ``k <= n``.

    Lower triangular: entry ``(k + j, k) = eta^k psi_j sqrt(m_{k+j} / m_k)``.
    """
    psi_c = np.asarray(psi.taylor_coefficients(n) if hasattr(psi, "taylor_coefficients") else psi, dtype=complex)[: n + 1]
    t = toeplitz(psi_c, np.zeros(n + 1, dtype=complex))
    s = np.sqrt(monomial_norm_sq(np.arange(n + 1), alpha))
    return (s[:, None] * t / s[None, :]) * (eta ** np.arange(n + 1))[None, :]
