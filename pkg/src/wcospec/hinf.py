"""Bounded analytic functions on the unit disk in factored form.

A function is stored as ``c * B * S * v`` where ``B`` is a finite Blaschke
product, ``S`` a singular inner function with finitely many point masses on
the circle, ``v`` an outer function known through its boundary
log-modulus sampled on a uniform grid, and ``c`` a unimodular constant.

The outer part is built by analytic completion of the Fourier series of the
boundary data,

    log v(z) = g_0 + 2 * sum_{k>=1} g_k z^k,

so that ``log|v|`` is the Poisson extension of the samples and
``|v(0)| = exp(mean(samples))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .exceptions import (
    EvaluationNearBoundaryError,
    InvalidInputError,
    NotInvertibleError,
)

__all__ = [
    "LOG_FLOOR",
    "LOG_CEIL",
    "BLASCHKE_EPS",
    "EVAL_EPS",
    "BoundaryLogModulus",
    "HInfFunction",
    "MobiusComposite",
    "outer_from_log_modulus",
    "factor",
    "singular_inner",
    "blaschke_product",
    "reciprocal",
    "compose_mobius",
    "mobius_involution",
    "power_series_exp",
]

LOG_FLOOR = -700.0
LOG_CEIL = 700.0
BLASCHKE_EPS = 1e-12
EVAL_EPS = 1e-9


def mobius_involution(a: complex, z):
    """The automorphism ``(a - z) / (1 - conj(a) z)`` exchanging 0 and a."""
    z = np.asarray(z, dtype=complex)
    return (a - z) / (1.0 - np.conj(a) * z)


def _is_power_of_two(m: int) -> bool:
    return m > 0 and (m & (m - 1)) == 0


@dataclass(frozen=True, eq=False)
class BoundaryLogModulus:
    """Samples of a real boundary function on the grid ``2*pi*j/M``."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float).ravel()
        m = s.size
        if not _is_power_of_two(m) or m < 16:
            raise InvalidInputError(f"grid size must be a power of two >= 16, got {m}")
        if not np.all(np.isfinite(s)):
            raise InvalidInputError("boundary log-modulus samples must be finite")
        s = np.clip(s, LOG_FLOOR, LOG_CEIL)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def grid_size(self) -> int:
        return self.samples.size

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size

    @property
    def at_floor(self) -> bool:
        return bool(np.any(self.samples <= LOG_FLOOR))

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def finite_surrogate(self) -> "BoundaryLogModulus":
        """Replace floor samples by a cell-average value of a simple zero.

        For ``log|theta|`` sampled with spacing ``h`` the cell average around
        the zero is ``log h - log 2 - 1``, i.e. the neighbouring sample minus
        ``1 + log 2``. Keeps Birkhoff sums from being swamped by the clamp.
        """
        s = self.samples
        floor = s <= LOG_FLOOR
        if not floor.any() or floor.all():
            return self
        out = s.copy()
        finite = np.where(floor, np.inf, s)
        idx = np.flatnonzero(floor)
        m = s.size
        for i in idx:
            k = 1
            while not np.isfinite(min(finite[(i - k) % m], finite[(i + k) % m])) and k < m:
                k += 1
            out[i] = min(finite[(i - k) % m], finite[(i + k) % m]) - 1.0 - np.log(2.0)
        return BoundaryLogModulus(out)

    def at(self, theta):
        """Periodic linear interpolation; exact at grid points."""
        m = self.grid_size
        x = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi) * (m / (2.0 * np.pi))
        i0 = np.floor(x).astype(np.int64) % m
        frac = x - np.floor(x)
        i1 = (i0 + 1) % m
        s = self.samples
        return (1.0 - frac) * s[i0] + frac * s[i1]

    def resample(self, m: int) -> "BoundaryLogModulus":
        if m == self.grid_size:
            return self
        return BoundaryLogModulus(self.at(2.0 * np.pi * np.arange(m) / m))

    def __neg__(self) -> "BoundaryLogModulus":
        return BoundaryLogModulus(-self.samples)

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray], m: int) -> "BoundaryLogModulus":
        theta = 2.0 * np.pi * np.arange(m) / m
        with np.errstate(divide="ignore"):
            vals = np.asarray(func(theta), dtype=float)
        vals = np.where(np.isneginf(vals), LOG_FLOOR, vals)
        return cls(vals)

    @classmethod
    def indicator(cls, mask, height: float = 1.0) -> "BoundaryLogModulus":
        """Log-modulus ``height`` on the grid points where ``mask`` is true, else 0."""
        return cls(np.where(np.asarray(mask, dtype=bool), float(height), 0.0))


def _analytic_log_coeffs(g: BoundaryLogModulus) -> np.ndarray:
    m = g.grid_size
    gh = np.fft.fft(g.samples) / m
    c = gh[: m // 2 + 1].copy()
    c[1 : m // 2] *= 2.0
    c[0] = c[0].real
    # the Nyquist term enters with weight one so grid values are reproduced exactly
    c[m // 2] = c[m // 2].real
    return c


def power_series_exp(a: np.ndarray) -> np.ndarray:
    """Taylor coefficients of ``exp(sum a_k z^k)`` truncated to ``len(a)`` terms."""
    a = np.asarray(a, dtype=complex)
    n = a.size
    b = np.zeros(n, dtype=complex)
    b[0] = np.exp(a[0])
    ka = np.arange(n) * a
    for j in range(1, n):
        b[j] = np.dot(ka[1 : j + 1], b[j - 1 :: -1][:j]) / j
    return b


def _blaschke_series(r: complex, n: int) -> np.ndarray:
    c = np.zeros(n, dtype=complex)
    c[0] = -r
    if n > 1:
        c[1:] = (1.0 - abs(r) ** 2) * np.conj(r) ** np.arange(n - 1)
    return c


def blaschke_product(zeros: Sequence[tuple[complex, int]], z):
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for r, mult in zeros:
        out = out * ((z - r) / (1.0 - np.conj(r) * z)) ** mult
    return out


def singular_inner(atoms: Sequence[tuple[float, float]], z):
    z = np.asarray(z, dtype=complex)
    expo = np.zeros_like(z)
    for theta, mass in atoms:
        zeta = np.exp(1j * theta)
        expo = expo - mass * (zeta + z) / (zeta - z)
    return np.exp(expo)


def _check_disk(z, eps=EVAL_EPS):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 - eps):
        raise EvaluationNearBoundaryError(
            f"|z| must be <= 1 - {eps:g}; use boundary_log_modulus on the circle"
        )
    return z


@dataclass(frozen=True, eq=False)
class HInfFunction:
    """Bounded analytic function ``constant * B * S * v``.

    Parameters
    ----------
    blaschke : sequence of (zero, multiplicity)
        Zeros strictly inside the disk.
    singular : sequence of (angle, mass)
        Point masses of the singular inner factor.
    outer_log_modulus : BoundaryLogModulus
        Boundary values of ``log|v|``.
    constant : complex
        Unimodular constant.
    log_taylor : ndarray, optional
        Taylor coefficients of ``log v``. Computed from the samples when
        omitted; supplied explicitly when an exact expansion is known.
    boundary_continuous : bool
        Declares ``|v|`` continuous on the closed disk (e.g. polynomials),
        which makes ``|v(a)|`` the exact spectral radius.
    """

    blaschke: tuple = ()
    singular: tuple = ()
    outer_log_modulus: BoundaryLogModulus = None
    constant: complex = 1.0 + 0j
    log_taylor: np.ndarray = field(default=None, repr=False)
    boundary_continuous: bool = False

    def __post_init__(self):
        zeros = []
        for r, mult in self.blaschke:
            r = complex(r)
            mult = int(mult)
            if mult < 1:
                raise InvalidInputError("Blaschke multiplicities must be positive")
            if abs(r) >= 1.0 - BLASCHKE_EPS:
                raise InvalidInputError(f"Blaschke zero {r} is not inside the disk")
            zeros.append((r, mult))
        atoms = []
        for theta, mass in self.singular:
            if not mass > 0:
                raise InvalidInputError("singular masses must be positive")
            atoms.append((float(np.mod(theta, 2 * np.pi)), float(mass)))
        angles = [t for t, _ in atoms]
        if len(set(angles)) != len(angles):
            raise InvalidInputError("singular atom angles must be distinct")
        if self.outer_log_modulus is None:
            raise InvalidInputError("outer_log_modulus is required")
        c = complex(self.constant)
        if abs(abs(c) - 1.0) > 1e-14:
            c = c / abs(c) if abs(abs(c) - 1.0) < 1e-8 else None
            if c is None:
                raise InvalidInputError("constant must be unimodular")
        object.__setattr__(self, "blaschke", tuple(zeros))
        object.__setattr__(self, "singular", tuple(atoms))
        object.__setattr__(self, "constant", c)
        lt = self.log_taylor
        if lt is None:
            lt = _analytic_log_coeffs(self.outer_log_modulus)
        lt = np.array(lt, dtype=complex)
        lt.setflags(write=False)
        object.__setattr__(self, "log_taylor", lt)
        object.__setattr__(self, "_taylor_cache", None)

    # -- classification flags -------------------------------------------
    @property
    def zeros_in_disk(self) -> bool:
        return len(self.blaschke) > 0

    @property
    def zeros_on_shilov(self) -> bool:
        return self.outer_log_modulus.at_floor

    @property
    def singular_present(self) -> bool:
        return len(self.singular) > 0

    @property
    def ess_inf_boundary_modulus(self) -> float:
        if self.zeros_on_shilov:
            return 0.0
        return float(np.exp(self.outer_log_modulus.samples.min()))

    @property
    def sup_boundary_modulus(self) -> float:
        return float(np.exp(self.outer_log_modulus.samples.max()))

    @property
    def is_outer(self) -> bool:
        return not (self.zeros_in_disk or self.singular_present)

    # -- evaluation -------------------------------------------------------
    def log_outer(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.log_taylor)

    def outer_eval(self, z):
        """Value of the outer factor ``v`` (without the unimodular constant)."""
        return np.exp(self.log_outer(_check_disk(z)))

    def outer_modulus_at(self, z) -> float:
        return float(np.exp(self.log_outer(_check_disk(z)).real))

    @property
    def outer_modulus_at_zero(self) -> float:
        return float(np.exp(self.log_taylor[0].real))

    def eval(self, z):
        z = _check_disk(z)
        val = self.constant * np.exp(self.log_outer(z))
        if self.blaschke:
            val = val * blaschke_product(self.blaschke, z)
        if self.singular:
            val = val * singular_inner(self.singular, z)
        return val

    __call__ = eval

    def boundary_log_modulus(self, theta):
        return self.outer_log_modulus.at(theta)

    def taylor_coefficients(self, n: int) -> np.ndarray:
        """First ``n + 1`` Taylor coefficients at the origin."""
        cached = self._taylor_cache
        if cached is not None and cached.size > n:
            return cached[: n + 1].copy()
        n1 = n + 1
        logc = np.zeros(n1, dtype=complex)
        k = min(n1, self.log_taylor.size)
        logc[:k] = self.log_taylor[:k]
        for theta, mass in self.singular:
            zbar = np.exp(-1j * theta)
            logc[0] -= mass
            if n1 > 1:
                logc[1:] -= 2.0 * mass * zbar ** np.arange(1, n1)
        out = self.constant * power_series_exp(logc)
        for r, mult in self.blaschke:
            b = _blaschke_series(r, n1)
            for _ in range(mult):
                out = np.convolve(out, b)[:n1]
        out.setflags(write=False)
        object.__setattr__(self, "_taylor_cache", out)
        return out.copy()

    # -- derived functions --------------------------------------------------
    def outer_part(self) -> "HInfFunction":
        return HInfFunction(
            outer_log_modulus=self.outer_log_modulus,
            log_taylor=self.log_taylor,
            boundary_continuous=self.boundary_continuous,
        )

    def scaled(self, c: float) -> "HInfFunction":
        """The function ``c * self`` for ``c > 0``."""
        if not c > 0:
            raise InvalidInputError("scale must be positive")
        lt = np.array(self.log_taylor)
        lt[0] += np.log(c)
        return HInfFunction(
            self.blaschke,
            self.singular,
            BoundaryLogModulus(self.outer_log_modulus.samples + np.log(c)),
            self.constant,
            lt,
            self.boundary_continuous,
        )

    def reciprocal(self) -> "HInfFunction":
        return reciprocal(self)

    def compose_mobius(self, a: complex) -> "MobiusComposite":
        return compose_mobius(self, a)


def outer_from_log_modulus(g) -> HInfFunction:
    """Outer function whose boundary log-modulus is ``g``."""
    if not isinstance(g, BoundaryLogModulus):
        g = BoundaryLogModulus(np.asarray(g, dtype=float))
    return HInfFunction(outer_log_modulus=g)


def _polyval_asc(coeffs, z):
    return np.polynomial.polynomial.polyval(z, coeffs)


def factor(coeffs: Iterable[complex], grid_size: int = 4096) -> HInfFunction:
    """Inner-outer factorization of a polynomial given in ascending order.

    Roots inside the disk become Blaschke zeros. Roots on (or within
    ``BLASCHKE_EPS`` of) the circle stay in the outer part and the nearest
    grid sample is pinned to ``LOG_FLOOR``. The Taylor series of ``log v`` is
    expanded exactly from the roots rather than from the sampled data.
    """
    c = np.trim_zeros(np.asarray(list(coeffs), dtype=complex), "b")
    if c.size == 0:
        raise InvalidInputError("zero polynomial has no factorization")
    m = grid_size
    n1 = m // 2 + 1
    lead = c[-1]
    roots = np.roots(c[::-1]) if c.size > 1 else np.array([], dtype=complex)

    inner: dict[complex, int] = {}
    logc = np.zeros(n1, dtype=complex)
    logc[0] = np.log(lead)
    k = np.arange(1, n1)
    boundary_angles = []
    for r in roots:
        ar = abs(r)
        if ar < 1.0 - BLASCHKE_EPS:
            # outer factor (1 - conj(r) z)
            logc[1:] -= np.conj(r) ** k / k
            inner[complex(r)] = inner.get(complex(r), 0) + 1
        else:
            if ar <= 1.0 + BLASCHKE_EPS:
                r = r / ar
                boundary_angles.append(np.angle(r))
            # outer factor (z - r) = -r (1 - z/r)
            logc[0] += np.log(-r)
            logc[1:] -= (1.0 / r) ** k / k

    theta = 2.0 * np.pi * np.arange(m) / m
    with np.errstate(divide="ignore"):
        samples = np.log(np.abs(_polyval_asc(c, np.exp(1j * theta))))
    samples = np.where(np.isfinite(samples), samples, LOG_FLOOR)
    for ang in boundary_angles:
        samples[int(np.rint(np.mod(ang, 2 * np.pi) * m / (2 * np.pi))) % m] = LOG_FLOOR

    const = np.exp(1j * logc[0].imag)
    logc[0] = logc[0].real
    return HInfFunction(
        blaschke=tuple(inner.items()),
        outer_log_modulus=BoundaryLogModulus(samples),
        constant=const,
        log_taylor=logc,
        boundary_continuous=True,
    )


def reciprocal(h) -> HInfFunction:
    """Bounded analytic reciprocal of an invertible outer function."""
    if h.zeros_in_disk:
        raise NotInvertibleError("function has zeros in the disk", "zeros_in_disk")
    if h.singular_present:
        raise NotInvertibleError("function has a singular inner factor", "singular_inner")
    if h.zeros_on_shilov:
        raise NotInvertibleError("boundary modulus has essential infimum 0", "zeros_on_shilov")
    if isinstance(h, MobiusComposite):
        return compose_mobius(reciprocal(h.base), h.a)
    return HInfFunction(
        outer_log_modulus=-h.outer_log_modulus,
        constant=np.conj(h.constant),
        log_taylor=-np.asarray(h.log_taylor),
        boundary_continuous=h.boundary_continuous,
    )


@dataclass(frozen=True, eq=False)
class MobiusComposite:
    """The function ``base(phi_a(z))`` with ``phi_a`` the involution at ``a``.

    Zero locations and singular atom angles are mapped; atom masses are not
    recomputed since evaluation goes through ``base``.
    """

    base: object
    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1.0:
            raise InvalidInputError("Mobius parameter must lie in the open disk")
        object.__setattr__(self, "a", a)
        m = self.base.outer_log_modulus.grid_size
        theta = 2.0 * np.pi * np.arange(m) / m
        mapped = np.angle(mobius_involution(a, np.exp(1j * theta)))
        object.__setattr__(
            self, "_log_modulus", BoundaryLogModulus(self.base.boundary_log_modulus(mapped))
        )

    @property
    def blaschke(self):
        return tuple((complex(mobius_involution(self.a, r)), m) for r, m in self.base.blaschke)

    @property
    def singular(self):
        return tuple(
            (float(np.mod(np.angle(mobius_involution(self.a, np.exp(1j * t))), 2 * np.pi)), s)
            for t, s in self.base.singular
        )

    @property
    def outer_log_modulus(self) -> BoundaryLogModulus:
        return self._log_modulus

    zeros_in_disk = property(lambda self: self.base.zeros_in_disk)
    zeros_on_shilov = property(lambda self: self.base.zeros_on_shilov)
    singular_present = property(lambda self: self.base.singular_present)
    is_outer = property(lambda self: self.base.is_outer)
    ess_inf_boundary_modulus = property(lambda self: self.base.ess_inf_boundary_modulus)
    sup_boundary_modulus = property(lambda self: self.base.sup_boundary_modulus)
    boundary_continuous = property(lambda self: self.base.boundary_continuous)

    @property
    def outer_modulus_at_zero(self) -> float:
        return self.base.outer_modulus_at(self.a)

    def outer_modulus_at(self, z) -> float:
        return self.base.outer_modulus_at(mobius_involution(self.a, z))

    def outer_eval(self, z):
        return self.base.outer_eval(mobius_involution(self.a, _check_disk(z)))

    def eval(self, z):
        return self.base.eval(mobius_involution(self.a, _check_disk(z)))

    __call__ = eval

    def boundary_log_modulus(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.base.boundary_log_modulus(np.angle(mobius_involution(self.a, np.exp(1j * theta))))

    def taylor_coefficients(self, n: int, radius: float = 0.9) -> np.ndarray:
        m = max(4 * (n + 1), 256)
        m = 1 << (m - 1).bit_length()
        z = radius * np.exp(2j * np.pi * np.arange(m) / m)
        c = np.fft.fft(self.eval(z)) / m
        return c[: n + 1] / radius ** np.arange(n + 1)

    def outer_part(self):
        return MobiusComposite(self.base.outer_part(), self.a)

    def scaled(self, c: float):
        return MobiusComposite(self.base.scaled(c), self.a)

    def reciprocal(self):
        return reciprocal(self)

    def compose_mobius(self, a: complex):
        return compose_mobius(self, a)


def compose_mobius(h, a: complex) -> MobiusComposite:
    """``h`` composed with the involution exchanging 0 and ``a``."""
    return MobiusComposite(h, a)
