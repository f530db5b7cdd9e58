"""Elliptic disk automorphisms, weight cocycles and Birkhoff averages."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Union

import numpy as np

from .exceptions import FiniteOrderError, InvalidInputError, NonEllipticError
from .hinf import BoundaryLogModulus, mobius_involution

__all__ = [
    "GOLDEN",
    "EllipticAutomorphism",
    "WeightCocycle",
    "CocycleValue",
    "classify_mobius",
    "classify_and_conjugate",
    "iterate",
    "cocycle",
    "birkhoff_average",
    "birkhoff_sums_grid",
    "birkhoff_extremes",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EllipticAutomorphism:
    """``phi = phi_a o (eta * .) o phi_a`` with fixed point ``a``.

    ``rational`` holds ``(p, q)`` in lowest terms when the rotation angle is
    known exactly; otherwise ``angle`` is a float in [0, 1) that is treated
    as irrational.
    """

    a: complex = 0j
    angle: float = GOLDEN
    rational: tuple | None = None

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1.0:
            raise InvalidInputError("fixed point must lie in the open disk")
        object.__setattr__(self, "a", a)
        if self.rational is not None:
            p, q = self.rational
            if int(q) < 1:
                raise InvalidInputError("rational rotation needs q >= 1")
            fr = Fraction(int(p), int(q))
            p, q = fr.numerator % fr.denominator, fr.denominator
            object.__setattr__(self, "rational", (p, q))
            object.__setattr__(self, "angle", p / q)
        else:
            object.__setattr__(self, "angle", float(self.angle) % 1.0)

    @classmethod
    def rotation(cls, angle: float = GOLDEN) -> "EllipticAutomorphism":
        return cls(0j, angle)

    @property
    def eta(self) -> complex:
        if self.rational is not None:
            p, q = self.rational
            # exact values at the quarter turns
            quarter = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}
            if (4 * p) % q == 0:
                return quarter[(4 * p // q) % 4]
        return complex(np.exp(2j * np.pi * self.angle))

    @property
    def order(self) -> float:
        return self.rational[1] if self.rational is not None else math.inf

    @property
    def note(self) -> str:
        if self.rational is None:
            return "numeric angle treated as irrational"
        return f"rational rotation of order {self.rational[1]}"

    @property
    def is_rotation(self) -> bool:
        return self.a == 0

    def conjugate(self) -> "EllipticAutomorphism":
        """The rotation ``tau = phi_a o phi o phi_a``."""
        return EllipticAutomorphism(0j, self.angle, self.rational)

    def inverse(self) -> "EllipticAutomorphism":
        rat = None if self.rational is None else (-self.rational[0], self.rational[1])
        return EllipticAutomorphism(self.a, -self.angle, rat)

    def require_infinite_order(self):
        if self.rational is not None:
            q = self.rational[1]
            raise FiniteOrderError(
                f"map has finite order {q}; C^{q} is multiplication by psi_({q})", q
            )

    def __call__(self, z):
        return iterate(self, 1, z)


class WeightCocycle(NamedTuple):
    """A weight function paired with an elliptic map."""

    weight: object
    map: EllipticAutomorphism

    def conjugated(self) -> "WeightCocycle":
        """Rotation model ``(psi o phi_a, tau)``; unchanged when ``a == 0``."""
        if self.map.a == 0:
            return self
        return WeightCocycle(self.weight.compose_mobius(self.map.a), self.map.conjugate())


def classify_mobius(alpha, beta, gamma, delta) -> EllipticAutomorphism:
    """Classify ``(alpha z + beta) / (gamma z + delta)`` as a disk automorphism.

    Raises
    ------
    NonEllipticError
        If no fixed point lies strictly inside the disk.
    """
    alpha, beta, gamma, delta = (complex(x) for x in (alpha, beta, gamma, delta))
    det = alpha * delta - beta * gamma
    if det == 0:
        raise InvalidInputError("degenerate Mobius map")
    tol = 1e-12
    if abs(gamma) < tol:
        if abs(alpha - delta) < tol and abs(beta) < tol:
            return EllipticAutomorphism(0j, rational=(0, 1))
        fixed = [beta / (delta - alpha)] if abs(alpha - delta) >= tol else []
    else:
        fixed = list(np.roots([gamma, delta - alpha, -beta]))
    inside = [z for z in fixed if abs(z) < 1.0 - tol]
    if len(inside) != 1:
        on = [z for z in fixed if abs(abs(z) - 1.0) <= 1e-9]
        kind = "parabolic" if len(on) == 1 or (len(on) == 2 and abs(on[0] - on[1]) < 1e-6) else "hyperbolic"
        raise NonEllipticError(f"map is {kind}: fixed points {[complex(z) for z in fixed]}", kind)
    a = complex(inside[0])
    eta = det / (gamma * a + delta) ** 2
    eta = eta / abs(eta)
    ell = EllipticAutomorphism(a, (np.angle(eta) / (2 * np.pi)) % 1.0)
    # multiplier check against tau(w)/w
    w = 0.3
    phi = lambda z: (alpha * z + beta) / (gamma * z + delta)
    tau_w = mobius_involution(a, phi(mobius_involution(a, w)))
    if abs(tau_w / w - ell.eta) > 1e-8:
        raise InvalidInputError("map is not an automorphism of the disk")
    return ell


def classify_and_conjugate(spec: dict) -> EllipticAutomorphism:
    """Build an elliptic automorphism from a map descriptor.

    Accepted forms::

        {"fixed_point": [re, im], "eta": {"rational": [p, q]}}
        {"fixed_point": [re, im], "eta": {"angle": t}}
        {"mobius": {"lambda_angle": s, "b": [re, im]}}     # lambda (b - z)/(1 - conj(b) z)
        {"mobius": {"coeffs": [[re, im], ...4]}}            # (a z + b)/(c z + d)
    """
    if "mobius" in spec:
        mob = spec["mobius"]
        if "coeffs" in mob:
            return classify_mobius(*(complex(*c) if isinstance(c, (list, tuple)) else c for c in mob["coeffs"]))
        lam = np.exp(2j * np.pi * float(mob.get("lambda_angle", 0.0)))
        b = complex(*mob.get("b", [0.0, 0.0]))
        return classify_mobius(-lam, lam * b, -np.conj(b), 1.0)
    fp = spec.get("fixed_point", [0.0, 0.0])
    a = complex(*fp) if isinstance(fp, (list, tuple)) else complex(fp)
    eta = spec.get("eta", {"angle": GOLDEN})
    if "rational" in eta:
        return EllipticAutomorphism(a, rational=tuple(eta["rational"]))
    return EllipticAutomorphism(a, float(eta["angle"]))


def iterate(phi: EllipticAutomorphism, n: int, z):
    """``phi_n(z)`` for any integer ``n``."""
    z = np.asarray(z, dtype=complex)
    if n == 0:
        return z
    if phi.rational is not None:
        p, q = phi.rational
        k = (n * p) % q
        rot = EllipticAutomorphism(0j, rational=(k, q)).eta
    else:
        rot = np.exp(2j * np.pi * ((n * phi.angle) % 1.0))
    if phi.a == 0:
        return rot * z
    return mobius_involution(phi.a, rot * mobius_involution(phi.a, z))


class CocycleValue(NamedTuple):
    log_modulus: np.ndarray
    phase: np.ndarray
    zero_hit: np.ndarray


def cocycle(cw: WeightCocycle, n: int, z) -> CocycleValue:
    """``psi_(n)(z) = prod_{j<n} psi(phi_j(z))`` accumulated in log space."""
    if n < 0:
        raise InvalidInputError("cocycle index must be nonnegative")
    z = np.asarray(z, dtype=complex)
    logmod = np.zeros(z.shape)
    arg = np.zeros(z.shape)
    hit = np.zeros(z.shape, dtype=bool)
    w = z
    for j in range(n):
        if j:
            w = iterate(cw.map, 1, w)
        val = np.asarray(cw.weight.eval(w), dtype=complex)
        zero = val == 0
        hit |= zero
        with np.errstate(divide="ignore"):
            logmod = logmod + np.log(np.abs(val))
        arg = arg + np.where(zero, 0.0, np.angle(val))
    return CocycleValue(logmod, np.exp(1j * arg), hit)


Observable = Union[BoundaryLogModulus, Callable[[np.ndarray], np.ndarray]]


def _observe(f: Observable, theta):
    if isinstance(f, BoundaryLogModulus):
        return f.at(theta)
    return np.asarray(f(theta), dtype=float)


def birkhoff_average(f: Observable, t: float, n: int, theta0=0.0):
    """``(1/n) sum_{j<n} f(theta0 + 2 pi t j)``; ``theta0`` may be an array."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    theta0 = np.asarray(theta0, dtype=float)
    # phases reduced mod 1 before scaling keep large j accurate
    offs = 2.0 * np.pi * ((np.arange(n) * float(t)) % 1.0)
    total = np.zeros(theta0.shape)
    for chunk in np.array_split(offs, max(1, n // 8192)):
        total = total + _observe(f, theta0[..., None] + chunk).sum(axis=-1)
    return total / n


def birkhoff_sums_grid(g: BoundaryLogModulus, t: float, n: int) -> np.ndarray:
    """Birkhoff averages of ``g`` started at every grid point.

    With linear interpolation between samples the sum over the orbit is a
    circular correlation of the samples with a sparse kernel, so all ``M``
    starting points cost one FFT pair.
    """
    m = g.grid_size
    x = ((np.arange(n) * float(t)) % 1.0) * m
    k = np.floor(x).astype(np.int64) % m
    fr = x - np.floor(x)
    h = np.bincount(k, weights=1.0 - fr, minlength=m) + np.bincount((k + 1) % m, weights=fr, minlength=m)
    s = np.fft.ifft(np.conj(np.fft.fft(h)) * np.fft.fft(g.samples)).real
    return s / n


def birkhoff_extremes(f: Observable, t: float, n: int, grid_size: int = 4096, oversample: int = 16):
    """``(sup, inf)`` over ``grid_size`` equispaced starts of the Birkhoff average."""
    if isinstance(f, BoundaryLogModulus):
        g = f
    else:
        g = BoundaryLogModulus.from_callable(f, grid_size * oversample)
    avg = birkhoff_sums_grid(g, t, n)
    step = g.grid_size // grid_size if g.grid_size >= grid_size else 1
    if g.grid_size < grid_size:
        theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
        avg = birkhoff_average(g, t, n, theta)
    else:
        avg = avg[::step]
    return float(avg.max()), float(avg.min())
