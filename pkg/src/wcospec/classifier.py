"""Case analysis for the spectrum and essential spectrum of C_{psi, phi}.

The case is decided from the declared factorization of the weight (never
from numerical zero detection); radii come from :mod:`wcospec.radius`.

====================  ==========================================  ====================
case                  sigma_e                                     sigma
====================  ==========================================  ====================
invertible_annulus    annulus [1/rho_{1/psi}, rho]                same
shilov_zero_disk      disk(rho)                                   same
disk_zero_mixed       annulus [1/rho_{1/v}, rho]                  disk(rho)
open_case             contains annulus [1/rho_{1/v}, rho] and 0   inside disk(rho)
====================  ==========================================  ====================
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .bergman import BergmanParams
from .dynamics import WeightCocycle
from .exceptions import FiniteOrderError
from .hinf import LOG_FLOOR
from .radius import DEFAULT_SCHEDULE, r_estimate, rho_estimate

__all__ = [
    "MERGE_TOL",
    "CASES",
    "ZeroProfile",
    "Region",
    "SpectrumReport",
    "zero_profile",
    "classify",
]

MERGE_TOL = 0.02

CASES = (
    "invertible_annulus",
    "shilov_zero_disk",
    "disk_zero_mixed",
    "open_case",
    "finite_order_refused",
    "degenerate_zero_weight",
)

KITOVER = (
    "rho equals the max over phi-invariant probability measures mu on the Shilov "
    "boundary of exp(integral log|psi| dmu); quoted as the theoretical characterization, not computed"
)


@dataclass(frozen=True)
class ZeroProfile:
    zeros_in_disk: bool
    zeros_on_shilov: bool
    singular_present: bool

    @property
    def invertible(self) -> bool:
        return not (self.zeros_in_disk or self.zeros_on_shilov or self.singular_present)

    @property
    def case(self) -> str:
        if self.invertible:
            return "invertible_annulus"
        if self.zeros_on_shilov:
            return "shilov_zero_disk"
        if self.singular_present:
            return "open_case"
        return "disk_zero_mixed"


def zero_profile(weight) -> ZeroProfile:
    return ZeroProfile(bool(weight.zeros_in_disk), bool(weight.zeros_on_shilov), bool(weight.singular_present))


@dataclass(frozen=True)
class Region:
    """A rotation-invariant closed region ``{inner <= |lambda| <= outer}``.

    ``kind`` is ``"disk"`` (inner 0), ``"annulus"``, ``"circle"`` (inner ==
    outer), ``"point"`` ({0}) or ``"partial"``. A partial region is known only
    through ``superset_of`` (a region it contains, plus 0 when
    ``contains_zero``) and ``subset_of`` (a region containing it).
    """

    kind: str
    inner: float = 0.0
    outer: float = 0.0
    inner_bracket: tuple = (0.0, 0.0)
    outer_bracket: tuple = (0.0, 0.0)
    contains_zero: bool = False
    superset_of: "Region | None" = None
    subset_of: "Region | None" = None

    @classmethod
    def disk(cls, outer, outer_bracket):
        return cls("disk", 0.0, outer, (0.0, 0.0), tuple(outer_bracket), True)

    @classmethod
    def ring(cls, inner, outer, inner_bracket, outer_bracket, merge_tol=MERGE_TOL):
        if abs(outer - inner) <= merge_tol * max(outer, inner):
            return cls("circle", outer, outer, tuple(inner_bracket), tuple(outer_bracket), outer == 0)
        return cls("annulus", inner, outer, tuple(inner_bracket), tuple(outer_bracket), inner == 0)

    def contains_radius(self, r: float, tol: float = 0.0) -> bool:
        if self.kind == "partial":
            return self.superset_of.contains_radius(r, tol) or (self.contains_zero and r == 0)
        if self.contains_zero and r == 0:
            return True
        return self.inner * (1 - tol) <= r <= self.outer * (1 + tol)

    def to_dict(self) -> dict:
        if self.kind == "partial":
            return {
                "kind": "partial",
                "superset_of": self.superset_of.to_dict(),
                "contains_zero": self.contains_zero,
                "subset_of": self.subset_of.to_dict(),
            }
        return {
            "kind": self.kind,
            "inner": self.inner,
            "outer": self.outer,
            "inner_bracket": list(self.inner_bracket),
            "outer_bracket": list(self.outer_bracket),
            "contains_zero": self.contains_zero,
        }


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    case: str
    sigma: Region | None
    sigma_e: Region | None
    radii: dict = field(default_factory=dict)
    facts: list = field(default_factory=list)
    open_flags: list = field(default_factory=list)
    profile: ZeroProfile | None = None
    map_info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "sigma": None if self.sigma is None else self.sigma.to_dict(),
            "sigma_e": None if self.sigma_e is None else self.sigma_e.to_dict(),
            "radii": self.radii,
            "facts": list(self.facts),
            "open_flags": list(self.open_flags),
            "profile": None if self.profile is None else asdict(self.profile),
            "map": dict(self.map_info),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), default=_json_default, **kw)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(type(o))


def _fact(statement, source, **extra):
    d = {"statement": statement, "source": source}
    d.update(extra)
    return d


def _map_info(phi) -> dict:
    return {
        "fixed_point": [phi.a.real, phi.a.imag],
        "angle": phi.angle,
        "order": "inf" if phi.rational is None else phi.rational[1],
        "note": phi.note,
    }


def _thickness(r_est, rho_est, merge_tol):
    """Decide circle vs annulus from point values and brackets."""
    r_val, rho_val = r_est.best, rho_est.best
    r_lo, r_hi = r_est.bracket
    R_lo, R_hi = rho_est.bracket
    close = abs(rho_val - r_val) <= merge_tol * max(rho_val, r_val)
    can_be_circle = r_hi >= R_lo * (1 - merge_tol)
    can_be_thick = R_hi - r_lo > merge_tol * max(R_hi, r_lo)
    if close:
        return "circle", can_be_thick and not (r_est.certified and rho_est.certified)
    return "annulus", can_be_circle and not (r_est.certified and rho_est.certified)


def classify(
    cw: WeightCocycle,
    params: BergmanParams = BergmanParams(),
    schedule=DEFAULT_SCHEDULE,
    grid_size: int | None = None,
    merge_tol: float = MERGE_TOL,
    inner_schedule=None,
) -> SpectrumReport:
    """Spectrum and essential spectrum of ``C_{psi, phi}`` on ``A^p_alpha``.

    Radii do not depend on ``(p, alpha)``; ``params`` is recorded only.
    """
    phi = cw.map
    info = _map_info(phi)
    info["space"] = {"p": params.p, "alpha": params.alpha}
    try:
        phi.require_infinite_order()
    except FiniteOrderError as exc:
        q = exc.order
        return SpectrumReport(
            "finite_order_refused",
            None,
            None,
            facts=[
                _fact(
                    f"phi has order {q}; C^{q} is multiplication by psi_({q}), so the spectrum "
                    "follows from that multiplier (not computed here)",
                    "finite-order remark",
                )
            ],
            map_info=info,
        )

    weight = cw.weight
    if np.all(weight.outer_log_modulus.samples <= LOG_FLOOR):
        pt = Region("point", 0.0, 0.0, contains_zero=True)
        return SpectrumReport(
            "degenerate_zero_weight", pt, pt,
            facts=[_fact("psi = 0 so C is the zero operator", "definition")],
            map_info=info,
        )

    prof = zero_profile(weight)
    case = prof.case
    rho = rho_estimate(cw, schedule, grid_size)
    R = rho.best
    R_br = rho.bracket
    radii = {
        "rho": dict(rho.to_dict(), citation="Prop. 4.8 bracket; spectral radius rho_{psi,phi}"),
    }
    rw = cw.conjugated().weight
    psi_a = complex(np.asarray(rw.eval(0.0)))
    facts = [
        _fact("sigma and sigma_e are invariant under rotation lambda -> e^{i theta} lambda", "Lemma 5.1"),
        _fact(
            f"every eigenvalue satisfies |lambda| = |psi(a)| = {abs(psi_a):.12g}",
            "proof of Thm 5.4",
            modulus=abs(psi_a),
        ),
        _fact(
            "eigenvalue candidates in the rotation model lie in {psi(a) eta^K : K >= 0}",
            "derived (not a cited result)",
            derived=True,
        ),
        _fact(KITOVER, "Kitover"),
    ]
    flags: list = []
    if rho.diagnostics.get("scale_sensitive") and not getattr(rw, "boundary_continuous", False):
        flags.append("envelope_scale_sensitive")
    if rho.diagnostics.get("grid_too_coarse"):
        flags.append("grid_too_coarse")

    if case == "shilov_zero_disk":
        d = Region.disk(R, R_br)
        radii["r"] = {"value": 0.0, "provenance": "outer part vanishes on the Shilov boundary", "citation": "Cor. 6.3"}
        facts.append(_fact("sigma = sigma_e = {|lambda| <= rho}", "Cor. 6.3"))
        return SpectrumReport(case, d, d, radii, facts, flags, prof, info)

    r = r_estimate(cw, inner_schedule or schedule, grid_size)
    radii["r"] = dict(r.to_dict(), citation="Lemma 6.1: r = 1/rho_{1/v,phi}")
    kind, indeterminate = _thickness(r, rho, merge_tol)
    if indeterminate:
        flags.append("indeterminate_thickness")
    inner = R if kind == "circle" else r.best
    ring = Region.ring(inner, R, r.bracket, R_br, merge_tol if kind == "circle" else 0.0)
    if indeterminate:
        radii["alternative"] = (
            Region("annulus", r.best, R, tuple(r.bracket), tuple(R_br)).to_dict()
            if kind == "circle"
            else Region("circle", R, R, tuple(r.bracket), tuple(R_br)).to_dict()
        )

    if case == "invertible_annulus":
        facts.append(_fact("sigma = sigma_e = {1/rho_{1/psi} <= |lambda| <= rho}", "Cor. 5.5"))
        return SpectrumReport(case, ring, ring, radii, facts, flags, prof, info)

    if case == "disk_zero_mixed":
        facts.append(_fact("sigma_e = {1/rho_{1/v} <= |lambda| <= rho}, sigma = {|lambda| <= rho}", "Thm 6.4"))
        facts.append(
            _fact(
                "for |lambda| < 1/rho_{1/v}, C - lambda is Fredholm with nonzero index",
                "Thm 6.4 proof",
            )
        )
        return SpectrumReport(case, Region.disk(R, R_br), ring, radii, facts, flags, prof, info)

    # singular inner factor, outer part invertible
    flags.append("open_problem_6_5")
    facts.append(_fact("sigma_e contains {1/rho_{1/v} <= |lambda| <= rho}", "Thms 5.4 and 6.2"))
    facts.append(_fact("0 is in sigma_e since C is not Fredholm", "Fredholm remark"))
    facts.append(_fact("whether sigma_e is the full disk {|lambda| <= rho} is open", "Problem 6.5"))
    se = Region("partial", contains_zero=True, superset_of=ring, subset_of=Region.disk(R, R_br))
    s = Region("partial", contains_zero=True, superset_of=ring, subset_of=Region.disk(R, R_br))
    return SpectrumReport(case, s, se, radii, facts, flags, prof, info)
