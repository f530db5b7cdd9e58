"""Acceptance gates over the reference corpus, as run by ``wcospec verify-all``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bergman import AnalyticVector, BergmanParams, wco_matrix
from .classifier import classify
from .corpus import corpus, singular_atom_weight
from .dynamics import GOLDEN, EllipticAutomorphism, WeightCocycle, birkhoff_average, birkhoff_extremes
from .hinf import BoundaryLogModulus, factor
from .radius import DEFAULT_SCHEDULE, rho_estimate
from .verification import annulus_mass_check, lower_bound_sample, pseudospectrum, residual_scan

__all__ = ["Gate", "run_gates", "corpus_schedule"]

SANDWICH_TOL = 0.02
COARSE_SCHEDULE = (16, 32, 64)


@dataclass(frozen=True)
class Gate:
    name: str
    passed: bool
    value: float
    threshold: str

    def to_dict(self) -> dict:
        return {"gate": self.name, "passed": self.passed, "value": self.value, "threshold": self.threshold}


def corpus_schedule(name: str):
    """Characteristic-function weights use ``n <= 64`` (grid resolution limit)."""
    return COARSE_SCHEDULE if name.startswith("outer(") else DEFAULT_SCHEDULE


def _rel(a, b):
    return abs(a - b) / abs(b)


def run_gates(seed: int, m: int = 1 << 16, threads: int = 1) -> list:
    rng = np.random.default_rng(seed)
    rot = EllipticAutomorphism.rotation(GOLDEN)
    gates = []
    weights = corpus(m)

    for name, w in weights.items():
        est = rho_estimate(WeightCocycle(w, rot), corpus_schedule(name))
        lo, hi = est.bracket
        ok = lo * (1 - SANDWICH_TOL) <= est.value <= hi * (1 + SANDWICH_TOL)
        gates.append(Gate(f"sandwich {name}", ok, est.value, f"[{lo:.6g}, {hi:.6g}] +/- 2%"))

    rep = classify(WeightCocycle(weights["outer(chi_G)"], rot), schedule=COARSE_SCHEDULE)
    se = rep.sigma_e
    inner = se.inner if se.kind == "annulus" else float("nan")
    upper = rep.radii["rho"]["upper_bound"]
    gates.append(Gate("annulus case", rep.case == "invertible_annulus" and se.kind == "annulus", inner, "invertible_annulus"))
    gates.append(Gate("annulus inner radius", math.exp(0.45) <= inner <= math.exp(0.55), inner, "[e^0.45, e^0.55]"))
    gates.append(Gate("annulus outer estimate", rep.radii["rho"]["value"] >= math.exp(0.8), rep.radii["rho"]["value"], ">= e^0.8"))
    gates.append(Gate("annulus upper bound", _rel(upper, math.e) <= 0.01, upper, "e within 1%"))

    rep = classify(WeightCocycle(weights["2+z"], rot))
    se = rep.sigma_e
    ok = rep.case == "invertible_annulus" and se.kind == "circle" and _rel(se.inner, 2) <= 0.02 and _rel(se.outer, 2) <= 0.02
    gates.append(Gate("circle(2) for 2+z", ok, se.outer, "both radii within 2% of 2"))

    for alpha in (0.0, 1.0):
        rep = classify(WeightCocycle(weights["z"], rot), BergmanParams(2.0, alpha))
        ok = (
            rep.case == "disk_zero_mixed"
            and rep.sigma_e.kind == "circle"
            and abs(rep.sigma_e.outer - 1) <= 1e-6
            and rep.sigma.kind == "disk"
            and abs(rep.sigma.outer - 1) <= 1e-6
        )
        gates.append(Gate(f"z: sigma_e circle(1), sigma disk(1), alpha={alpha:g}", ok, rep.sigma_e.outer, "within 1e-6"))
        M = wco_matrix(weights["z"], rot.eta, 200, alpha)
        f = pseudospectrum(M, np.array([0.5, 1.5]), threads)
        gates.append(Gate(f"z: sigma_min(0.5), alpha={alpha:g}", f.sigma_min[0] < 1e-6, f.sigma_min[0], "< 1e-6"))
        gates.append(Gate(f"z: sigma_min(1.5), alpha={alpha:g}", f.sigma_min[1] > 0.3, f.sigma_min[1], "> 0.3"))

    rep = classify(WeightCocycle(weights["1-z"], rot))
    lo, hi = rep.radii["rho"]["lower_bounds"]["v_at_a"], rep.radii["rho"]["upper_bound"]
    ok = rep.case == "shilov_zero_disk" and rep.sigma.kind == "disk" and rep.sigma_e.kind == "disk"
    gates.append(Gate("1-z: disk(1)", ok and abs(rep.sigma.outer - 1) <= 0.02, rep.sigma.outer, "disk, radius 1"))
    gates.append(Gate("1-z: bracket width", (hi - lo) / hi < 0.02, (hi - lo) / hi, "< 2%"))

    rep = classify(WeightCocycle(singular_atom_weight(), rot))
    se = rep.sigma_e
    ok = (
        "open_problem_6_5" in rep.open_flags
        and se.kind == "partial"
        and se.contains_zero
        and se.superset_of.kind == "circle"
        and abs(se.superset_of.outer - 1) <= 0.02
        and rep.sigma.kind == "partial"
    )
    gates.append(Gate("singular atom: open flag, no full-disk claim", ok, float(ok), "flag present"))

    g = BoundaryLogModulus.from_callable(lambda t: np.log(np.abs(2 + np.exp(1j * t))), 1 << 16)
    log_fn = lambda t: np.log(np.abs(2 + np.exp(1j * t)))
    start = float(rng.uniform(0, 2 * np.pi))
    pt = float(birkhoff_average(log_fn, GOLDEN, 100_000, start))
    gates.append(Gate("Birkhoff pointwise", abs(pt - math.log(2)) <= 1e-3, pt, "log 2 +/- 1e-3"))
    sup, inf = birkhoff_extremes(g, GOLDEN, 100_000, 4096)
    err = max(abs(sup - math.log(2)), abs(inf - math.log(2)))
    gates.append(Gate("Birkhoff grid sup", err <= 1e-3, sup, "log 2 +/- 1e-3"))

    for name, coeffs, lam in (("z", [0, 1], 1.0), ("2+z", [2, 1], 2.0)):
        recs = residual_scan(WeightCocycle(factor(coeffs), rot), radii=(lam,), ks=(8, 16, 32, 64))
        gates.append(Gate(f"residual {name} at |lambda|={lam:g}, k=64", recs[-1].residual < 0.25, recs[-1].residual, "< 0.25"))

    lb = lower_bound_sample(WeightCocycle(weights["z"], rot), 0.3, trials=200, seed=int(rng.integers(2**31)))
    gates.append(Gate("z: bounded below at 0.3", lb >= 1e-2, lb, ">= 1e-2"))

    fails = 0
    worst = np.inf
    for _ in range(30):
        deg = int(rng.integers(0, 40))
        f = AnalyticVector(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
        for R in (0.3, 0.6, 0.9):
            ratio, ok = annulus_mass_check(f, R, BergmanParams(2.0, float(rng.choice([0.0, 2.0]))))
            worst = min(worst, ratio)
            fails += not ok
    gates.append(Gate("annulus mass inequality", fails == 0, worst, "ratio >= 1 - 1e-6"))
    return gates
