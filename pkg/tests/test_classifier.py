import json
import math

import numpy as np
import pytest

from wcospec.bergman import BergmanParams
from wcospec.classifier import CASES, classify
from wcospec.config import zero_weight
from wcospec.corpus import singular_atom_weight
from wcospec.dynamics import GOLDEN, EllipticAutomorphism, WeightCocycle
from wcospec.gates import corpus_schedule
from wcospec.hinf import factor, reciprocal

EXPECTED_CASE = {
    "2+z": "invertible_annulus",
    "z": "disk_zero_mixed",
    "1-z": "shilov_zero_disk",
    "outer(chi_G)": "invertible_annulus",
    "outer(chi_K)": "invertible_annulus",
    "(z-1/2)(z+2)": "disk_zero_mixed",
}


def run(weight, phi=None, schedule=(16, 64, 256, 1024, 4096), **kw):
    return classify(WeightCocycle(weight, phi or EllipticAutomorphism.rotation()), schedule=schedule, **kw)


def test_two_plus_z_is_circle():
    rep = run(factor([2, 1]))
    assert rep.case == "invertible_annulus"
    assert rep.sigma_e.kind == "circle" and rep.sigma.kind == "circle"
    assert rep.sigma_e.outer == pytest.approx(2, rel=0.02)
    moduli = [f["modulus"] for f in rep.facts if "modulus" in f]
    assert moduli == [pytest.approx(2.0, abs=1e-12)]
    assert any(f.get("derived") for f in rep.facts)


def test_open_dense_annulus(reference_weights):
    rep = run(reference_weights["outer(chi_G)"], schedule=(16, 32, 64))
    assert rep.case == "invertible_annulus" and rep.sigma_e.kind == "annulus"
    assert math.exp(0.45) <= rep.sigma_e.inner <= math.exp(0.55)
    assert rep.sigma_e.outer == pytest.approx(math.e, rel=1e-9)
    assert "indeterminate_thickness" not in rep.open_flags


def test_shift_weight():
    for alpha in (0.0, 1.0):
        rep = run(factor([0, 1]), params=BergmanParams(2, alpha))
        assert rep.case == "disk_zero_mixed"
        assert rep.sigma_e.kind == "circle" and abs(rep.sigma_e.outer - 1) < 1e-6
        assert rep.sigma.kind == "disk" and abs(rep.sigma.outer - 1) < 1e-6
        assert any("Fredholm" in f["statement"] for f in rep.facts)


def test_shilov_zero_disk():
    rep = run(factor([1, -1]))
    assert rep.case == "shilov_zero_disk"
    assert rep.sigma.kind == rep.sigma_e.kind == "disk"
    lo, hi = rep.sigma.outer_bracket
    assert (hi - lo) / hi < 0.02 and rep.sigma.outer == pytest.approx(1.0, abs=1e-12)


def test_singular_atom_open_case():
    rep = run(singular_atom_weight())
    assert rep.case == "open_case"
    assert "open_problem_6_5" in rep.open_flags
    se = rep.sigma_e
    assert se.kind == "partial" and se.contains_zero
    assert se.superset_of.kind == "circle" and se.superset_of.outer == pytest.approx(1.0, abs=1e-9)
    assert se.subset_of.kind == "disk"
    # the report never claims the full disk as sigma_e
    assert rep.to_dict()["sigma_e"]["kind"] != "disk"


def test_refusals():
    rep = run(factor([2, 1]), EllipticAutomorphism(0.2, rational=(2, 7)))
    assert rep.case == "finite_order_refused" and rep.sigma is None
    assert "C^7" in rep.facts[0]["statement"] and "psi_(7)" in rep.facts[0]["statement"]
    rep = run(zero_weight())
    assert rep.case == "degenerate_zero_weight"
    assert rep.sigma.kind == rep.sigma_e.kind == "point"


@pytest.mark.parametrize("name", list(EXPECTED_CASE))
def test_case_totality_and_region_consistency(name, reference_weights):
    rep = run(reference_weights[name], schedule=corpus_schedule(name))
    assert rep.case in CASES and rep.case == EXPECTED_CASE[name]
    s, se = rep.sigma, rep.sigma_e
    assert se.inner <= se.outer
    assert s.inner <= se.inner * (1 + 0.02) and se.outer <= s.outer * (1 + 0.02)
    if rep.case in ("invertible_annulus", "shilov_zero_disk"):
        assert s.to_dict() == se.to_dict()
    json.loads(rep.to_json())


def test_inverse_symmetry():
    eta = np.exp(2j * np.pi * GOLDEN)
    phi = EllipticAutomorphism.rotation(GOLDEN)
    rep = run(factor([2, 1]), phi)
    # C^{-1} = C_{1/(psi o phi_{-1}), phi_{-1}}; here psi o phi_{-1} = 2 + conj(eta) z
    inv = run(reciprocal(factor([2, np.conj(eta)])), phi.inverse())
    assert inv.case == "invertible_annulus"
    assert inv.sigma_e.inner == pytest.approx(1 / rep.sigma_e.outer, rel=0.02)
    assert inv.sigma_e.outer == pytest.approx(1 / rep.sigma_e.inner, rel=0.02)


def test_scaling_equivariance(reference_weights):
    w = reference_weights["outer(chi_G)"]
    c = 2.5
    a = run(w, schedule=(16, 32, 64))
    b = run(w.scaled(c), schedule=(16, 32, 64))
    assert b.sigma_e.outer == pytest.approx(c * a.sigma_e.outer, rel=1e-9)
    assert b.sigma_e.inner == pytest.approx(c * a.sigma_e.inner, rel=1e-9)


def test_conjugated_map_matches_rotation_model():
    a = 0.4 + 0.2j
    psi = factor([2, 1, 0.3])
    ell = run(psi, EllipticAutomorphism(a, GOLDEN), schedule=(16, 64))
    rot = run(psi.compose_mobius(a), EllipticAutomorphism(0j, GOLDEN), schedule=(16, 64))
    assert ell.case == rot.case
    assert ell.sigma_e.outer == pytest.approx(rot.sigma_e.outer, rel=1e-9)
    assert ell.sigma_e.inner == pytest.approx(rot.sigma_e.inner, rel=1e-9)
