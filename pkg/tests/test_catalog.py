import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from acmg import catalog as cat
from acmg import frame_tensor as ft
from acmg import harmonic as hm
from acmg import random_models as rm
from acmg import report as rp
from acmg.lie_geometry import curvature, levi_civita
from acmg.pipeline import Geometry

from conftest import EPS, seeds

HALF = Fraction(1, 2)


def _geo(entry):
    return Geometry(entry.model, entry.acms)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("c", [Fraction(1), Fraction(2), HALF])
def test_hyperbolic_connection_table(n, c):
    gamma = levi_civita(cat.hyperbolic(n, c).model)
    assert cat.connection_table_diff(gamma, cat.hyperbolic_connection_table(n, c)) == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_heisenberg_connection_tables(k):
    assert cat.connection_table_diff(levi_civita(cat.heisenberg_h1r(k).model), cat.h1r_connection_table(k)) == 0
    assert cat.connection_table_diff(levi_civita(cat.heisenberg_hp1(k).model), cat.hp1_connection_table(k)) == 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_h1r_curvature_table(r):
    R = curvature(cat.heisenberg_h1r(r).model).R
    assert cat.curvature_table_diff(R, cat.h1r_curvature_table(r)) == 0


@pytest.mark.parametrize("p", [1, 2, 3])
def test_hp1_curvature_table_up_to_global_sign(p):
    R = curvature(cat.heisenberg_hp1(p).model).R
    flipped = [(idx, -v) for idx, v in cat.hp1_curvature_table(p)]
    assert cat.curvature_table_diff(R, flipped) == 0
    # central direction: K(X_i, Z) = +1/4 in the convention where K(X, Z) = -3/4 on H(1,1) of the other kind
    assert R[0, 2 * p, 0, 2 * p] == Fraction(1, 4)


@pytest.mark.xfail(strict=True, reason="the published H(p,1) curvature table uses the opposite sign")
@pytest.mark.parametrize("p", [1, 2])
def test_hp1_curvature_table_as_published(p):
    R = curvature(cat.heisenberg_hp1(p).model).R
    assert cat.curvature_table_diff(R, cat.hp1_curvature_table(p)) == 0


def test_unlisted_connection_entries_must_vanish():
    gamma = levi_civita(cat.heisenberg_h1r(1).model)
    assert cat.connection_table_diff(gamma, cat.h1r_connection_table(1)[1:]) == HALF


@given(seeds)
def test_heisenberg_block_predicates(seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, 4))
    kinds = ["generic", "sym", "a0", "lambda"] + (["c0", "traceless"] if r % 2 == 0 else [])
    block = rm.heisenberg_block(rng, r, kinds[int(rng.integers(len(kinds)))])

    entry = cat.heisenberg_h1r(r, block, exact=False)
    geo = _geo(entry)
    active = geo.signature.active
    assert active <= {8, 9, 11}
    for case, holds in cat.h1r_lemma_cases(entry.acms.phi).items():
        assert holds == (active <= cat.H1R_CASE_TYPES[case]), case
    verdict = hm.harmonicity_panel(geo)
    first, second = cat.h1r_harmonic_polynomials(entry.acms.phi)
    assert (max(ft.maxabs(first), ft.maxabs(second)) < EPS) == verdict.is_harmonic
    assert ft.maxabs(verdict.nu) < EPS

    entry = cat.heisenberg_hp1(r, block, exact=False)
    geo = _geo(entry)
    active = geo.signature.active
    assert active <= {6, 7, 10, 11}
    for case, holds in cat.hp1_lemma_cases(entry.acms.phi).items():
        assert holds == (active <= cat.HP1_CASE_TYPES[case]), case
    dF = hm.d_star(geo.gamma, geo.F) @ geo.acms.zeta
    assert abs(dF - cat.hp1_d_star_F_zeta(entry.acms.phi)) < EPS
    assert ft.maxabs(hm.harmonicity_panel(geo).nu) < EPS


def _hp1_generic():
    rng = np.random.default_rng(0)
    return cat.heisenberg_hp1(2, rm.heisenberg_block(rng, 2, "generic"), exact=False)


def test_generic_hp1_structure_has_c10_part():
    geo = _geo(_hp1_generic())
    assert geo.signature.active == {6, 10, 11}
    assert geo.components.norms[10] > 0.5


@pytest.mark.xfail(strict=True, reason="the published H(p,1) span omits C10")
def test_hp1_span_as_published():
    assert _geo(_hp1_generic()).signature.active <= {6, 7, 11}


def test_h12_polynomial_pair_matches_examples():
    for tag, harmonic in (("A", True), ("B", True), ("C", False)):
        first, second = cat.h12_harmonic_polynomial(cat.h12_example(tag).acms.phi)
        assert (abs(first) < EPS and abs(second) < EPS) == harmonic


@pytest.mark.parametrize("tag,active,harmonic_map", [
    ("A", {8, 9}, True), ("B", {8, 9, 11}, True), ("C", {9, 11}, False)])
def test_h12_examples(tag, active, harmonic_map):
    geo = _geo(cat.h12_example(tag))
    assert geo.signature.active == active
    verdict = hm.harmonicity_panel(geo)
    assert verdict.is_harmonic_map == harmonic_map
    assert verdict.is_harmonic == (tag != "C")


@pytest.mark.parametrize("lam", [1, -1])
def test_hp1_standard_structures_are_half_sasakian(lam):
    for p in (1, 2):
        geo = _geo(cat.heisenberg_hp1(p, lam=lam))
        assert geo.signature.names() == ["C6"]
        assert geo.signature.alpha["alpha-Sasakian"] == Fraction(lam, 2)
        assert hm.harmonicity_panel(geo).is_harmonic_map


def test_sphere_ricci_tensors_exact():
    for r in (Fraction(1), Fraction(3)):
        geo = _geo(cat.sphere_su2(r))
        pkg = hm.ricci_ac(geo)
        assert ft.maxabs(pkg.ric_ac - geo.acms.projector() / r ** 2) == 0
        assert ft.maxabs(geo.curv.ric - ft.eye(3, True) * 2 / r ** 2) == 0
        assert hm.weakly_ac_einstein(geo, pkg)


def test_constructor_errors():
    with pytest.raises(ValueError):
        cat.hyperbolic(1, 0)
    with pytest.raises(ValueError):
        cat.sphere_su2(-1)
    with pytest.raises(ValueError):
        cat.h12_example("D")


# -- model files ---------------------------------------------------------------

H11_FILE = {
    "name": "H(1,1) by hand", "dimension": 3,
    "structure_constants": [{"i": 1, "j": 3, "k": 2, "value": 1}],
    "phi": [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
    "zeta": [0, 0, 1],
    "exact": True,
}


def test_hand_entered_model_matches_catalog(tmp_path):
    path = tmp_path / "h11.json"
    path.write_text(json.dumps(H11_FILE))
    custom = rp.analyze(cat.custom_from_file(path), suites=("harmonic", "lemmas", "bochner"))
    builtin = rp.analyze(cat.heisenberg_h1r(1), suites=("harmonic", "lemmas", "bochner"))
    for section in ("classification", "harmonicity", "curvature", "energy"):
        assert getattr(custom, section) == getattr(builtin, section)
    assert [(c.name, c.value) for c in custom.checks] == [(c.name, c.value) for c in builtin.checks]


def test_abelian_model_file_is_cosymplectic(tmp_path):
    data = {"dimension": 3, "structure_constants": [],
            "phi": [[0, -1, 0], [1, 0, 0], [0, 0, 0]], "zeta": [0, 0, 1]}
    path = tmp_path / "flat.json"
    path.write_text(json.dumps(data))
    geo = _geo(cat.custom_from_file(path))
    assert "cosymplectic" in geo.signature.labels


@pytest.mark.parametrize("patch,where", [
    ({"structure_constants": [{"i": 1, "j": 3, "k": 2, "value": 1}, {"i": 3, "j": 1, "k": 2, "value": 1}]},
     "structure_constants[1]"),
    ({"structure_constants": [{"i": 1, "j": 4, "k": 2, "value": 1}]}, "structure_constants[0].j"),
    ({"structure_constants": [{"i": 1, "j": 2, "k": 3, "value": 1}, {"i": 1, "j": 3, "k": 1, "value": 1}]},
     "structure_constants"),
    ({"dimension": 4}, "dimension"),
    ({"phi": [[0, 1, 0], [1, 0, 0], [0, 0, 0]]}, "phi/zeta"),
    ({"zeta": [0, 0]}, "zeta"),
    ({"phi": [[0, "x", 0], [1, 0, 0], [0, 0, 0]]}, "phi[0][1]"),
])
def test_model_file_errors_are_located(tmp_path, patch, where):
    data = dict(H11_FILE, **patch)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(cat.ModelFileError) as info:
        cat.custom_from_file(path)
    assert str(path) in str(info.value)
    assert where in str(info.value)


def test_invalid_json_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dimension": 3,\n  oops\n}')
    with pytest.raises(cat.ModelFileError, match=r"broken.json:3:3"):
        cat.custom_from_file(path)


def test_entry_to_dict_round_trip(tmp_path):
    entry = cat.heisenberg_hp1(2, exact=False)
    path = tmp_path / "hp1.json"
    path.write_text(json.dumps(cat.entry_to_dict(entry)))
    back = cat.custom_from_file(path)
    assert ft.maxabs(back.model.c - entry.model.c) == 0
    assert ft.maxabs(back.acms.phi - entry.acms.phi) == 0
