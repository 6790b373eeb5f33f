from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from acmg import catalog as cat
from acmg import frame_tensor as ft
from acmg import random_models as rm
from acmg.acms_core import AcmStructure, StructureError, covariant_derivative, validate
from acmg.pipeline import Geometry
from acmg.torsion import (COMPONENTS, decompose, membership_residual, split, unitary_part)

from conftest import EPS, random_geometry, seeds


def _rotate3(T, Q):
    return np.einsum("abc,ai,bj,ck->ijk", T, Q, Q, Q)


def test_validate_reports_each_axiom():
    M = np.zeros((3, 3))
    M[1, 2], M[2, 1] = 1.0, -1.0
    z = np.array([1.0, 0.0, 0.0])
    validate(AcmStructure(M, z))
    with pytest.raises(StructureError, match=r"phi zeta = 0"):
        validate(AcmStructure(M, np.array([0.0, 1.0, 0.0])))
    with pytest.raises(StructureError, match=r"\|zeta\| = 1"):
        validate(AcmStructure(M, 2 * z))
    with pytest.raises(StructureError, match="odd"):
        AcmStructure(np.zeros((2, 2)), np.zeros(2))


@given(seeds)
def test_minimal_connection_makes_structure_parallel(seed):
    # nabla^U = nabla + xi must kill phi and zeta, and xi must lie in u(n)^perp
    geo = random_geometry(seed)
    M, z = geo.acms.phi, geo.acms.zeta
    scale = geo.scale
    assert ft.maxabs(covariant_derivative(geo.gamma_u, M)) < EPS * scale
    assert ft.maxabs(covariant_derivative(geo.gamma_u, z)) < EPS * scale
    for x in range(geo.m):
        assert ft.maxabs(unitary_part(geo.xi[x], geo.acms)) < EPS * scale
    assert membership_residual(geo.xi, geo.acms) < EPS * scale


@given(seeds)
def test_components_complete_orthogonal_and_in_torsion_space(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.choice([3, 5, 7]))
    acms = rm.random_structure(rng, m)
    xi = rm.random_torsion(rng, acms)
    tc = decompose(xi, acms)
    assert ft.maxabs(sum(tc.comps[i] for i in COMPONENTS) - xi) < EPS
    for i in COMPONENTS:
        assert membership_residual(tc.comps[i], acms) < EPS
        for j in COMPONENTS:
            if i < j:
                assert abs(ft.inner(tc.comps[i], tc.comps[j])) < EPS
    assert abs(sum(tc.norms.values()) - tc.total_norm) < EPS * max(1.0, tc.total_norm)


@given(seeds)
def test_projections_are_idempotent(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.choice([3, 5, 7]))
    acms = rm.random_structure(rng, m)
    comps = split(rm.random_torsion(rng, acms), acms)["comps"]
    for i in COMPONENTS:
        again = split(comps[i], acms)["comps"]
        assert ft.maxabs(again[i] - comps[i]) < EPS
        for j in COMPONENTS:
            if j != i:
                assert ft.maxabs(again[j]) < EPS


@given(seeds)
def test_split_is_unitary_equivariant(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.choice([3, 5, 7]))
    acms = rm.random_structure(rng, m)
    xi = rm.random_torsion(rng, acms)
    Q = rm.random_unitary_rotation(rng, acms)
    assert ft.maxabs(Q.T @ acms.phi @ Q - acms.phi) < EPS
    assert ft.maxabs(Q.T @ acms.zeta - acms.zeta) < EPS
    before = split(xi, acms)["comps"]
    after = split(_rotate3(xi, Q), acms)["comps"]
    for i in COMPONENTS:
        assert ft.maxabs(after[i] - _rotate3(before[i], Q)) < EPS * 10


@given(seeds)
def test_dimension_degeneracies(seed):
    rng = np.random.default_rng(seed)
    for m, absent in ((3, {1, 2, 3, 4, 7, 8, 10, 11}), (5, {1, 3})):
        acms = rm.random_structure(rng, m)
        tc = decompose(rm.random_torsion(rng, acms), acms)
        for i in COMPONENTS:
            if i in absent:
                assert tc.norms[i] < EPS
    # generic torsion fills every other slot
    acms = rm.random_structure(rng, 3)
    tc = decompose(rm.random_torsion(rng, acms), acms)
    assert all(tc.norms[i] > 1e-6 for i in (5, 6, 9, 12))


def test_generic_torsion_in_dimension_seven_is_full():
    rng = np.random.default_rng(0)
    acms = rm.random_structure(rng, 7)
    tc = decompose(rm.random_torsion(rng, acms), acms)
    assert all(tc.norms[i] > 1e-6 for i in COMPONENTS)


def test_named_classes_on_catalog():
    geo = Geometry(*_pair(cat.abelian(2)))
    assert geo.signature.names() == [] and "cosymplectic" in geo.signature.labels
    geo = Geometry(*_pair(cat.hyperbolic(2, 3)))
    assert geo.signature.names() == ["C5"]
    assert geo.signature.alpha["alpha-Kenmotsu"] == -3
    geo = Geometry(*_pair(cat.sphere_su2(Fraction(1, 2))))
    assert geo.signature.names() == ["C6"]
    assert geo.signature.alpha["alpha-Sasakian"] == 2
    assert "quasi-Sasakian" in geo.signature.labels


def test_heisenberg_one_one_numbers_exact():
    geo = Geometry(*_pair(cat.heisenberg_h1r(1)))
    assert geo.components.total_norm == 1
    assert ft.norm2(geo.nabla_F) == 1
    assert ft.norm2(geo.nabla_eta) == Fraction(1, 2)


def _pair(entry):
    return entry.model, entry.acms
