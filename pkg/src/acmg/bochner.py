"""Exterior calculus of F and eta, the norm ledger, and Bochner-type identities.

All norms are full tensor sums ``sum |T[i, j, ...]|^2`` in the orthonormal frame.
For left-invariant data on a unimodular group the integrands of the Bochner
formulas are constant on compact quotients, so they are compared pointwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import frame_tensor as ft
from .lie_geometry import is_conformally_flat
from .pipeline import Geometry


class BochnerError(RuntimeError):
    """An asserted norm relation or Bochner identity failed."""


def is_unimodular(geo: Geometry) -> bool:
    """``tr ad_X = 0`` for every X."""
    return geo.close(ft.einsum("xkk->x", geo.model.c))


def is_einstein(geo: Geometry) -> bool:
    ric, s = geo.curv.ric, geo.curv.s
    return geo.close(ric - ft.eye(geo.m, geo.exact) * s / geo.m, geo.scale)


def nabla_F_part(geo: Geometry, xi_part):
    """``-xi_X . F``, the part of nabla F carried by a piece of the torsion."""
    M = geo.F
    out = ft.zeros((geo.m, geo.m, geo.m), geo.exact)
    for x in range(geo.m):
        out[x] = -ft.act(xi_part[x], M)
    return out


def nabla_eta_part(geo: Geometry, xi_part):
    """``(nabla_X eta)(Y) = -<xi_X zeta, Y>`` restricted to a piece of the torsion."""
    return -ft.einsum("xjy,j->xy", xi_part, geo.acms.zeta)


def compose_phi(geo: Geometry, a):
    """``(a o phi)(X, Y) = a(X, phi Y)`` for a 2-tensor ``a``."""
    return a @ geo.F


@dataclass(frozen=True)
class ExteriorPackage:
    dF: np.ndarray
    d_star_F: np.ndarray
    d_eta: np.ndarray
    d_star_eta: object
    dF_parts: dict
    d_star_F_parts: dict
    d_eta_parts: dict
    nabla_F_parts: dict
    nabla_eta_parts: dict
    residuals: dict = field(default_factory=dict)


def exterior_package(geo: Geometry) -> ExteriorPackage:
    """dF, d*F, d eta, d* eta with their splittings along the torsion components."""
    comps = geo.components.comps
    z = geo.acms.zeta
    nF = geo.nabla_F
    ne = geo.nabla_eta
    nF_parts = {i: nabla_F_part(geo, comps[i]) for i in comps}
    ne_parts = {i: nabla_eta_part(geo, comps[i]) for i in comps}

    dF = ft.cyclic_sum(nF)
    d_star_F = -ft.einsum("iix->x", nF)
    d_eta = ne - ne.T
    d_star_eta = -np.trace(ne)

    dF_parts = {i: ft.cyclic_sum(nF_parts[i]) for i in (1, 3, 4, 5, 8)}
    dF_parts[(10, 11)] = ft.cyclic_sum(nF_parts[10] + nF_parts[11])
    contraction4 = ft.einsum("iix->x", nF_parts[4])
    nabla_zeta_eta12 = z @ ne_parts[12]
    d_star_F_parts = {
        (4, 12): -contraction4 + nabla_zeta_eta12 @ geo.F,
        6: (d_star_F @ z) * z,
    }
    d_eta_parts = {i: ne_parts[i] - ne_parts[i].T for i in (6, 7, 10, 12)}

    res = {
        "nabla_F_split": ft.maxabs(sum(nF_parts.values()) - nF),
        "nabla_eta_split": ft.maxabs(sum(ne_parts.values()) - ne),
        "dF_split": ft.maxabs(sum(dF_parts.values()) - dF),
        "d_star_F_split": ft.maxabs(sum(d_star_F_parts.values()) - d_star_F),
        "d_eta_split": ft.maxabs(sum(d_eta_parts.values()) - d_eta),
    }
    # closed form of the (10, 11) piece: eta ^ (2 (nabla eta)_10 o phi + (nabla_zeta F)_11)
    inner = 2 * compose_phi(geo, ne_parts[10]) + np.tensordot(z, nF_parts[11], axes=1)
    closed = (ft.einsum("x,yz->xyz", z, inner) - ft.einsum("y,xz->xyz", z, inner)
              + ft.einsum("z,xy->xyz", z, inner))
    res["dF_10_11_closed_form"] = ft.maxabs(dF_parts[(10, 11)] - closed)
    return ExteriorPackage(dF, d_star_F, d_eta, d_star_eta, dF_parts, d_star_F_parts, d_eta_parts,
                           nF_parts, ne_parts, res)


@dataclass(frozen=True)
class NormLedger:
    xi: object
    nabla_F: object
    nabla_eta: object
    dF: object
    d_star_F: object
    d_eta: object
    d_star_eta: object
    xi_parts: dict
    nabla_F_parts: dict
    nabla_eta_parts: dict
    dF_parts: dict
    d_star_F_parts: dict
    d_eta_parts: dict
    mixed: dict
    relations: dict

    def failures(self, tol):
        return {k: v for k, v in self.relations.items() if v > tol}


def norm_ledger(geo: Geometry, ext: ExteriorPackage | None = None, check: bool = True) -> NormLedger:
    """Squared norms and the residuals of every relation between them."""
    ext = ext or exterior_package(geo)
    comps = geo.components.comps
    n, z = geo.n, geo.acms.zeta
    nrm = ft.norm2
    xi_p = {i: nrm(comps[i]) for i in comps}
    nF_p = {i: nrm(ext.nabla_F_parts[i]) for i in comps}
    ne_p = {i: nrm(ext.nabla_eta_parts[i]) for i in comps}
    dF_p = {k: nrm(v) for k, v in ext.dF_parts.items()}
    dsF_p = {k: nrm(v) for k, v in ext.d_star_F_parts.items()}
    de_p = {k: nrm(v) for k, v in ext.d_eta_parts.items()}

    nabla_zeta_F11 = np.tensordot(z, ext.nabla_F_parts[11], axes=1)
    mixed = {
        "dF_10_11_inner": nrm(2 * compose_phi(geo, ext.nabla_eta_parts[10]) + nabla_zeta_F11),
        "d_star_F_4_12_inner": nrm(-ft.einsum("iix->x", ext.nabla_F_parts[4])
                                   + (z @ ext.nabla_eta_parts[12]) @ geo.F),
        "contraction_4": nrm(ft.einsum("iix->x", ext.nabla_F_parts[4])),
        "nabla_zeta_F_11": nrm(nabla_zeta_F11),
        "nabla_zeta_eta_12": nrm(z @ ext.nabla_eta_parts[12]),
    }

    rel = {"4|xi|^2 = |nabla F|^2 + 6|nabla eta|^2":
           4 * nrm(geo.xi) - nrm(geo.nabla_F) - 6 * nrm(geo.nabla_eta)}
    for i in (1, 2, 3, 4, 11):
        rel[f"4|xi_{i}|^2 = |(nabla F)_{i}|^2"] = 4 * xi_p[i] - nF_p[i]
        rel[f"(nabla eta)_{i} = 0"] = ne_p[i]
    for i in (5, 6, 7, 8, 9, 10, 12):
        rel[f"|xi_{i}|^2 = |(nabla F)_{i}|^2"] = xi_p[i] - nF_p[i]
        rel[f"2|(nabla eta)_{i}|^2 = |xi_{i}|^2"] = 2 * ne_p[i] - xi_p[i]
    rel["|(dF)_1|^2 = 9|(nabla F)_1|^2"] = dF_p[1] - 9 * nF_p[1]
    for i in (3, 4):
        rel[f"|(dF)_{i}|^2 = 3|(nabla F)_{i}|^2"] = dF_p[i] - 3 * nF_p[i]
    for i in (5, 8):
        rel[f"|(dF)_{i}|^2 = 6|(nabla F)_{i}|^2"] = dF_p[i] - 6 * nF_p[i]
    rel["|(dF)_(10,11)|^2 = 3|2(nabla eta)_10 o phi + (nabla_zeta F)_11|^2"] = (
        dF_p[(10, 11)] - 3 * mixed["dF_10_11_inner"])
    rel["|(nabla_zeta F)_11|^2 = |(nabla F)_11|^2"] = mixed["nabla_zeta_F_11"] - nF_p[11]
    rel["|(d*F)_6|^2 = n|(nabla F)_6|^2"] = dsF_p[6] - n * nF_p[6]
    rel["|(d*F)_(4,12)|^2 = |-e_i _| (nabla_e_i F)_4 + (nabla_zeta eta)_12 o phi|^2"] = (
        dsF_p[(4, 12)] - mixed["d_star_F_4_12_inner"])
    rel["|e_i _| (nabla_e_i F)_4|^2 = (n-1)/2 |(nabla F)_4|^2"] = (
        mixed["contraction_4"] - nF_p[4] * (n - 1) / 2)
    rel["|(nabla eta)_12|^2 = |(nabla_zeta eta)_12|^2"] = ne_p[12] - mixed["nabla_zeta_eta_12"]
    for i in (6, 7, 10):
        rel[f"|(d eta)_{i}|^2 = 4|(nabla eta)_{i}|^2"] = de_p[i] - 4 * ne_p[i]
    rel["|(d eta)_12|^2 = 2|(nabla eta)_12|^2"] = de_p[12] - 2 * ne_p[12]
    rel["(d* eta)^2 = 2n|(nabla eta)_5|^2"] = ext.d_star_eta ** 2 - 2 * n * ne_p[5]
    rel = {k: abs(float(v)) for k, v in rel.items()}

    ledger = NormLedger(nrm(geo.xi), nrm(geo.nabla_F), nrm(geo.nabla_eta), nrm(ext.dF),
                        nrm(ext.d_star_F), nrm(ext.d_eta), ext.d_star_eta ** 2,
                        xi_p, nF_p, ne_p, dF_p, dsF_p, de_p, mixed, rel)
    if check:
        bad = ledger.failures(geo.tol * geo.scale)
        if bad:
            name, value = next(iter(bad.items()))
            raise BochnerError(f"norm relation fails: {name} (residual {value:.3g})")
    return ledger


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: object
    rhs: object
    asserted: bool
    note: str = ""

    @property
    def residual(self) -> float:
        return abs(float(self.lhs - self.rhs))


@dataclass(frozen=True)
class BochnerReport:
    checks: tuple
    unimodular: bool
    conformally_flat: bool
    einstein: bool

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self, tol):
        return [c for c in self.checks if c.asserted and c.residual > tol]


def minimiser_integrand(ledger: NormLedger, n, xi12_coefficient=-1):
    """Integrand of the conformally flat energy identity; the xi_12 weight is a parameter."""
    x = ledger.xi_parts
    k = 2 * n - 1
    return (4 * x[1] - 2 * x[2] + (n - 1) * x[5] + x[6] * (2 * n + 1) * (n - 1) / k
            - x[7] / k + x[8] / k - x[9] * 2 * (n - 1) / k - x[10] / k
            - 2 * x[11] + xi12_coefficient * x[12]
            + ledger.mixed["dF_10_11_inner"] / 2 + ledger.mixed["d_star_F_4_12_inner"])


def bochner_report(geo: Geometry, ledger: NormLedger | None = None, pkg=None) -> BochnerReport:
    from .harmonic import ricci_ac

    ledger = ledger or norm_ledger(geo)
    pkg = pkg or ricci_ac(geo)
    n, z = geo.n, geo.acms.zeta
    s, s_ac = geo.curv.s, pkg.s_ac
    ric_zz = z @ geo.curv.ric @ z
    x = ledger.xi_parts
    uni = is_unimodular(geo)
    flat = geo.m > 3 and is_conformally_flat(geo.curv, geo.m, geo.tol * geo.scale)
    einstein = is_einstein(geo)

    checks = [
        IdentityCheck("F-identity",
                      ledger.dF / 3 + 2 * ledger.d_star_F - ledger.nabla_F,
                      2 * (s - s_ac - ric_zz), uni),
        IdentityCheck("eta-identity",
                      ledger.d_eta / 2 + ledger.d_star_eta - ledger.nabla_eta, ric_zz, uni),
    ]
    eq1 = (8 * x[1] - 4 * x[2] + x[5] + (2 * n - 1) * x[6] - x[7] + x[8] - x[9] - x[10]
           - 4 * x[11] - x[12] + ledger.mixed["dF_10_11_inner"]
           + 2 * ledger.mixed["d_star_F_4_12_inner"])
    eq2 = (2 * n - 1) * x[5] + x[6] + x[7] - x[8] - x[9] + x[10]
    checks.append(IdentityCheck("torsion form of the F-identity", eq1, 2 * (s - s_ac - ric_zz), uni))
    checks.append(IdentityCheck("torsion form of the eta-identity", eq2, 2 * ric_zz, uni))
    minimiser_ok = uni and flat and n > 1
    lhs = s * 2 * (n - 1) / (2 * n - 1)
    checks.append(IdentityCheck("conformally flat energy identity (as stated)",
                                minimiser_integrand(ledger, n, -1), lhs, False,
                                "evaluated only; the xi_12 weight consistent with the other identities is -1/2"))
    checks.append(IdentityCheck("conformally flat energy identity", minimiser_integrand(ledger, n, Fraction(-1, 2)),
                                lhs, minimiser_ok))
    checks.append(IdentityCheck("Einstein energy identity", eq2, 2 * s / (2 * n + 1), uni and einstein))
    return BochnerReport(tuple(checks), uni, flat, einstein)


@dataclass(frozen=True)
class EnergyDensity:
    bending: object
    energy: object


def bending_energy_density(geo: Geometry) -> EnergyDensity:
    """Per unit volume: bending ``|xi|^2 / 2`` and energy ``m / 2 + |xi|^2 / 2``."""
    b = ft.norm2(geo.xi) / 2
    return EnergyDensity(b, geo.m / 2 + b) if not geo.exact else EnergyDensity(b, b + ft.to_fraction(geo.m) / 2)
