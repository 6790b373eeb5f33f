"""Intrinsic U(n)-torsion and its splitting into twelve orthogonal pieces.

``xi[x, j, k] = <xi_{e_x} e_j, e_k>``.  The endomorphism ``xi_{e_x}`` therefore
has matrix ``xi[x].T``.  The minimal connection is ``gamma + xi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import frame_tensor as ft
from .acms_core import AcmStructure, covariant_derivative, nabla_endomorphism


class TorsionError(RuntimeError):
    """Internal consistency failure while computing or splitting the torsion."""


@dataclass(frozen=True)
class IntrinsicTorsion:
    xi: np.ndarray
    line_residual: float = 0.0
    membership_residual: float = 0.0


def membership_residual(xi, acms: AcmStructure) -> float:
    """Distance from the torsion space: skewness and the phi-compatibility identity."""
    M, z = acms.phi, acms.zeta
    worst = ft.maxabs(xi + np.swapaxes(xi, 1, 2))
    for x in range(xi.shape[0]):
        E = xi[x].T
        lhs = M @ E + E @ M
        rhs = np.multiply.outer(M @ E @ z, z) + np.multiply.outer(z, M.T @ E.T @ z)
        worst = max(worst, ft.maxabs(lhs - rhs))
    return worst


def _tol(acms, tolerance):
    return 0.0 if acms.exact else tolerance


def intrinsic_torsion(gamma, acms: AcmStructure, tolerance: float = 1e-9) -> IntrinsicTorsion:
    """Evaluate both closed forms of the torsion and insist that they agree."""
    M, z = acms.phi, acms.zeta
    dF = covariant_derivative(gamma, M)
    deta = covariant_derivative(gamma, z)
    dM = nabla_endomorphism(gamma, M)
    m = acms.m
    xi1 = ft.zeros((m, m, m), acms.exact)
    xi2 = ft.zeros((m, m, m), acms.exact)
    for x in range(m):
        E1 = -(M @ dF[x]) / 2 + np.multiply.outer(z, deta[x]) - np.multiply.outer(deta[x], z) / 2
        E2 = (dM[x] @ M) / 2 + np.multiply.outer(z, deta[x]) / 2 - np.multiply.outer(deta[x], z)
        xi1[x] = E1.T
        xi2[x] = E2.T
    line = ft.maxabs(xi1 - xi2)
    mem = membership_residual(xi1, acms)
    tol = _tol(acms, tolerance) * max(1.0, ft.maxabs(gamma))
    if line > tol:
        raise TorsionError(f"the two torsion formulas disagree (residual {line:.3g})")
    if mem > tol:
        raise TorsionError(f"torsion left the torsion space (residual {mem:.3g})")
    return IntrinsicTorsion(xi1, line, mem)


def minimal_connection(gamma, xi):
    return gamma + xi


def unitary_part(A, acms: AcmStructure):
    """Orthogonal projection of a skew matrix onto u(n) (commutes with phi, kills zeta)."""
    P, J = acms.projector(), acms.phi
    Ap = P @ A @ P
    return (Ap - J @ Ap @ J) / 2


def project_to_torsion_space(xi, acms: AcmStructure):
    """Remove from each ``xi_X`` its u(n) part; input slices must be skew."""
    out = xi.copy()
    for x in range(xi.shape[0]):
        E = xi[x].T
        out[x] = (E - unitary_part(E, acms)).T
    return out


COMPONENTS = tuple(range(1, 13))


@dataclass(frozen=True)
class TorsionComponents:
    comps: dict
    norms: dict
    total_norm: object
    alpha_kenmotsu: object = None
    alpha_sasakian: object = None
    residuals: dict = field(default_factory=dict)

    def __getitem__(self, i):
        return self.comps[i]


def _c_theta(theta, P, M):
    Mt = M.T @ theta
    return (np.multiply.outer(P, theta) - ft.einsum("xz,y->xyz", P, theta)
            - np.multiply.outer(M, Mt) + ft.einsum("xz,y->xyz", M, Mt))


def split(xi, acms: AcmStructure) -> dict:
    """Raw twelve-way split of a torsion tensor; no checking."""
    M, z, n = acms.phi, acms.zeta, acms.n
    P = acms.projector()
    exact = acms.exact
    m = acms.m
    comps = {}

    # block 1: X, Y, Z all horizontal
    cp = ft.einsum("ax,by,cz,abc->xyz", P, P, P, xi)
    cphi = ft.einsum("ax,by,abz->xyz", M, M, cp)
    p12 = (cp - cphi) / 2
    p34 = (cp + cphi) / 2
    c1 = (p12 + ft.einsum("yzx->xyz", p12) + ft.einsum("zxy->xyz", p12)) / 3
    comps[1] = c1
    comps[2] = p12 - c1
    if n > 1:
        theta = ft.einsum("aaz->z", p34)
        c4 = _c_theta(theta / (2 * (n - 1)), P, M)
    else:
        c4 = ft.zeros((m, m, m), exact)
    comps[4] = c4
    comps[3] = p34 - c4

    # block 2: horizontal X, the eta-valued part
    b = P @ ft.einsum("xay,a->xy", xi, z) @ P
    bphi = M.T @ b @ M
    bp, bm = (b + bphi) / 2, (b - bphi) / 2
    bp_sym, bp_skew = (bp + bp.T) / 2, (bp - bp.T) / 2
    bm_sym, bm_skew = (bm + bm.T) / 2, (bm - bm.T) / 2
    b5 = P * (np.trace(bp_sym) / (2 * n))
    b6 = M * (ft.inner(bp_skew, M) / (2 * n))
    parts = {5: b5, 8: bp_sym - b5, 9: bm_sym, 6: b6, 7: bp_skew - b6, 10: bm_skew}
    for i, bi in parts.items():
        comps[i] = ft.einsum("y,xz->xyz", z, bi) - ft.einsum("xy,z->xyz", bi, z)

    # block 3: xi_zeta restricted to the horizontal space
    d = P @ ft.einsum("a,ayz->yz", z, xi) @ P
    comps[11] = np.multiply.outer(z, d)

    # block 4: xi_zeta zeta
    e = ft.einsum("a,b,aby->y", z, z, xi)
    comps[12] = np.multiply.outer(z, np.multiply.outer(z, e) - np.multiply.outer(e, z))

    alpha_k = -np.trace(b5) / (2 * n)
    alpha_s = -ft.inner(b6, M) / (2 * n)
    return {"comps": comps, "alpha_kenmotsu": alpha_k, "alpha_sasakian": alpha_s}


def decompose(xi, acms: AcmStructure, tolerance: float = 1e-9, check: bool = True) -> TorsionComponents:
    raw = split(xi, acms)
    comps = raw["comps"]
    norms = {i: ft.norm2(comps[i]) for i in COMPONENTS}
    total = ft.norm2(xi)
    res = {}
    if check:
        tol = _tol(acms, tolerance) * max(1.0, ft.maxabs(xi) ** 2, float(total))
        recon = sum(comps[i] for i in COMPONENTS)
        res["completeness"] = ft.maxabs(recon - xi)
        res["orthogonality"] = max(
            abs(float(ft.inner(comps[i], comps[j]))) for i in COMPONENTS for j in COMPONENTS if i < j)
        res["membership"] = max(membership_residual(comps[i], acms) for i in COMPONENTS)
        bad = {k: v for k, v in res.items() if v > max(tol, _tol(acms, tolerance))}
        if bad:
            raise TorsionError("decomposition invariants fail: "
                               + ", ".join(f"{k}={v:.3g}" for k, v in bad.items()))
    return TorsionComponents(comps, norms, total, raw["alpha_kenmotsu"], raw["alpha_sasakian"], res)


NAMED_CLASSES = (
    ("cosymplectic", frozenset()),
    ("nearly-K-cosymplectic", frozenset({1})),
    ("alpha-Kenmotsu", frozenset({5})),
    ("alpha-Sasakian", frozenset({6})),
    ("trans-Sasakian", frozenset({5, 6})),
    ("almost cosymplectic", frozenset({2, 9})),
    ("quasi-Sasakian", frozenset({6, 7})),
    ("nearly-trans-Sasakian", frozenset({1, 5, 6})),
    ("quasi-K-cosymplectic", frozenset({1, 2, 9, 10})),
    ("normal", frozenset({3, 4, 5, 6, 7, 8})),
)


@dataclass(frozen=True)
class ClassSignature:
    active: frozenset
    labels: tuple
    alpha: dict = field(default_factory=dict)

    def names(self):
        return [f"C{i}" for i in sorted(self.active)]

    def within(self, allowed) -> bool:
        return self.active <= frozenset(allowed)


def class_signature(tc: TorsionComponents, tolerance: float = 1e-9) -> ClassSignature:
    total = float(tc.total_norm)
    floor = max(tolerance ** 2, tolerance ** 2 * total)
    active = frozenset(i for i in COMPONENTS if float(tc.norms[i]) > floor)
    labels = tuple(name for name, mods in NAMED_CLASSES if active <= mods)
    alpha = {}
    if active <= {5, 6}:
        if 5 in active or not active:
            alpha["alpha-Kenmotsu"] = tc.alpha_kenmotsu
        if 6 in active or not active:
            alpha["alpha-Sasakian"] = tc.alpha_sasakian
    return ClassSignature(active, labels, alpha)
