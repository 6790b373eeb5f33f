"""Harmonicity of almost contact metric structures and the identities behind it.

Every routine takes a :class:`~acmg.pipeline.Geometry`.  Endomorphisms are
passed around in form convention ``E[j, k] = <E e_j, e_k>``; the matrix acting
on column vectors is ``E.T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import frame_tensor as ft
from .acms_core import covariant_derivative, rough_laplacian, rough_laplacian_endomorphism
from .pipeline import Geometry
from .torsion import unitary_part


class HarmonicityError(RuntimeError):
    """Two computations that must agree by a theorem did not."""


class ConventionError(RuntimeError):
    """A tensor failed a symmetry it has under the sign conventions in use."""


def _check(geo: Geometry, value, what, scale=None):
    if not geo.close(value, geo.scale if scale is None else scale):
        raise HarmonicityError(f"{what} (residual {ft.maxabs(value):.3g})")


# -- co-derivative of the torsion ------------------------------------------

@dataclass(frozen=True)
class CoderivativeResult:
    d_star_xi: np.ndarray
    dual_residual: float
    unitary_residual: float


def coderivative_torsion(geo: Geometry) -> CoderivativeResult:
    """``d*xi = -(nabla_{e_i} xi)_{e_i}``, checked against the minimal-connection form."""
    xi = geo.xi
    via_lc = -ft.einsum("aajk->jk", covariant_derivative(geo.gamma, xi))
    via_u = -ft.einsum("aajk->jk", geo.nabla_u_xi) - geo.xi_along(geo.xi_trace)
    dual = ft.maxabs(via_lc - via_u)
    _check(geo, via_lc - via_u, "the two co-derivative formulas disagree")
    un = ft.maxabs(unitary_part(via_lc.T, geo.acms))
    _check(geo, unitary_part(via_lc.T, geo.acms), "co-derivative has a u(n) part")
    return CoderivativeResult(via_lc, dual, un)


def nu_form(xi, R):
    """``nu(X) = <xi_{e_i}, R_{e_i, X}>`` with the full entrywise pairing."""
    return ft.einsum("icd,ixcd->x", xi, R)


# -- almost contact Ricci tensor -------------------------------------------

@dataclass(frozen=True)
class RicAcPackage:
    ric_ac: np.ndarray
    ric_ac_alt: np.ndarray
    s_ac: object
    zeta_row: np.ndarray


def ricci_ac(geo: Geometry) -> RicAcPackage:
    """``Ric^ac(X, Y) = <R_{e_i, X} phi e_i, phi Y>``."""
    R, M, z = geo.curv.R, geo.acms.phi, geo.acms.zeta
    A = ft.einsum("ixab,ai,by->xy", R, M, M)
    P = geo.acms.projector()
    if not geo.close(M.T @ A @ M - P @ A.T @ P, geo.scale):
        raise ConventionError("Ric^ac(phi X, phi Y) != Ric^ac(Y, X) on the contact distribution")
    if not geo.close(A @ z, geo.scale):
        raise ConventionError("Ric^ac(X, zeta) does not vanish")
    return RicAcPackage(A, (A - A.T) / 2, np.trace(A), z @ A)


def weakly_ac_einstein(geo: Geometry, pkg: RicAcPackage | None = None) -> bool:
    """Left-invariant data have constant s^ac, so this is also the ac-Einstein test."""
    pkg = pkg or ricci_ac(geo)
    target = geo.acms.projector() * (pkg.s_ac / (2 * geo.n))
    return geo.close(pkg.ric_ac - target, geo.scale)


# -- exterior data used in several places ----------------------------------

def d_star(gamma, T):
    """``d*T(X) = -sum_i (nabla_{e_i} T)(e_i, X)`` for a 1- or 2-tensor."""
    D = covariant_derivative(gamma, T)
    return -ft.einsum("ii...->...", D)


def d_star_transposed(gamma, T):
    """``d*`` of ``T^t``, i.e. ``-sum_i (nabla_{e_i} T)(X, e_i)``."""
    return -ft.einsum("ixi->x", covariant_derivative(gamma, T))


@dataclass(frozen=True)
class CharacteristicContractions:
    xi_phi_trace: np.ndarray  # sum_i xi_{e_i} phi e_i
    xi_trace: np.ndarray  # sum_i xi_{e_i} e_i
    residuals: dict


def characteristic_contractions(geo: Geometry) -> CharacteristicContractions:
    M, z, xi = geo.acms.phi, geo.acms.zeta, geo.xi
    w = ft.einsum("ai,iak->k", M, xi)
    v = geo.xi_trace
    dF = d_star(geo.gamma, geo.F)
    deta = d_star(geo.gamma, z)
    nzz = z @ geo.nabla_eta
    r1 = -2 * w - (dF + (dF @ z) * z + M @ nzz)
    r2 = -2 * v - (M @ dF + 2 * deta * z + nzz)
    res = {"phi-trace": ft.maxabs(r1), "trace": ft.maxabs(r2)}
    _check(geo, r1, "contraction identity for xi_{e_i} phi e_i fails")
    _check(geo, r2, "contraction identity for xi_{e_i} e_i fails")
    return CharacteristicContractions(w, v, res)


# -- the seven equivalent harmonicity conditions ---------------------------

PANEL_NAMES = ("i", "ii", "iii", "iv", "v", "vi", "vii")


@dataclass(frozen=True)
class HarmonicityVerdict:
    d_star_xi: np.ndarray
    is_harmonic: bool
    nu: np.ndarray
    is_harmonic_map: bool
    condition_panel: dict
    panel_residuals: dict = field(default_factory=dict)


def _xi_square(geo, T):
    """``sum_i xi_{e_i}(xi_{e_i} T)`` for a covariant tensor."""
    out = None
    for i in range(geo.m):
        term = ft.act(geo.xi[i], ft.act(geo.xi[i], T))
        out = term if out is None else out + term
    return out


def panel_residuals(geo: Geometry, dxi=None) -> dict:
    """Residual of each of the seven conditions; zero means the condition holds."""
    M, z = geo.acms.phi, geo.acms.zeta
    P = geo.acms.projector()
    if dxi is None:
        dxi = coderivative_torsion(geo).d_star_xi
    lap_phi = rough_laplacian_endomorphism(geo.gamma, M)
    lap_F = rough_laplacian(geo.gamma, geo.F)
    lap_zeta = rough_laplacian(geo.gamma, z)
    xi2_eta = _xi_square(geo, z)
    zeta_cond = ft.maxabs(lap_zeta + xi2_eta)
    res = {"i": ft.maxabs(dxi)}

    Lp = P @ lap_phi @ P
    res["ii"] = max(ft.maxabs(Lp @ M - M @ Lp), zeta_cond)

    lhs = lap_phi @ M - M @ lap_phi
    rhs = 3 * np.multiply.outer(lap_zeta, z) - 3 * np.multiply.outer(z, lap_zeta)
    res["iii"] = max(ft.maxabs(lhs - rhs), zeta_cond)

    res["iv"] = max(ft.maxabs(M.T @ lap_F @ M - P @ lap_F @ P), zeta_cond)

    wedge = np.multiply.outer(z, M.T @ lap_zeta) - np.multiply.outer(M.T @ lap_zeta, z)
    res["v"] = max(ft.maxabs(M.T @ lap_F @ M - lap_F + 3 * wedge), zeta_cond)

    quad = ft.einsum("iab,bc,idc->ad", geo.xi, M, geo.xi)
    rhs = -4 * quad
    for i in range(geo.m):
        a = ft.act(geo.xi[i], z)
        rhs = rhs + np.multiply.outer(a, M.T @ a) - np.multiply.outer(M.T @ a, a)
    b = M.T @ xi2_eta
    rhs = rhs + np.multiply.outer(z, b) - np.multiply.outer(b, z)
    res["vi"] = max(ft.maxabs(lap_F - rhs), zeta_cond)

    V = ft.einsum("aajk->jk", geo.nabla_u_xi) + geo.xi_along(geo.xi_trace)
    res["vii"] = max(ft.maxabs(P @ V @ P), ft.maxabs(ft.act(V, z)))
    return res


def harmonicity_panel(geo: Geometry) -> HarmonicityVerdict:
    cod = coderivative_torsion(geo)
    res = panel_residuals(geo, cod.d_star_xi)
    tol = geo.tol * geo.scale
    panel = {k: v <= tol for k, v in res.items()}
    if len(set(panel.values())) != 1:
        detail = ", ".join(f"({k}) {res[k]:.3g}" for k in PANEL_NAMES)
        raise HarmonicityError(f"harmonicity conditions disagree: {detail}")
    harmonic = panel["i"]
    nu = nu_form(geo.xi, geo.curv.R)
    harmonic_map = harmonic and geo.close(nu, geo.scale)
    return HarmonicityVerdict(cod.d_star_xi, harmonic, nu, harmonic_map, panel, res)


def lapstaten_residuals(geo: Geometry) -> dict:
    """Rough Laplacian of each U(n)-invariant tensor versus its torsion expression."""
    T = ft.einsum("aajk->jk", geo.nabla_u_xi) + geo.xi_along(geo.xi_trace)
    M, z = geo.acms.phi, geo.acms.zeta

    def predicted(psi):
        return ft.act(T, psi) - _xi_square(geo, psi)

    out = {}
    out["F"] = ft.maxabs(rough_laplacian(geo.gamma, geo.F) - predicted(geo.F))
    out["eta"] = ft.maxabs(rough_laplacian(geo.gamma, z) - predicted(z))
    # phi and zeta through the endomorphism/vector actions
    Tm = T.T
    pred_phi = Tm @ M - M @ Tm
    for i in range(geo.m):
        E = geo.xi[i].T
        inner = E @ M - M @ E
        pred_phi = pred_phi - (E @ inner - inner @ E)
    out["phi"] = ft.maxabs(rough_laplacian_endomorphism(geo.gamma, M) - pred_phi)
    pred_zeta = Tm @ z - sum(geo.xi[i].T @ (geo.xi[i].T @ z) for i in range(geo.m))
    out["zeta"] = ft.maxabs(rough_laplacian(geo.gamma, z) - pred_zeta)
    return out


def skew_torsion_check(geo: Geometry, verdict: HarmonicityVerdict | None = None) -> dict:
    """Totally skew torsion forces harmonic structures to be harmonic maps."""
    xi = geo.xi
    skew = geo.close(xi + np.swapaxes(xi, 0, 1))
    out = {"skew": skew, "consistent": True}
    if skew:
        verdict = verdict or harmonicity_panel(geo)
        if verdict.is_harmonic and not verdict.is_harmonic_map:
            out["consistent"] = False
            raise HarmonicityError("skew torsion and harmonic, but not a harmonic map")
    return out


# -- class-by-class criteria -----------------------------------------------

def _types(*groups):
    return [frozenset(g) for g in groups]


@dataclass(frozen=True)
class CriterionResult:
    case: str
    applies: bool
    criterion: bool | None
    verdict: bool | None
    note: str = ""
    corrected: bool | None = None

    @property
    def consistent(self) -> bool:
        """The criterion as stated agrees with the harmonicity verdict."""
        return not self.applies or self.criterion == self.verdict

    @property
    def corrected_consistent(self) -> bool:
        """Same, with the commutator term restored in ``Ric^ac``."""
        return not self.applies or self.corrected == self.verdict


def commutator_term(geo: Geometry):
    """The 2-tensor ``act(K, F)`` with ``K = sum_i [xi_{e_i}, xi_{phi e_i}]``.

    It is the piece of ``Ric^ac_alt`` that the divergence of ``phi xi`` does not
    account for; it vanishes whenever xi_{e_i} and xi_{phi e_i} commute on average.
    """
    M, xi = geo.acms.phi, geo.xi
    E = ft.einsum("ai,ajk->ijk", M, xi)
    K = sum(xi[i].T @ E[i].T - E[i].T @ xi[i].T for i in range(geo.m))
    return ft.act(K.T, M)


def _criteria_data(geo, pkg, corrected=False):
    P, z = geo.acms.projector(), geo.acms.zeta
    xi_v = geo.xi_along(geo.xi_trace)
    r_alt, r_z = P @ pkg.ric_ac_alt @ P, pkg.zeta_row
    if corrected:
        KF = commutator_term(geo)
        r_alt = r_alt - P @ KF @ P / 4
        r_z = r_z - z @ KF / 2
    return {
        "r_alt": r_alt,
        "r_z": r_z,
        "Q": P @ xi_v @ P,
        "q": z @ xi_v,
        "P": P,
    }


def class_criteria_check(geo: Geometry, verdict: HarmonicityVerdict | None = None,
                         pkg: RicAcPackage | None = None) -> list:
    """Evaluate every type-specific harmonicity criterion that applies to this structure.

    Each criterion is evaluated twice: with ``Ric^ac`` as it is, and with the
    commutator term (see :func:`commutator_term`) removed first.
    """
    verdict = verdict or harmonicity_panel(geo)
    pkg = pkg or ricci_ac(geo)
    stated = _criteria_cases(geo, _criteria_data(geo, pkg))
    fixed = _criteria_cases(geo, _criteria_data(geo, pkg, corrected=True))
    active = geo.signature.active
    out = []
    for (name, types, bad_n, crit), (_, _, _, crit2) in zip(stated, fixed):
        if bad_n is not None and geo.n == bad_n:
            out.append(CriterionResult(name, False, None, None, f"not stated for n = {bad_n}"))
            continue
        if not any(active <= t for t in types):
            out.append(CriterionResult(name, False, None, None, "type hypothesis not met"))
            continue
        out.append(CriterionResult(name, True, bool(crit()), verdict.is_harmonic, corrected=bool(crit2())))
    return out


def _criteria_cases(geo, d):
    n = geo.n
    ok = lambda x: geo.close(x, geo.scale)
    r_alt, r_z, Q, q = d["r_alt"], d["r_z"], d["Q"], d["q"]

    cases = [
        ("(i)", _types({1, 2, 5, 6, 7, 8}, {1, 2, 9, 10}), None,
         lambda: ok(r_alt) and ok(r_z)),
        ("(ii)", _types({1, 4, 5, 6, 7, 8}), 2,
         lambda: ok((n - 1) * (n - 5) * r_alt - 2 * (n + 1) * (n - 3) * Q) and ok(r_z + 2 * q)),
        ("(iii)", _types({1, 4, 9, 10}), 2,
         lambda: ok((n - 1) * (n - 5) * r_alt - 2 * (n + 1) * (n - 3) * Q) and ok(r_z - 2 * q @ d["P"])),
        ("(iv)", _types({2, 4, 5, 6, 7, 8}), 2,
         lambda: ok((n - 1) * r_alt - 2 * n * Q) and ok(r_z + 2 * q)),
        ("(v)", _types({2, 4, 9, 10}), 2,
         lambda: ok((n - 1) * r_alt - 2 * n * Q) and ok(r_z - 2 * q)),
        ("(vi)", _types({3, 4, 5, 6, 7, 8}), None,
         lambda: ok(r_alt + 2 * Q) and ok(r_z + 2 * q)),
        ("(vii)", _types({3, 4, 9, 10}), None,
         lambda: ok(r_alt + 2 * Q) and ok(r_z - 2 * q)),
        ("(viii)", _types({1, 5, 9}, {1, 6, 8}), None, lambda: ok(r_z)),
        ("(ix)", _types({4, 5, 6}, {4, 5, 7}, {4, 5, 9}, {4, 8}), 2, lambda: ok(r_z)),
        ("(i)*", _types({1, 5}, {1, 8}, {1, 9}, {3, 6}, {3, 7}, {3, 10}, {5, 6, 7}, {5, 8},
                        {5, 9}, {5, 10}, {6, 7, 8}, {6, 7, 10}, {8, 9}, {9, 10}), None, lambda: True),
        ("(ii)*", _types({4, 5}, {4, 6}, {4, 7}, {4, 9}), 2, lambda: True),
    ]
    return cases


def map_criteria_check(geo: Geometry, verdict: HarmonicityVerdict | None = None,
                       pkg: RicAcPackage | None = None) -> list:
    """Evaluate the harmonic-map criteria; left-invariance makes ``ds^ac = 0``."""
    verdict = verdict or harmonicity_panel(geo)
    pkg = pkg or ricci_ac(geo)
    active = geo.signature.active
    n, M, z = geo.n, geo.acms.phi, geo.acms.zeta
    A, s_ac = pkg.ric_ac, pkg.s_ac
    ok = lambda x: geo.close(x, geo.scale)
    v = geo.xi_trace
    dRic = d_star(geo.gamma, A)
    dRic_t = d_star_transposed(geo.gamma, A)
    d_eta = d_star(geo.gamma, z)
    dF_z = d_star(geo.gamma, geo.F) @ z
    einstein = weakly_ac_einstein(geo, pkg)
    symmetric = ok(A - A.T)
    xi_v = geo.xi_along(v)
    harm = verdict.is_harmonic
    within = lambda *groups: any(active <= g for g in _types(*groups))

    general_ii = (2 * dRic_t + 4 * (A @ v) - 4 * ft.einsum("yz,xyz->x", A, geo.xi)
                  + 2 * dF_z * (M.T @ pkg.zeta_row))
    cases = [
        ("(i)", within({1, 2, 5, 6, 7, 8}, {1, 2, 9, 10}), lambda: harm and ok(2 * dRic)),
        ("(i)(a)", within({1, 2, 5, 6, 7, 8}) and einstein, lambda: harm and ok(s_ac * d_eta)),
        ("(i)(b)", within({1, 2, 9, 10}, {1, 2, 6, 7, 8}) and einstein, lambda: True),
        ("(i)(c)", within({1}), lambda: True),
        ("(ii)", within({3, 4, 5, 6, 7, 8}, {3, 4, 9, 10}), lambda: harm and ok(general_ii)),
        ("(ii)(a*)", within({3, 4, 5, 6, 7, 8}, {3, 4, 9, 10}) and symmetric,
         lambda: harm and ok(xi_v) and ok(2 * dRic + 4 * (v @ A))),
        ("(ii)(a*) ac-Einstein", within({3, 4, 5, 6, 7, 8}, {3, 4, 9, 10}) and einstein,
         lambda: harm and ok(xi_v) and ok(-s_ac * d_eta * z + 2 * s_ac * v)),
        ("(ii)(b*)", within({3, 6}, {3, 7}, {3, 10}), lambda: harm and ok(dRic)),
        ("(ii)(c*)", n != 2 and within({4, 5}, {4, 6}, {4, 7}, {4, 9}),
         lambda: harm and ok(2 * dRic + 4 * (v @ A))),
    ]
    out = []
    for name, applies, crit in cases:
        if not applies:
            out.append(CriterionResult(name, False, None, None, "type hypothesis not met"))
        else:
            out.append(CriterionResult(name, True, bool(crit()), verdict.is_harmonic_map))
    return out


# -- the U(n)-maps into curvature tensors ----------------------------------

def _sym2(a, b):
    """Symmetric product of two 2-forms as a 4-tensor."""
    return (np.multiply.outer(a, b) + np.multiply.outer(b, a)) / 2


def phi_weyl_map_1(b, acms):
    """Curvature tensor with ``Ric = 0`` and ``Ric^ac = b`` for an anti-Hermitian 2-form ``b``."""
    n = acms.n
    if n < 2:
        raise ValueError("the map needs n > 1")
    M = acms.phi
    pb = -(M.T @ b) - b @ M
    return -(6 * _sym2(pb, M) - ft.wedge(pb, M)) / (4 * (n + 1))


def phi_weyl_map_2(theta, acms):
    """Curvature tensor with ``Ric = 0`` and ``Ric^ac`` proportional to ``eta (x) theta``."""
    n = acms.n
    if n < 2:
        raise ValueError("the map needs n > 1")
    M, z = acms.phi, acms.zeta
    g = ft.eye(acms.m, acms.exact)
    a = np.multiply.outer(z, M.T @ theta) - np.multiply.outer(M.T @ theta, z)
    sym = (np.multiply.outer(z, theta) + np.multiply.outer(theta, z)) / 2
    return 6 * _sym2(a, M) - ft.wedge(a, M) - ft.kulkarni_nomizu(sym, g) * 6 / (2 * n - 1)


def ricci_of(R):
    return ft.einsum("ixiy->xy", R)


def ricci_ac_of(R, acms):
    M = acms.phi
    return ft.einsum("ixab,ai,by->xy", R, M, M)


# -- identities coming from the structure equations ------------------------

def _restricted(geo, a):
    P = geo.acms.projector()
    return P @ a @ P


def verify_structure_lemmas(geo: Geometry, pkg: RicAcPackage | None = None) -> dict:
    """Residuals of the curvature/torsion identities; a value of ``None`` means skipped."""
    pkg = pkg or ricci_ac(geo)
    M, z, xi, n = geo.acms.phi, geo.acms.zeta, geo.xi, geo.n
    P = geo.acms.projector()
    D = geo.nabla_u_xi
    out = {}

    W = ft.einsum("ai,iajk->jk", M, D)
    w = ft.einsum("ai,iak->k", M, xi)
    Xw = geo.xi_along(w)
    out["ric_ac_alt"] = ft.maxabs(_restricted(geo, pkg.ric_ac_alt) - _restricted(geo, M.T @ (W + Xw)))
    out["ric_ac_zeta"] = ft.maxabs(pkg.zeta_row - M.T @ (z @ (W + Xw)))
    KF = commutator_term(geo)
    out["ric_ac_alt_corrected"] = ft.maxabs(
        _restricted(geo, pkg.ric_ac_alt) - _restricted(geo, M.T @ (W + Xw) + KF / 4))
    out["ric_ac_zeta_corrected"] = ft.maxabs(pkg.zeta_row - M.T @ (z @ (W + Xw)) - (z @ KF) / 2)
    if n > 1 and geo.m > 3:
        from .lie_geometry import is_conformally_flat
        if is_conformally_flat(geo.curv, geo.m, geo.tol * geo.scale):
            out["conformally_flat_alt"] = ft.maxabs(pkg.ric_ac_alt)

    xi_zeta = ft.einsum("a,ajk->jk", z, xi)
    if not geo.close(xi_zeta):
        for key in ("lemma_unitary", "lemma_eta", "lemma_eta_reduced", "ricci_divergence"):
            out[key] = None
        return out

    comps = geo.components.comps
    T = {k: ft.einsum("aajk->jk", covariant_derivative(geo.gamma_u, comps[k])) for k in range(1, 11)}
    B = {k: ft.einsum("j,ijy->iy", z, comps[k]) for k in range(1, 11)}
    v4 = ft.einsum("iik->k", comps[4])
    along = lambda k, v: ft.einsum("l,ljk->jk", v, comps[k])

    def cross(a, b):
        t = ft.einsum("xik,iyk->xy", comps[a], comps[b])
        return t - t.T

    expr = 3 * T[1] - T[3] + (n - 2) * T[4] + cross(3, 1) + cross(3, 2)
    if n > 1:
        expr = expr - along(1, v4) * (n - 5) / (n - 1) - along(2, v4) * (n - 2) / (n - 1)
    expr = expr + along(3, v4)
    bw = lambda a, b: B[a].T @ B[b] - B[b].T @ B[a]
    expr = expr + (n - 2) * bw(5, 10) - 2 * bw(8, 10) + (n - 2) * bw(6, 10) - 2 * bw(7, 10)
    out["lemma_unitary"] = ft.maxabs(_restricted(geo, expr))

    te = lambda k: z @ T[k]
    pair = lambda a, b: ft.einsum("il,iyl->y", B[a], comps[b])
    expr = (-te(5) - 3 * te(6) - 3 * te(7) - te(8) + 3 * te(9) + te(10)
            - pair(6, 1) - pair(7, 1) - pair(10, 1) - pair(6, 2) - pair(7, 2) + pair(10, 2)
            + pair(5, 3) + pair(8, 3) + pair(9, 3) - v4 @ B[10])
    if n > 1:
        expr = expr + (v4 @ B[8]) * n / (n - 1)
    out["lemma_eta"] = ft.maxabs(expr @ P)

    if geo.signature.active <= frozenset(range(5, 11)):
        e1 = (n - 1) * T[5] + 2 * T[6] + 2 * T[7] - T[8] - 2 * T[9] + T[10]
        e2 = (n - 2) * T[5] - T[6] - T[7] - 2 * T[8] + T[9] + 2 * T[10]
        out["lemma_eta_reduced"] = max(ft.maxabs((z @ e1) @ P), ft.maxabs((z @ e2) @ P))
    else:
        out["lemma_eta_reduced"] = None

    A = pkg.ric_ac
    v = geo.xi_trace
    lhs = 2 * d_star_transposed(geo.gamma, A)
    E = ft.einsum("ai,ajk->ijk", M, xi)  # E[i] = xi_{phi e_i} in form convention
    first = ft.einsum("ixcd,bc,ibd->x", geo.curv.R, M, E)
    dF_z = d_star(geo.gamma, geo.F) @ z
    rhs = (2 * first - 4 * (A @ v) + 4 * ft.einsum("yz,xyz->x", A, xi)
           - 2 * dF_z * (M.T @ pkg.zeta_row))
    out["ricci_divergence"] = ft.maxabs(lhs - rhs)
    return out


def phi_map_residuals(acms, b, theta) -> dict:
    """Residuals of the defining properties of the two maps for a sample ``b``, ``theta``.

    ``b`` is projected to an anti-Hermitian 2-form on the contact distribution and
    ``theta`` to a horizontal covector before use.
    """
    P, z, n = acms.projector(), acms.zeta, acms.n
    b = P @ (b - b.T) @ P / 2
    b = b - unitary_part(b, acms)
    theta = P @ theta
    out = {}
    for name, R in (("map 1", phi_weyl_map_1(b, acms)), ("map 2", phi_weyl_map_2(theta, acms))):
        out[f"{name}: Ric = 0"] = ft.maxabs(ricci_of(R))
        out[f"{name}: Bianchi"] = ft.maxabs(R + ft.einsum("xyzw->yzxw", R) + ft.einsum("xyzw->zxyw", R))
        if name == "map 1":
            out["map 1: Ric^ac = b"] = ft.maxabs(ricci_ac_of(R, acms) - b)
        else:
            coeff = 4 * (n * n - 1)
            out["map 2: Ric^ac = c eta (x) theta"] = ft.maxabs(
                ricci_ac_of(R, acms) - np.multiply.outer(z, theta) * coeff / (2 * n - 1))
    return out
