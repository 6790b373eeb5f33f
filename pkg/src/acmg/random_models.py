"""Random metric Lie algebras and compatible structures for property testing.

Each generator takes a ``numpy.random.Generator`` and returns float data.
Families are chosen so that a characteristic direction with ``nabla_zeta zeta = 0``
is known in closed form, which is what the structures with ``xi_zeta = 0`` need.
"""
from __future__ import annotations

import numpy as np

from . import frame_tensor as ft
from .acms_core import AcmStructure, connection_matrices
from .lie_geometry import LieAlgebraModel, levi_civita
from .torsion import project_to_torsion_space, unitary_part

FAMILIES = ("semidirect", "nilpotent", "su2", "extension", "sum", "flat", "heisenberg_h1r", "heisenberg_hp1")


def random_orthogonal(rng, m):
    q, r = np.linalg.qr(rng.normal(size=(m, m)))
    return q * np.sign(np.diag(r))


def change_basis(c, Q):
    """Structure constants in the orthonormal frame ``e'_a = sum_b Q[b, a] e_b``."""
    return np.einsum("ai,bj,abd,dk->ijk", Q, Q, c, Q)


def standard_phi(m):
    """Complex structure pairing e_1 with e_2, e_3 with e_4, ...; kills the last vector."""
    M = np.zeros((m, m))
    for a in range(0, m - 1, 2):
        M[a + 1, a] = 1.0
        M[a, a + 1] = -1.0
    return M


def random_structure(rng, m, zeta=None):
    """Random (phi, zeta); if ``zeta`` is given only phi is random."""
    Q = random_orthogonal(rng, m)
    if zeta is not None:
        zeta = np.asarray(zeta, dtype=float)
        zeta = zeta / np.linalg.norm(zeta)
        # rotate so that the last column is zeta, keeping the rest random
        basis = np.column_stack([zeta, Q[:, : m - 1]])
        q, r = np.linalg.qr(basis)
        q = q * np.sign(np.diag(r))
        Q = np.column_stack([q[:, 1:], q[:, 0]])
    M = Q @ standard_phi(m) @ Q.T
    return AcmStructure(M, Q[:, -1].copy())


def _semidirect(rng, m):
    c = np.zeros((m, m, m))
    D = rng.normal(size=(m - 1, m - 1))
    c[0, 1:, 1:] = D.T  # [e_1, e_j] = sum_k D[k, j] e_k
    c[1:, 0, 1:] = -D.T
    return c, np.eye(m)[0]


def _nilpotent(rng, m):
    k = max(1, m // 3)
    a = m - k
    c = np.zeros((m, m, m))
    for i in range(a):
        for j in range(i + 1, a):
            v = rng.normal(size=k)
            c[i, j, a:] = v
            c[j, i, a:] = -v
    z = np.zeros(m)
    z[a:] = rng.normal(size=k)
    return c, z / np.linalg.norm(z)


def _su2(rng, m):
    c = np.zeros((m, m, m))
    lam = rng.uniform(0.5, 2.0)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = lam
        c[j, i, k] = -lam
    z = rng.normal(size=m)
    return c, z / np.linalg.norm(z)


def derivations(c):
    """Orthonormal basis of the derivation algebra; ``D[a, b]`` is the e_a-component of ``D e_b``."""
    m = c.shape[0]
    eye = np.eye(m)
    # D[e_i, e_j] - [D e_i, e_j] - [e_i, D e_j] = 0, linear in the entries D[a, b]
    L = (np.einsum("ijb,ka->ijkab", c, eye)
         - np.einsum("ajk,bi->ijkab", c, eye)
         - np.einsum("iak,bj->ijkab", c, eye))
    _, s, vt = np.linalg.svd(L.reshape(m ** 3, m * m))
    rank = int(np.sum(s > 1e-10 * max(1.0, s[0])))
    return vt[rank:].reshape(-1, m, m)


def _extension(rng, m):
    """``R e_0`` acting on a random non-abelian ideal by a random derivation."""
    inner, _ = (_su2 if m >= 4 and rng.random() < 0.5 else _nilpotent)(rng, m - 1)
    basis = derivations(inner)
    D = np.einsum("k,kab->ab", rng.normal(size=len(basis)), basis)
    c = np.zeros((m, m, m))
    c[1:, 1:, 1:] = inner
    c[0, 1:, 1:] = D.T  # [e_0, e_i] = D e_i
    c[1:, 0, 1:] = -D.T
    return c, np.eye(m)[0]


def _sum(rng, m):
    """Orthogonal direct sum of two random pieces; zeta mixes their geodesic directions."""
    m1 = int(rng.integers(2, m - 1))
    parts = []
    for k in (m1, m - m1):
        choices = [_extension, _nilpotent] + ([_su2] if k >= 3 else [])
        parts.append(choices[rng.integers(len(choices))](rng, k))
    c = np.zeros((m, m, m))
    c[:m1, :m1, :m1] = parts[0][0]
    c[m1:, m1:, m1:] = parts[1][0]
    a = rng.uniform(0.2, 1.0)
    z = np.concatenate([a * parts[0][1], np.sqrt(1 - a * a) * parts[1][1]])
    return c, z


def _flat(rng, m):
    """Euclidean motions e(2) times an abelian factor: flat and unimodular."""
    c = np.zeros((m, m, m))
    t = rng.uniform(0.5, 2.0)
    c[0, 1, 2], c[1, 0, 2] = t, -t
    c[0, 2, 1], c[2, 0, 1] = -t, t
    return c, np.eye(m)[0]


def _h1r(rng, m):
    r = (m - 1) // 2
    c = np.zeros((m, m, m))
    for i in range(r):
        c[i, m - 1, r + i] = 1.0
        c[m - 1, i, r + i] = -1.0
    return c, np.eye(m)[-1]


def _hp1(rng, m):
    p = (m - 1) // 2
    c = np.zeros((m, m, m))
    for i in range(p):
        c[i, p + i, m - 1] = 1.0
        c[p + i, i, m - 1] = -1.0
    return c, np.eye(m)[-1]


_BUILDERS = {"semidirect": _semidirect, "nilpotent": _nilpotent, "su2": _su2, "extension": _extension,
             "sum": _sum, "flat": _flat,
             "heisenberg_h1r": _h1r, "heisenberg_hp1": _hp1}


def random_lie_algebra(rng, m, family=None, rotate=True):
    """Random metric Lie algebra of dimension ``m`` and a unit ``zeta`` with ``nabla_zeta zeta = 0``."""
    if family is None:
        usable = [f for f in FAMILIES if not (f == "sum" and m < 4)]
        family = usable[rng.integers(len(usable))]
    if family == "sum" and m < 4:
        raise ValueError("sum family needs m >= 4")
    if family == "su2" and m < 3:
        raise ValueError("su2 family needs m >= 3")
    c, zeta = _BUILDERS[family](rng, m)
    if rotate and family not in ("heisenberg_h1r", "heisenberg_hp1"):
        Q = random_orthogonal(rng, m)
        c = change_basis(c, Q)
        zeta = Q.T @ zeta
    return LieAlgebraModel(f"random-{family}", c), zeta


def _commuting_complex_structure(rng, B, basis):
    """Complex structure on span(basis) commuting with the skew map B (given in that basis)."""
    k = B.shape[0]
    S = -B @ B
    w, V = np.linalg.eigh((S + S.T) / 2)
    J = np.zeros((k, k))
    top = max(1.0, float(np.max(np.abs(w))) if k else 1.0)
    kernel = w < 1e-10 * top
    if np.any(~kernel & (w < 1e-4 * top)):
        raise ValueError("nearly degenerate rotation; resample")
    if np.any(~kernel):
        Vn = V[:, ~kernel]
        root_inv = Vn @ np.diag(1.0 / np.sqrt(w[~kernel])) @ Vn.T
        J0 = B @ root_inv  # sends each invariant plane to itself
        # flip orientation on random eigenspaces, clustering nearly equal eigenvalues
        idx = np.flatnonzero(~kernel)
        signs = np.ones(k)
        start = 0
        for stop in range(1, len(idx) + 1):
            if stop == len(idx) or w[idx[stop]] - w[idx[stop - 1]] > 1e-6 * max(1.0, w[idx[stop]]):
                if rng.random() < 0.5:
                    signs[idx[start:stop]] = -1.0
                start = stop
        Sg = V @ np.diag(signs) @ V.T
        J = J0 @ Sg
    if np.any(kernel):
        Vk = V[:, kernel]
        q = random_orthogonal(rng, Vk.shape[1])
        J = J + Vk @ q @ standard_phi(Vk.shape[1] + 1)[:-1, :-1] @ q.T @ Vk.T
    return basis @ J @ basis.T


def xi_zeta_free_structure(rng, model, zeta):
    """A structure with characteristic vector ``zeta`` and ``xi_zeta = 0``.

    Needs ``nabla_zeta zeta = 0``; phi is then chosen to commute with
    ``nabla_zeta`` on the contact distribution.
    """
    m = model.m
    gamma = levi_civita(model)
    L = np.einsum("x,xkj->kj", zeta, connection_matrices(gamma))
    if np.max(np.abs(L @ zeta)) > 1e-9:
        raise ValueError("zeta is not a geodesic direction")
    q, _ = np.linalg.qr(np.column_stack([zeta, rng.normal(size=(m, m - 1))]))
    basis = q[:, 1:]
    B = basis.T @ L @ basis
    M = _commuting_complex_structure(rng, (B - B.T) / 2, basis)
    return AcmStructure(M, zeta.copy())


def random_xi_zeta_free(rng, m, families=("sum", "extension", "su2", "nilpotent", "semidirect"),
                        attempts=20):
    """Random (model, structure) with ``xi_zeta = 0``, resampling ill-conditioned draws."""
    for _ in range(attempts):
        fam = families[rng.integers(len(families))]
        if (fam == "su2" and m < 3) or (fam == "sum" and m < 4):
            continue
        model, zeta = random_lie_algebra(rng, m, fam)
        try:
            return model, xi_zeta_free_structure(rng, model, zeta)
        except ValueError:
            continue
    raise RuntimeError("could not draw a well-conditioned structure")


def random_torsion(rng, acms):
    """Random element of the intrinsic torsion space."""
    m = acms.m
    raw = rng.normal(size=(m, m, m))
    raw = (raw - np.swapaxes(raw, 1, 2)) / 2
    return project_to_torsion_space(raw, acms)


def random_unitary_rotation(rng, acms):
    """Random element of U(n)x1 (commutes with phi, fixes zeta), via a Cayley transform."""
    m = acms.m
    A = rng.normal(size=(m, m))
    A = unitary_part((A - A.T) / 2, acms)
    eye = np.eye(m)
    return np.linalg.solve(eye - A, eye + A)


def heisenberg_block(rng, r, kind="generic"):
    """A 2r x 2r orthogonal complex structure of the requested Heisenberg family.

    Writing it as [[A, B], [C, D]] in r x r blocks: ``"sym"`` has C symmetric and
    D = A, ``"c0"`` has C = 0 and D = A, ``"a0"`` has C symmetric and A = D = 0,
    ``"lambda"`` is C = +-I with the rest zero, and ``"generic"`` is unrestricted.
    """
    if kind == "generic":
        Q = random_orthogonal(rng, 2 * r)
        return Q @ standard_phi(2 * r + 1)[:-1, :-1] @ Q.T
    if kind == "lambda":
        lam = 1.0 if rng.random() < 0.5 else -1.0
        A, C = np.zeros((r, r)), lam * np.eye(r)
    elif kind == "c0":
        q = random_orthogonal(rng, r) if r % 2 == 0 else None
        if q is None:
            raise ValueError("C = 0 family needs even r")
        A, C = q @ standard_phi(r + 1)[:-1, :-1] @ q.T, np.zeros((r, r))
    elif kind in ("sym", "a0", "traceless"):
        if kind == "a0":
            q = random_orthogonal(rng, r)
            signs = np.where(rng.random(r) < 0.5, -1.0, 1.0)
            A, C = np.zeros((r, r)), q @ np.diag(signs) @ q.T
        else:
            U = np.linalg.qr(rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r)))[0]
            signs = np.where(rng.random(r) < 0.5, -1.0, 1.0)
            if kind == "traceless":
                if r % 2:
                    raise ValueError("trace-free family needs even r")
                signs = np.array([1.0, -1.0] * (r // 2))
            H = U @ np.diag(signs) @ U.conj().T
            A, C = -H.imag, H.real
    else:
        raise ValueError(f"unknown family {kind!r}")
    return np.block([[A, -C.T], [C, A]])
