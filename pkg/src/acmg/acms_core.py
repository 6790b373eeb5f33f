"""Almost contact metric structures and derivatives of left-invariant tensors.

``phi`` is stored as the matrix ``M[l, k] = <e_l, phi e_k>`` (column ``k`` is
``phi e_k``).  With this layout the fundamental form ``F(X, Y) = <X, phi Y>``
has exactly the entries of ``M``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import frame_tensor as ft


class StructureError(ValueError):
    """The supplied (phi, zeta) is not an almost contact metric structure."""


@dataclass(frozen=True)
class AcmStructure:
    phi: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        m = self.zeta.shape[0] if np.ndim(self.zeta) == 1 else -1
        if m < 1 or np.shape(self.phi) != (m, m):
            raise StructureError(f"phi must be m x m and zeta of length m, got {np.shape(self.phi)} "
                                 f"and {np.shape(self.zeta)}")
        if m % 2 == 0:
            raise StructureError(f"dimension must be odd, got {m}")

    @property
    def eta(self) -> np.ndarray:
        return self.zeta

    @property
    def m(self) -> int:
        return self.zeta.shape[0]

    @property
    def n(self) -> int:
        return (self.m - 1) // 2

    @property
    def exact(self) -> bool:
        return ft.is_exact(self.phi)

    def astype(self, exact: bool) -> "AcmStructure":
        conv = ft.exact_array if exact else ft.float_array
        return AcmStructure(conv(self.phi), conv(self.zeta))

    def projector(self) -> np.ndarray:
        """Orthogonal projection onto the contact distribution ``zeta^perp``."""
        return ft.eye(self.m, self.exact) - np.multiply.outer(self.zeta, self.zeta)

    def transformed(self, Q) -> "AcmStructure":
        """Structure seen in the rotated frame ``e'_a = sum_b Q[b, a] e_b``."""
        return AcmStructure(Q.T @ self.phi @ Q, Q.T @ self.zeta)


def residuals(acms: AcmStructure) -> dict:
    M, z = acms.phi, acms.zeta
    I = ft.eye(acms.m, acms.exact)
    out = {
        "phi^2 = -I + eta(x)zeta": ft.maxabs(M @ M + I - np.multiply.outer(z, z)),
        "<phi X, phi Y> = <X, Y> - eta(X) eta(Y)": ft.maxabs(M.T @ M - I + np.multiply.outer(z, z)),
        "phi zeta = 0": ft.maxabs(M @ z),
        "eta o phi = 0": ft.maxabs(M.T @ z),
        "|zeta| = 1": abs(float(z @ z - 1)),
    }
    return out


def validate(acms: AcmStructure, tolerance: float = 1e-9) -> dict:
    """Return the residual of every defining identity; raise if any is too large."""
    res = residuals(acms)
    tol = 0.0 if acms.exact else tolerance
    bad = [k for k, v in res.items() if v > tol]
    if bad:
        detail = ", ".join(f"{k} (residual {res[k]:.3g})" for k in bad)
        raise StructureError(f"invalid almost contact metric structure: {detail}")
    return res


def fundamental_form(acms: AcmStructure) -> np.ndarray:
    return acms.phi.copy()


def covariant_derivative(gamma, T):
    """``(nabla T)[i, j_1..j_p] = -sum_s sum_k gamma[i, j_s, k] T[.., k, ..]``.

    Covariant tensors and vectors share components in an orthonormal frame, and
    skewness of ``gamma`` in its last two slots makes both readings agree.
    """
    m = gamma.shape[0]
    T = np.asarray(T)
    p = T.ndim
    if p == 0:
        return ft.zeros((m,), ft.is_exact(gamma))
    out = None
    for s in range(p):
        term = np.moveaxis(ft.tensordot(gamma, T, axes=([2], [s])), 1, s + 1)
        out = -term if out is None else out - term
    return out


def rough_laplacian(gamma, T):
    """``nabla^* nabla T = -sum_i (nabla^2 T)_{e_i, e_i}``."""
    d2 = covariant_derivative(gamma, covariant_derivative(gamma, T))
    return -np.einsum("ii...->...", d2)


def connection_matrices(gamma):
    """``L[x]`` is the matrix of ``nabla_{e_x}`` on vectors: ``L[x][k, j] = gamma[x, j, k]``."""
    return np.transpose(gamma, (0, 2, 1))


def nabla_endomorphism(gamma, A):
    """``(nabla_{e_x} A)`` as matrices, via commutators with the connection matrices."""
    L = connection_matrices(gamma)
    return np.einsum("xkj,jl->xkl", L, A) - np.einsum("kj,xjl->xkl", A, L)


def rough_laplacian_endomorphism(gamma, A):
    """Rough Laplacian of a left-invariant endomorphism field, commutator route."""
    L = connection_matrices(gamma)
    DA = nabla_endomorphism(gamma, A)
    second = np.einsum("xkj,xjl->kl", L, DA) - np.einsum("xkj,xjl->kl", DA, L)
    second = second - np.einsum("xxk,kab->ab", gamma, DA)
    return -second
