"""Levi-Civita connection and curvature of left-invariant metrics.

The frame ``e_1..e_m`` of left-invariant fields is declared orthonormal.  All
arrays are 0-based: ``c[i, j, k]`` is the coefficient of ``e_k`` in
``[e_i, e_j]`` and ``gamma[i, j, k] = <nabla_{e_i} e_j, e_k>``.

Curvature sign: ``R(A,B,C,D) = <(nabla_[A,B] - [nabla_A, nabla_B]) C, D>`` so
that ``R(X,Y,X,Y)`` is the sectional curvature of an orthonormal pair.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import frame_tensor as ft


class ModelError(ValueError):
    """Structure constants that do not define a Lie algebra."""


@dataclass(frozen=True)
class LieAlgebraModel:
    name: str
    c: np.ndarray
    tolerance: float = 1e-9
    m: int = field(init=False)
    unimodular: bool = field(init=False)

    def __post_init__(self):
        c = self.c
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ModelError(f"structure constants must be an m x m x m array, got {c.shape}")
        m = c.shape[0]
        object.__setattr__(self, "m", m)
        tol = 0.0 if ft.is_exact(c) else self.tolerance
        skew = c + np.swapaxes(c, 0, 1)
        if ft.maxabs(skew) > tol:
            i, j, k = _worst_index(skew)
            raise ModelError(f"structure constants not skew at (i={i + 1}, j={j + 1}, k={k + 1})")
        jac = jacobi_residual(c)
        if ft.maxabs(jac) > tol * max(1.0, ft.maxabs(c)) ** 2:
            i, j, k, _ = _worst_index(jac)
            raise ModelError(f"Jacobi identity fails for (e{i + 1}, e{j + 1}, e{k + 1})")
        traces = ft.einsum("ikk->i", c)
        object.__setattr__(self, "unimodular", ft.maxabs(traces) <= tol)

    @property
    def exact(self) -> bool:
        return ft.is_exact(self.c)

    @property
    def n(self) -> int:
        return (self.m - 1) // 2

    @classmethod
    def from_brackets(cls, name, m, brackets, exact=False, tolerance=1e-9):
        """Build from ``{(i, j): {k: value}}`` with 1-based indices, ``i < j`` suffices."""
        c = ft.zeros((m, m, m), exact)
        for (i, j), terms in brackets.items():
            for k, v in terms.items():
                if not (1 <= i <= m and 1 <= j <= m and 1 <= k <= m):
                    raise ModelError(f"bracket index out of range: [{i},{j}] -> {k}")
                v = ft.to_fraction(v) if exact else float(v)
                c[i - 1, j - 1, k - 1] += v
                c[j - 1, i - 1, k - 1] -= v
        return cls(name, c, tolerance)

    def astype(self, exact: bool) -> "LieAlgebraModel":
        c = ft.exact_array(self.c) if exact else ft.float_array(self.c)
        return LieAlgebraModel(self.name, c, self.tolerance)


def _worst_index(a):
    mags = np.vectorize(lambda x: abs(float(x)), otypes=[float])(a)
    return np.unravel_index(int(np.argmax(mags)), a.shape)


def jacobi_residual(c):
    """``J[i,j,k,:]`` = components of the cyclic sum of ``[[e_i,e_j],e_k]``."""
    t = ft.einsum("ijl,lkq->ijkq", c, c)
    return t + ft.einsum("jkiq->ijkq", t) + ft.einsum("kijq->ijkq", t)


def levi_civita(model: LieAlgebraModel) -> np.ndarray:
    """Koszul formula for an orthonormal left-invariant frame."""
    c = model.c
    return (c - ft.einsum("jki->ijk", c) + ft.einsum("kij->ijk", c)) / 2


@dataclass(frozen=True)
class CurvaturePackage:
    gamma: np.ndarray
    R: np.ndarray
    ric: np.ndarray
    s: object
    weyl: np.ndarray


def riemann(c, gamma):
    first = ft.einsum("abk,kcd->abcd", c, gamma)
    second = ft.einsum("bck,akd->abcd", gamma, gamma) - ft.einsum("ack,bkd->abcd", gamma, gamma)
    return first - second


def weyl_tensor(R, ric, s):
    m = R.shape[0]
    g = ft.eye(m, ft.is_exact(R))
    if m < 3:
        return ft.zeros(R.shape, ft.is_exact(R))
    traceless = ric - g * s / m
    traceless = (traceless + traceless.T) / 2
    return (R - ft.kulkarni_nomizu(traceless, g, tol=np.inf) / (m - 2)
            - ft.kulkarni_nomizu(g, g) * s / (2 * m * (m - 1)))


def curvature(model: LieAlgebraModel, gamma=None) -> CurvaturePackage:
    if gamma is None:
        gamma = levi_civita(model)
    R = riemann(model.c, gamma)
    ric = ft.einsum("ixiy->xy", R)
    s = np.trace(ric)
    return CurvaturePackage(gamma, R, ric, s, weyl_tensor(R, ric, s))


def is_conformally_flat(pkg: CurvaturePackage, m: int, tolerance: float = 1e-9) -> bool:
    """Vanishing Weyl tensor; always true when ``m = 3`` where the Weyl tensor is zero."""
    if m < 3:
        raise ValueError("conformal flatness needs m >= 3")
    if m == 3:
        return True
    return ft.maxabs(pkg.weyl) <= tolerance
