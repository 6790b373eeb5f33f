"""Shared per-model computations, built once and reused by every analysis."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import frame_tensor as ft
from .acms_core import AcmStructure, covariant_derivative, validate
from .lie_geometry import CurvaturePackage, LieAlgebraModel, curvature, levi_civita
from .torsion import (ClassSignature, TorsionComponents, class_signature, decompose,
                      intrinsic_torsion, minimal_connection)


@dataclass
class Geometry:
    model: LieAlgebraModel
    acms: AcmStructure
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.model.m != self.acms.m:
            raise ValueError(f"model has dimension {self.model.m} but structure has {self.acms.m}")
        if self.model.exact != self.acms.exact:
            exact = self.model.exact and self.acms.exact
            self.model = self.model.astype(exact)
            self.acms = self.acms.astype(exact)
        validate(self.acms, self.tolerance)

    @property
    def exact(self) -> bool:
        return self.acms.exact

    @property
    def n(self) -> int:
        return self.acms.n

    @property
    def m(self) -> int:
        return self.acms.m

    @property
    def tol(self) -> float:
        """Tolerance for residual checks; zero in exact mode."""
        return 0.0 if self.exact else self.tolerance

    def close(self, value, scale=1.0) -> bool:
        return ft.maxabs(value) <= self.tol * max(1.0, float(scale))

    @cached_property
    def gamma(self):
        return levi_civita(self.model)

    @cached_property
    def curv(self) -> CurvaturePackage:
        return curvature(self.model, self.gamma)

    @cached_property
    def xi(self):
        return intrinsic_torsion(self.gamma, self.acms, self.tolerance).xi

    @cached_property
    def gamma_u(self):
        return minimal_connection(self.gamma, self.xi)

    @cached_property
    def components(self) -> TorsionComponents:
        return decompose(self.xi, self.acms, self.tolerance)

    @cached_property
    def signature(self) -> ClassSignature:
        return class_signature(self.components, self.tolerance)

    @cached_property
    def F(self):
        return self.acms.phi

    @cached_property
    def nabla_F(self):
        return covariant_derivative(self.gamma, self.F)

    @cached_property
    def nabla_eta(self):
        return covariant_derivative(self.gamma, self.acms.zeta)

    @cached_property
    def nabla_u_xi(self):
        """``D[a, x, j, k] = <(nabla^U_{e_a} xi)_{e_x} e_j, e_k>``."""
        return covariant_derivative(self.gamma_u, self.xi)

    @cached_property
    def xi_trace(self):
        """The vector ``sum_i xi_{e_i} e_i``."""
        return np.einsum("iik->k", self.xi)

    def xi_along(self, v):
        """``xi_v`` in form convention for a vector ``v``."""
        return np.einsum("l,ljk->jk", v, self.xi)

    @property
    def scale(self) -> float:
        """Magnitude used to make residual tolerances relative."""
        return max(1.0, ft.maxabs(self.model.c)) ** 3
