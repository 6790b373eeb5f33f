"""Dense multilinear algebra in a fixed orthonormal frame.

Tensors are plain numpy arrays indexed by frame slots; because the frame is
orthonormal the metric is the identity and upper/lower indices coincide.
Two arithmetic modes are supported: float64 arrays, and object arrays whose
entries are ``fractions.Fraction`` (exact mode).  Every routine here works
in both modes as long as constants are written as integer ratios.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


class ShapeError(ValueError):
    """Tensor arguments with incompatible rank or dimension."""


class ContractViolation(ValueError):
    """Input does not satisfy the symmetry an operation requires."""


def is_exact(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def to_fraction(x) -> Fraction:
    """Convert a number to a Fraction, reading floats by their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("boolean is not a number")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} in exact mode")
        return Fraction(repr(float(x)))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def exact_array(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = to_fraction(arr[idx])
    return out


def float_array(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    return arr.astype(float)


def zeros(shape, exact: bool = False) -> np.ndarray:
    if not exact:
        return np.zeros(shape)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(m: int, exact: bool = False) -> np.ndarray:
    out = zeros((m, m), exact)
    for i in range(m):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def like(a, template) -> np.ndarray:
    """Cast ``a`` to the arithmetic mode of ``template``."""
    return exact_array(a) if is_exact(template) else float_array(a)


def maxabs(a) -> float:
    """Largest absolute entry as a float (0 for empty arrays)."""
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    return float(max(abs(x) for x in arr.ravel())) if arr.dtype == object else float(np.max(np.abs(arr)))


def _scaled_ints(a):
    """Integer array ``a * L`` and the common denominator ``L`` of a Fraction array."""
    L = 1
    for v in a.flat:
        d = v.denominator
        if L % d:
            L = L * d // math.gcd(L, d)
    ints = np.empty(a.shape, dtype=object)
    for idx, v in zip(np.ndindex(a.shape), a.flat):
        ints[idx] = v.numerator * (L // v.denominator)
    return ints, L


def _unscale(ints, L):
    out = np.empty(np.shape(ints), dtype=object)
    if out.ndim == 0:
        return Fraction(int(ints), L)
    for idx in np.ndindex(out.shape):
        out[idx] = Fraction(ints[idx], L)
    return out


def _exact_call(fn, operands):
    """Run a multilinear numpy routine on Fraction arrays through integer arithmetic."""
    scaled, L = [], 1
    for a in operands:
        a = np.asarray(a)
        if a.dtype != object:
            a = exact_array(a)
        ints, d = _scaled_ints(a)
        scaled.append(ints)
        L *= d
    return _unscale(fn(*scaled), L)


def einsum(subscripts, *operands):
    """``np.einsum`` that stays fast on exact arrays."""
    if any(is_exact(a) for a in operands):
        return _exact_call(lambda *ops: np.einsum(subscripts, *ops), operands)
    return np.einsum(subscripts, *operands)


def tensordot(a, b, axes=2):
    """``np.tensordot`` that stays fast on exact arrays."""
    if is_exact(a) or is_exact(b):
        return _exact_call(lambda x, y: np.tensordot(x, y, axes=axes), (a, b))
    return np.tensordot(a, b, axes=axes)


def _check_same(a, b):
    if np.shape(a) != np.shape(b):
        raise ShapeError(f"shape mismatch {np.shape(a)} vs {np.shape(b)}")


def inner(a, b):
    """Full entrywise pairing over all ordered multi-indices (no 1/p! factor)."""
    _check_same(a, b)
    prod = np.asarray(a) * np.asarray(b)
    if prod.size == 0:
        return 0
    return prod.sum()


def norm2(a):
    return inner(a, a)


def tensor(*factors):
    out = factors[0]
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return out


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permute(a, perm):
    """Return ``A∘τ`` with ``(A∘τ)(x_1..x_p) = A(x_τ(1)..x_τ(p))``."""
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return np.transpose(a, inv)


def alternate(a):
    """Sum of ``sign(τ) A∘τ`` over all permutations, unnormalized."""
    p = np.ndim(a)
    if p < 1:
        raise ShapeError("alternate needs rank >= 1")
    out = None
    for perm in itertools.permutations(range(p)):
        term = permute(a, perm)
        term = term if _perm_sign(perm) > 0 else -term
        out = term if out is None else out + term
    return out


def cyclic_sum(a):
    """``A(x,y,z) + A(y,z,x) + A(z,x,y)`` for rank-3 input."""
    if np.ndim(a) != 3:
        raise ShapeError("cyclic_sum needs rank 3")
    return a + np.einsum("yzx->xyz", a) + np.einsum("zxy->xyz", a)


def sym_product(a, b):
    """``a⊙b = ½(a⊗b + b⊗a)``."""
    _check_same(a, b)
    return (tensor(a, b) + tensor(b, a)) / 2


def wedge(a, b):
    """Exterior product of forms, normalized so that 1-forms give ``a⊗b − b⊗a``.

    For a p-form and a q-form this is ``alt(a⊗b) / (p! q!)``, the sum over
    shuffles; for two 2-forms it has six terms.
    """
    p, q = np.ndim(a), np.ndim(b)
    return alternate(tensor(a, b)) / (math.factorial(p) * math.factorial(q))


def is_symmetric(a, tol: float = 1e-9) -> bool:
    return maxabs(a - np.swapaxes(a, 0, 1)) <= tol


def kulkarni_nomizu(a, b, tol: float = 1e-9):
    """Kulkarni–Nomizu product of two symmetric 2-tensors.

    ``(a⊖b)(x,y,z,w) = a(x,z)b(y,w) − a(y,z)b(x,w) + a(y,w)b(x,z) − a(x,w)b(y,z)``.
    """
    if np.ndim(a) != 2 or np.ndim(b) != 2:
        raise ShapeError("kulkarni_nomizu needs rank-2 inputs")
    _check_same(a, b)
    if not (is_symmetric(a, tol) and is_symmetric(b, tol)):
        raise ContractViolation("kulkarni_nomizu requires symmetric arguments")
    return (np.einsum("xz,yw->xyzw", a, b) - np.einsum("yz,xw->xyzw", a, b)
            + np.einsum("yw,xz->xyzw", a, b) - np.einsum("xw,yz->xyzw", a, b))


def act(A, T):
    """Derivation action of an endomorphism on a covariant tensor.

    ``A`` is given in form convention ``A[j, k] = <A e_j, e_k>``; the result is
    ``(A·T)(x_1..x_p) = −Σ_s T(.., A x_s, ..)``.
    """
    p = np.ndim(T)
    out = None
    for s in range(p):
        term = np.moveaxis(tensordot(A, T, axes=([1], [s])), 0, s)
        out = -term if out is None else out - term
    return zeros(np.shape(T), is_exact(T)) if out is None else out


def curvature_symmetry_residual(R) -> float:
    """Max violation of the algebraic curvature symmetries of a rank-4 tensor."""
    r = maxabs(R + np.einsum("yxzw->xyzw", R))
    r = max(r, maxabs(R + np.einsum("xywz->xyzw", R)))
    r = max(r, maxabs(R - np.einsum("zwxy->xyzw", R)))
    bianchi = R + np.einsum("yzxw->xyzw", R) + np.einsum("zxyw->xyzw", R)
    return max(r, maxabs(bianchi))
