"""Worked example geometries and the JSON model-file loader."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import frame_tensor as ft
from .acms_core import AcmStructure, StructureError, validate
from .lie_geometry import LieAlgebraModel, ModelError


class ModelFileError(ValueError):
    """Malformed model file; the message names the offending location."""


@dataclass
class CatalogEntry:
    model: LieAlgebraModel
    acms: AcmStructure
    expected: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    family: str = "custom"
    label: str = ""

    @property
    def name(self):
        return f"{self.model.name} {self.label}" if self.label else self.model.name


def _num(x, exact):
    return ft.to_fraction(x) if exact else float(x)


def _entry(model, phi, zeta, expected=None, params=None, family="custom", tolerance=1e-9, label=""):
    acms = AcmStructure(phi, zeta)
    validate(acms, tolerance)
    return CatalogEntry(model, acms, expected or {}, params or {}, family, label)


def rotation_phi(m, pairs, exact=False, signs=None):
    """phi with ``phi e_a = s e_b`` and ``phi e_b = -s e_a`` for each 1-based pair ``(a, b)``."""
    M = ft.zeros((m, m), exact)
    one = Fraction(1) if exact else 1.0
    for idx, (a, b) in enumerate(pairs):
        s = one * (signs[idx] if signs is not None else 1)
        M[b - 1, a - 1] = s
        M[a - 1, b - 1] = -s
    return M


def basis_vector(m, i, exact=False):
    v = ft.zeros((m,), exact)
    v[i - 1] = Fraction(1) if exact else 1.0
    return v


def embed_phi(block, exact=False):
    """Extend a 2k x 2k matrix by a zero last row and column (the zeta slot)."""
    block = ft.exact_array(block) if exact else ft.float_array(block)
    k = block.shape[0]
    if block.shape != (k, k):
        raise StructureError(f"phi block must be square, got {block.shape}")
    M = ft.zeros((k + 1, k + 1), exact)
    M[:k, :k] = block
    return M


def abelian(n=1, exact=True):
    m = 2 * n + 1
    model = LieAlgebraModel.from_brackets(f"abelian(n={n})", m, {}, exact)
    phi = rotation_phi(m, [(2 * i + 1, 2 * i + 2) for i in range(n)], exact)
    return _entry(model, phi, basis_vector(m, m, exact),
                  {"active": [], "harmonic": True, "harmonic_map": True},
                  {"n": n}, "abelian")


def hyperbolic(n=1, c=1, phi_hat=None, exact=True):
    """``[X_1, X_j] = c X_j``; zeta = X_1, phi acts on span(X_2..X_{2n+1})."""
    if not float(c) > 0:
        raise ValueError("hyperbolic model needs c > 0")
    m = 2 * n + 1
    cc = _num(c, exact)
    model = LieAlgebraModel.from_brackets(
        f"hyperbolic(n={n},c={c})", m, {(1, j): {j: cc} for j in range(2, m + 1)}, exact)
    if phi_hat is None:
        phi = rotation_phi(m, [(2 * i + 2, 2 * i + 3) for i in range(n)], exact)
    else:
        hat = ft.exact_array(phi_hat) if exact else ft.float_array(phi_hat)
        if hat.shape != (2 * n, 2 * n):
            raise StructureError(f"phi_hat must be {2 * n}x{2 * n}")
        phi = ft.zeros((m, m), exact)
        phi[1:, 1:] = hat
    expected = {
        "active": [5], "labels": ["alpha-Kenmotsu"], "alpha": -cc,
        "harmonic": True, "harmonic_map": False,
        "d_star_eta": 2 * n * cc, "s_ac": -2 * n * cc * cc, "nu_eta": 4 * n * cc ** 3,
        "conformally_flat": True, "ac_einstein": True,
    }
    return _entry(model, phi, basis_vector(m, 1, exact), expected, {"n": n, "c": c}, "hyperbolic")


def _h1r_model(r, exact):
    m = 2 * r + 1
    one = Fraction(1) if exact else 1.0
    return LieAlgebraModel.from_brackets(
        f"H(1,{r})" if r > 1 else "H(1,1)[h1r]", m, {(i, m): {r + i: one} for i in range(1, r + 1)}, exact)


def _hp1_model(p, exact):
    m = 2 * p + 1
    one = Fraction(1) if exact else 1.0
    return LieAlgebraModel.from_brackets(
        f"H({p},1)" if p > 1 else "H(1,1)[hp1]", m, {(i, p + i): {m: one} for i in range(1, p + 1)}, exact)


def heisenberg_h1r(r=1, phi_block=None, exact=True):
    """H(1,r) with ``[X_i, Z] = X_{r+i}``; frame ``X_1..X_{2r}, Z`` and zeta = Z."""
    m = 2 * r + 1
    model = _h1r_model(r, exact)
    if phi_block is None:
        phi = rotation_phi(m, [(i, r + i) for i in range(1, r + 1)], exact)
    else:
        phi = embed_phi(phi_block, exact)
    expected = {"active_within": [8, 9, 11], "nu_zero": True}
    return _entry(model, phi, basis_vector(m, m, exact), expected, {"r": r}, "h1r",
                  label="" if phi_block is None else "(custom phi)")


def heisenberg_hp1(p=1, phi_block=None, exact=True, lam=1):
    """H(p,1) with ``[X_i, X_{p+i}] = Z``; frame ``X_1..X_{2p}, Z`` and zeta = Z."""
    m = 2 * p + 1
    model = _hp1_model(p, exact)
    if phi_block is None:
        phi = rotation_phi(m, [(i, p + i) for i in range(1, p + 1)], exact, [lam] * p)
        expected = {"active": [6], "labels": ["alpha-Sasakian"], "alpha": Fraction(lam, 2),
                    "harmonic": True, "harmonic_map": True}
    else:
        phi = embed_phi(phi_block, exact)
        expected = {}
    # for p > 1 a phi that does not commute with the bracket's complex structure also has a C10 part
    expected.update({"active_within": [6, 7, 10, 11], "nu_zero": True})
    label = "(custom phi)" if phi_block is not None else ("(lambda=-1)" if lam == -1 else "")
    return _entry(model, phi, basis_vector(m, m, exact), expected, {"p": p}, "hp1", label=label)


def h12_matrix(tag):
    """The three H(1,2) structures with entries in {0, +-sqrt(2)/2}; columns are phi X_k."""
    h = math.sqrt(2) / 2
    cols = {
        "A": [[0, h, 0, h], [-h, 0, h, 0], [0, -h, 0, h], [-h, 0, -h, 0]],
        "B": [[0, h, 0, h], [-h, 0, -h, 0], [0, h, 0, -h], [-h, 0, h, 0]],
        "C": [[0, h, h, 0], [-h, 0, 0, h], [-h, 0, 0, -h], [0, -h, h, 0]],
    }
    if tag not in cols:
        raise ValueError(f"unknown H(1,2) example {tag!r}; choose A, B or C")
    return np.array(cols[tag], dtype=float).T


def h12_harmonic_polynomial(phi):
    """The pair of polynomials whose joint vanishing characterizes harmonicity on H(1,2)."""
    f = lambda up, low: phi[up - 1, low - 1]
    first = f(3, 1) * (f(4, 3) - f(2, 1))
    second = (f(3, 1) + f(4, 2)) * (f(4, 1) - f(3, 2))
    return first, second


def heisenberg_blocks(phi):
    """Split the horizontal part of phi into r x r blocks ``[[A, B], [C, D]]``.

    ``A[j, i]`` is the X_j-component of phi X_i, ``C[j, i]`` the X_{r+j}-component
    of phi X_i, and so on.
    """
    k = (phi.shape[0] - 1) // 2
    M = phi[: 2 * k, : 2 * k]
    return M[:k, :k], M[:k, k:], M[k:, :k], M[k:, k:]


def _zero(a, tol):
    return ft.maxabs(a) <= tol


def h1r_lemma_cases(phi, tol=1e-9):
    """Which of the three block conditions hold on H(1,r).

    (i) C symmetric and D = A, the type without C11; (ii) additionally C = 0,
    pure C8; (iii) C symmetric and A = D = 0, pure C9.
    """
    A, _, C, D = heisenberg_blocks(phi)
    sym = _zero(C - C.T, tol)
    same = _zero(D - A, tol)
    return {
        "i": sym and same,
        "ii": same and _zero(C, tol),
        "iii": sym and _zero(A, tol) and _zero(D, tol),
    }


H1R_CASE_TYPES = {"i": {8, 9}, "ii": {8}, "iii": {9}}


def hp1_lemma_cases(phi, tol=1e-9):
    """Which of the three block conditions hold on H(p,1).

    (i) C symmetric and D = A, the type without C11; (ii) C = lambda I with
    lambda = +-1 and A = D = 0, pure C6; (iii) condition (i) with trace C = 0,
    pure C7.
    """
    A, _, C, D = heisenberg_blocks(phi)
    p = A.shape[0]
    first = _zero(C - C.T, tol) and _zero(D - A, tol)
    lam = C[0, 0] if p else 0
    scalar = p > 0 and abs(abs(float(lam)) - 1) <= tol and _zero(C - lam * ft.eye(p, False), tol)
    return {
        "i": first,
        "ii": scalar and _zero(A, tol) and _zero(D, tol),
        "iii": first and abs(float(np.trace(C))) <= tol,
    }


HP1_CASE_TYPES = {"i": {6, 7}, "ii": {6}, "iii": {7}}


def hp1_d_star_F_zeta(phi):
    """The closed form ``sum_i phi^{p+i}_i`` of ``d*F(zeta)`` on H(p,1)."""
    _, _, C, _ = heisenberg_blocks(phi)
    return np.trace(C)


def h1r_harmonic_polynomials(phi):
    """Two r x r arrays whose joint vanishing characterizes harmonicity on H(1,r).

    Indices follow ``f(up, low) = phi[up - 1, low - 1]``, the ``up``-component of
    phi applied to the ``low``-th frame vector.
    """
    r = (phi.shape[0] - 1) // 2
    f = lambda up, low: phi[up - 1, low - 1]
    first = ft.zeros((r, r), False)
    second = ft.zeros((r, r), False)
    first = first.astype(object) if phi.dtype == object else first
    second = second.astype(object) if phi.dtype == object else second
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            first[i - 1, j - 1] = sum(
                (f(r + k, j) + f(k, r + j)) * (f(k, i) + f(r + k, r + i))
                + (f(r + k, r + j) - f(k, j)) * (f(r + k, i) - f(k, r + i))
                for k in range(1, r + 1))
            second[i - 1, j - 1] = sum(
                f(k, i) * f(r + k, r + j) - f(r + k, i) * f(k, r + j)
                + f(r + k, j) * f(k, r + i) - f(k, j) * f(r + k, r + i)
                for k in range(1, r + 1))
    return first, second


# Published connection and curvature tables, transcribed entry by entry.
# Connection: (a, b, {c: value}) means nabla_{e_a} e_b = sum value e_c (1-based);
# curvature: ((a, b, c, d), value) for R(e_a, e_b, e_c, e_d).  Unlisted entries vanish.

def hyperbolic_connection_table(n, c):
    m = 2 * n + 1
    rows = []
    for j in range(2, m + 1):
        rows.append((j, j, {1: c}))
        rows.append((j, 1, {j: -c}))
    return rows


def h1r_connection_table(r):
    Z = 2 * r + 1
    half = Fraction(1, 2)
    rows = []
    for i in range(1, r + 1):
        rows += [(i, r + i, {Z: -half}), (r + i, i, {Z: -half}),
                 (i, Z, {r + i: half}), (Z, i, {r + i: -half}),
                 (r + i, Z, {i: half}), (Z, r + i, {i: half})]
    return rows


def hp1_connection_table(p):
    Z = 2 * p + 1
    half = Fraction(1, 2)
    rows = []
    for i in range(1, p + 1):
        rows += [(i, p + i, {Z: half}), (p + i, i, {Z: -half}),
                 (i, Z, {p + i: -half}), (Z, i, {p + i: -half}),
                 (p + i, Z, {i: half}), (Z, p + i, {i: half})]
    return rows


def h1r_curvature_table(r):
    Z = 2 * r + 1
    q = Fraction(1, 4)
    rows = []
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            if i != j:
                rows.append(((i, j, r + i, r + j), -q))
            rows.append(((i, r + j, j, r + i), q))
        rows.append(((i, Z, i, Z), -3 * q))
        rows.append(((r + i, Z, r + i, Z), q))
    return rows


def hp1_curvature_table(p):
    Z = 2 * p + 1
    q = Fraction(1, 4)
    rows = []
    for i in range(1, p + 1):
        for j in range(1, p + 1):
            if i != j:
                rows.append(((i, j, p + i, p + j), q))
                rows.append(((i, p + i, j, p + j), 2 * q))
                rows.append(((i, p + j, j, p + i), q))
        rows.append(((i, p + i, i, p + i), 3 * q))
        rows.append(((i, Z, i, Z), -q))
        rows.append(((p + i, Z, p + i, Z), -q))
    return rows


def connection_table_diff(gamma, rows):
    """Largest mismatch between ``gamma`` and a table; unlisted entries must vanish.

    ``gamma[a, b, c] = <nabla_{e_a} e_b, e_c>``.
    """
    expected = ft.zeros(gamma.shape, ft.is_exact(gamma))
    for a, b, out in rows:
        for c, v in out.items():
            expected[a - 1, b - 1, c - 1] = v
    return ft.maxabs(gamma - expected)


def curvature_table_diff(R, rows):
    """Largest mismatch on the listed curvature entries."""
    return max((abs(float(R[tuple(i - 1 for i in idx)] - v)) for idx, v in rows), default=0.0)


def h12_example(tag="A"):
    block = h12_matrix(tag)
    entry = heisenberg_h1r(2, block, exact=False)
    entry.model = LieAlgebraModel(f"H(1,2)-{tag}", entry.model.c)
    entry.expected.update({
        "A": {"active": [8, 9], "harmonic": True, "harmonic_map": True},
        "B": {"active": [8, 9, 11], "harmonic": True, "harmonic_map": True},
        "C": {"active": [9, 11], "harmonic": False, "harmonic_map": False},
    }[tag])
    entry.params = {"r": 2, "tag": tag}
    entry.family, entry.label = "h12", ""
    return entry


def sphere_su2(r=1, exact=True):
    """SU(2) with the round metric of radius r: ``[e_1, e_2] = (2/r) e_3`` cyclically."""
    if not float(r) > 0:
        raise ValueError("sphere radius must be positive")
    k = 2 / ft.to_fraction(r) if exact else 2.0 / float(r)
    model = LieAlgebraModel.from_brackets(
        f"SU(2)(r={r})", 3, {(1, 2): {3: k}, (2, 3): {1: k}, (3, 1): {2: k}}, exact)
    phi = rotation_phi(3, [(2, 3)], exact)
    rr = _num(r, exact)
    expected = {"active": [6], "labels": ["alpha-Sasakian"], "alpha": 1 / rr,
                "harmonic": True, "harmonic_map": True, "ac_einstein": True,
                "bending_density": 2 / rr ** 2}
    return _entry(model, phi, basis_vector(3, 1, exact), expected, {"r": r}, "su2")


CATALOG = {
    "abelian": abelian,
    "hyperbolic": hyperbolic,
    "h1r": heisenberg_h1r,
    "hp1": heisenberg_hp1,
    "h12": h12_example,
    "su2": sphere_su2,
}


def default_entries(exact=True):
    """Every worked example at its default and a few non-default parameters."""
    half = Fraction(1, 2) if exact else 0.5
    return [
        abelian(1, exact), abelian(2, exact),
        hyperbolic(1, 1, exact=exact), hyperbolic(2, 2, exact=exact), hyperbolic(3, half, exact=exact),
        heisenberg_h1r(1, exact=exact), heisenberg_h1r(2, exact=exact),
        heisenberg_h1r(2, rotation_phi(4, [(1, 2), (3, 4)], exact)[:4, :4], exact),
        h12_example("A"), h12_example("B"), h12_example("C"),
        heisenberg_hp1(1, exact=exact), heisenberg_hp1(1, exact=exact, lam=-1), heisenberg_hp1(2, exact=exact),
        sphere_su2(1, exact), sphere_su2(2, exact),
    ]


def _fail(where, msg):
    raise ModelFileError(f"{where}: {msg}")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        _fail(where, f"expected a number, got {json.dumps(value)}")
    if isinstance(value, str):
        try:
            Fraction(value)
        except (ValueError, ZeroDivisionError):
            _fail(where, f"cannot parse number {value!r}")
    elif isinstance(value, float) and not math.isfinite(value):
        _fail(where, "non-finite number")
    return value


def custom_from_dict(data, source="<model>"):
    if not isinstance(data, dict):
        _fail(source, "top level must be a JSON object")
    for key in ("dimension", "structure_constants", "phi", "zeta"):
        if key not in data:
            _fail(f"{source}: {key}", "missing required field")
    name = data.get("name", Path(str(source)).stem)
    m = data["dimension"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 3 or m % 2 == 0:
        _fail(f"{source}: dimension", f"must be an odd integer >= 3, got {json.dumps(m)}")
    exact = bool(data.get("exact", False))
    tol = data.get("tolerance", 1e-9)
    _number(tol, f"{source}: tolerance")
    tol = float(tol)
    c = ft.zeros((m, m, m), exact)
    seen = {}
    sc = data["structure_constants"]
    if not isinstance(sc, list):
        _fail(f"{source}: structure_constants", "must be a list")
    for pos, item in enumerate(sc):
        where = f"{source}: structure_constants[{pos}]"
        if not isinstance(item, dict):
            _fail(where, "entry must be an object with i, j, k, value")
        idx = []
        for key in ("i", "j", "k"):
            v = item.get(key)
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= m:
                _fail(f"{where}.{key}", f"index must be an integer in 1..{m}, got {json.dumps(v)}")
            idx.append(v - 1)
        i, j, k = idx
        val = _number(item.get("value"), f"{where}.value")
        val = ft.to_fraction(val) if exact else float(Fraction(val) if isinstance(val, str) else val)
        key = (i, j, k)
        if i == j and val != 0:
            _fail(where, f"[e{i + 1}, e{i + 1}] must vanish (structure constants must be skew)")
        if (j, i, k) in seen and seen[(j, i, k)] != -val:
            _fail(where, f"entry not skew against the entry for [e{j + 1}, e{i + 1}] -> e{k + 1}")
        seen[key] = val
        c[i, j, k] = val
        if (j, i, k) not in seen:
            c[j, i, k] = -val
    try:
        model = LieAlgebraModel(name, c, tol)
    except ModelError as exc:
        _fail(f"{source}: structure_constants", str(exc))
    phi = _matrix(data["phi"], m, f"{source}: phi", exact)
    zeta = _vector(data["zeta"], m, f"{source}: zeta", exact)
    try:
        acms = AcmStructure(phi, zeta)
        validate(acms, tol)
    except StructureError as exc:
        _fail(f"{source}: phi/zeta", str(exc))
    return CatalogEntry(model, acms, {}, {"tolerance": tol, "exact": exact})


def _matrix(rows, m, where, exact):
    if not isinstance(rows, list) or len(rows) != m:
        _fail(where, f"must be a list of {m} rows")
    out = ft.zeros((m, m), exact)
    for a, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            _fail(f"{where}[{a}]", f"row must have {m} entries")
        for b, v in enumerate(row):
            v = _number(v, f"{where}[{a}][{b}]")
            out[a, b] = ft.to_fraction(v) if exact else float(Fraction(v) if isinstance(v, str) else v)
    return out


def _vector(vals, m, where, exact):
    if not isinstance(vals, list) or len(vals) != m:
        _fail(where, f"must be a list of {m} numbers")
    out = ft.zeros((m,), exact)
    for a, v in enumerate(vals):
        v = _number(v, f"{where}[{a}]")
        out[a] = ft.to_fraction(v) if exact else float(Fraction(v) if isinstance(v, str) else v)
    return out


def custom_from_file(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    return custom_from_dict(data, str(path))


def entry_to_dict(entry: CatalogEntry):
    """Serialize an entry in the model-file format (floats, 1-based indices, i < j)."""
    c = entry.model.c
    m = entry.model.m
    sc = [{"i": i + 1, "j": j + 1, "k": k + 1, "value": float(c[i, j, k])}
          for i in range(m) for j in range(i + 1, m) for k in range(m) if c[i, j, k] != 0]
    return {
        "name": entry.model.name, "dimension": m, "structure_constants": sc,
        "phi": [[float(v) for v in row] for row in entry.acms.phi],
        "zeta": [float(v) for v in entry.acms.zeta],
    }
