"""Run the whole analysis on one model and collect the results in a serializable report."""
from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import bochner as bo
from . import catalog as cat
from . import frame_tensor as ft
from . import harmonic as hm
from .lie_geometry import is_conformally_flat
from .pipeline import Geometry

SCHEMA = 1
SECTIONS = ("model", "classification", "harmonicity", "curvature", "energy")
_RATIONAL = re.compile(r"^-?\d+/\d+$")


def scalar(x):
    """Plain Python number: Fraction in exact mode, float otherwise."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


@dataclass
class Check:
    suite: str
    name: str
    value: object
    asserted: bool
    passed: bool


@dataclass
class AnalysisReport:
    model: dict
    classification: dict = field(default_factory=dict)
    harmonicity: dict = field(default_factory=dict)
    curvature: dict = field(default_factory=dict)
    energy: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    schema: int = SCHEMA

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.asserted and not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        checks = [Check(**c) for c in data.get("checks", [])]
        return cls(**{k: data.get(k, {}) for k in SECTIONS}, checks=checks, schema=SCHEMA)

    def to_json(self, indent=2) -> str:
        return json.dumps(_encode(self.to_dict()), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(_decode(json.loads(text)))


def _encode(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def _decode(obj):
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return Fraction(obj)
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


# -- text rendering ----------------------------------------------------------

def format_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else "-"
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {format_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    return str(v)


def _render_dict(lines, d, indent="  "):
    for key, v in d.items():
        if isinstance(v, dict) and v:
            lines.append(f"{indent}{key}:")
            _render_dict(lines, v, indent + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{key}:")
            for item in v:
                lines.append(indent + "  - " + ", ".join(f"{k}={format_value(x)}" for k, x in item.items()))
        else:
            lines.append(f"{indent}{key}: {format_value(v)}")


def render_text(report: AnalysisReport, sections=SECTIONS, checks=True) -> str:
    lines = [f"schema: {report.schema}"]
    for name in sections:
        data = getattr(report, name)
        if data:
            lines.append(f"{name}:")
            _render_dict(lines, data)
    if checks and report.checks:
        lines.append("checks:")
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            tag = "" if c.asserted else " (reported only)"
            lines.append(f"  [{mark}] {c.suite}: {c.name} = {format_value(c.value)}{tag}")
        lines.append(f"asserted checks failing: {len(report.failed)}")
    return "\n".join(lines)


# -- assembling a report -------------------------------------------------------

class _Checks(list):
    def __init__(self, tol):
        super().__init__()
        self.tol = tol

    def residual(self, suite, name, value, asserted=True, tol=None):
        value = scalar(value)
        limit = self.tol if tol is None else tol
        self.append(Check(suite, name, value, asserted, abs(float(value)) <= limit))

    def flag(self, suite, name, passed, asserted=True, value=None):
        self.append(Check(suite, name, bool(passed) if value is None else value, asserted, bool(passed)))


def geometry_for(entry: cat.CatalogEntry, tolerance=None, exact=None) -> Geometry:
    tol = tolerance if tolerance is not None else entry.params.get("tolerance", 1e-9)
    model, acms = entry.model, entry.acms
    if exact is not None and exact != acms.exact:
        model, acms = model.astype(exact), acms.astype(exact)
    return Geometry(model, acms, tol)


def _model_section(entry, geo, flat, einstein):
    return {
        "name": entry.name, "family": entry.family, "dimension": geo.m, "n": geo.n,
        "params": {k: scalar(v) if not isinstance(v, str) else v for k, v in entry.params.items()
                   if k not in ("tolerance", "exact")},
        "exact": geo.exact, "tolerance": float(geo.tolerance),
        "unimodular": bo.is_unimodular(geo), "conformally_flat": flat, "einstein": einstein,
    }


def _classification(geo):
    sig, tc = geo.signature, geo.components
    return {
        "class": sig.names(),
        "labels": list(sig.labels),
        "alpha": {k: scalar(v) for k, v in sig.alpha.items()},
        "norms": {f"C{i}": scalar(tc.norms[i]) for i in sorted(tc.norms)},
        "total_norm": scalar(tc.total_norm),
    }


def _criteria_rows(results):
    return [{"case": r.case, "applies": r.applies, "criterion": r.criterion,
             "corrected": r.corrected, "verdict": r.verdict} for r in results]


def classify(entry, tolerance=None, exact=None) -> AnalysisReport:
    geo = geometry_for(entry, tolerance, exact)
    checks = _Checks(geo.tol * geo.scale)
    for k, v in geo.components.residuals.items():
        checks.residual("torsion", k, v, tol=max(geo.tol, geo.tol * float(geo.components.total_norm)))
    flat = is_conformally_flat(geo.curv, geo.m, geo.tol * geo.scale)
    return AnalysisReport(_model_section(entry, geo, flat, bo.is_einstein(geo)), _classification(geo),
                          checks=list(checks))


def analyze(entry: cat.CatalogEntry, tolerance=None, exact=None, suites=("all",)) -> AnalysisReport:
    """Full analysis of one catalog or custom entry."""
    geo = geometry_for(entry, tolerance, exact)
    tol = geo.tol * geo.scale
    checks = _Checks(tol)
    every = "all" in suites
    want = lambda s: every or s in suites

    for k, v in geo.components.residuals.items():
        checks.residual("torsion", k, v, tol=max(geo.tol, geo.tol * float(geo.components.total_norm)))

    pkg = hm.ricci_ac(geo)
    verdict = hm.harmonicity_panel(geo)
    cod = hm.coderivative_torsion(geo)
    flat = is_conformally_flat(geo.curv, geo.m, tol)
    einstein = bo.is_einstein(geo)
    z = geo.acms.zeta
    ric_zz = z @ geo.curv.ric @ z

    harmonicity = {
        "harmonic": verdict.is_harmonic,
        "harmonic_map": verdict.is_harmonic_map,
        "panel": {k: bool(verdict.condition_panel[k]) for k in hm.PANEL_NAMES},
        "panel_residuals": {k: float(verdict.panel_residuals[k]) for k in hm.PANEL_NAMES},
        "d_star_xi_norm": scalar(ft.norm2(verdict.d_star_xi)),
        "nu": [scalar(v) for v in verdict.nu],
        "d_star_eta": scalar(hm.d_star(geo.gamma, z)),
    }
    curvature = {
        "s": scalar(geo.curv.s),
        "s_ac": scalar(pkg.s_ac),
        "ric_zz": scalar(ric_zz),
        "ac_einstein": hm.weakly_ac_einstein(geo, pkg),
        "weyl_norm": scalar(ft.norm2(geo.curv.weyl)),
        "ricci": [[scalar(v) for v in row] for row in geo.curv.ric],
        "ricci_ac": [[scalar(v) for v in row] for row in pkg.ric_ac],
    }
    energy_d = bo.bending_energy_density(geo)
    energy = {"bending": scalar(energy_d.bending), "energy": scalar(energy_d.energy)}

    if want("harmonic"):
        checks.residual("harmonic", "co-derivative dual formulas", cod.dual_residual)
        checks.residual("harmonic", "co-derivative has no u(n) part", cod.unitary_residual)
        checks.flag("harmonic", "panel coherence", len(set(verdict.condition_panel.values())) == 1)
        for k, v in hm.lapstaten_residuals(geo).items():
            checks.residual("harmonic", f"rough Laplacian of {k}", v)
        for k, v in hm.characteristic_contractions(geo).residuals.items():
            checks.residual("harmonic", f"contraction identity ({k})", v)
        checks.flag("harmonic", "skew torsion forces harmonic map",
                    hm.skew_torsion_check(geo, verdict)["consistent"])
        crit = hm.class_criteria_check(geo, verdict, pkg)
        maps = hm.map_criteria_check(geo, verdict, pkg)
        harmonicity["criteria"] = _criteria_rows(crit)
        harmonicity["map_criteria"] = _criteria_rows(maps)
        for r in crit:
            if r.applies:
                checks.flag("criteria", f"class criterion {r.case} as stated", r.consistent, asserted=False)
                checks.flag("criteria", f"class criterion {r.case} with commutator term", r.corrected_consistent)
        for r in maps:
            if r.applies:
                checks.flag("criteria", f"map criterion {r.case}", r.consistent)

    if want("lemmas"):
        lemmas = hm.verify_structure_lemmas(geo, pkg)
        low = bool(geo.signature.active & {1, 2, 3, 4})
        reported_only = {"ric_ac_alt", "ric_ac_zeta"} | ({"lemma_eta"} if low else set())
        for k, v in lemmas.items():
            if v is not None:
                checks.residual("lemmas", k, v, asserted=k not in reported_only)
        if geo.n > 1:
            rng = np.random.default_rng(0)
            b = rng.integers(-3, 4, size=(geo.m, geo.m))
            theta = rng.integers(-3, 4, size=geo.m)
            if geo.exact:
                b, theta = ft.exact_array(b), ft.exact_array(theta)
            else:
                b, theta = b.astype(float), theta.astype(float)
            for k, v in hm.phi_map_residuals(geo.acms, b, theta).items():
                checks.residual("curvature maps", k, v)

    if want("bochner"):
        ext = bo.exterior_package(geo)
        for k, v in ext.residuals.items():
            checks.residual("bochner", k, v)
        ledger = bo.norm_ledger(geo, ext, check=False)
        for k, v in ledger.relations.items():
            checks.residual("norm ledger", k, v)
        brep = bo.bochner_report(geo, ledger, pkg)
        for c in brep.checks:
            checks.residual("bochner", c.name, c.residual, asserted=c.asserted)
        energy["identities"] = [{"name": c.name, "lhs": scalar(c.lhs), "rhs": scalar(c.rhs),
                                 "asserted": c.asserted} for c in brep.checks]

    if want("tables"):
        curvature["tables"] = _table_checks(entry, geo, checks)

    if want("expected"):
        _expected_checks(entry, geo, verdict, pkg, flat, energy_d, checks)

    return AnalysisReport(_model_section(entry, geo, flat, einstein), _classification(geo),
                          harmonicity, curvature, energy, list(checks))


def _table_checks(entry, geo, checks) -> dict:
    fam, p = entry.family, entry.params
    out = {}
    if fam == "hyperbolic":
        c = ft.to_fraction(p["c"]) if geo.exact else float(p["c"])
        out["connection"] = cat.connection_table_diff(geo.gamma, cat.hyperbolic_connection_table(p["n"], c))
    elif fam in ("h1r", "h12"):
        out["connection"] = cat.connection_table_diff(geo.gamma, cat.h1r_connection_table(p["r"]))
        out["curvature"] = cat.curvature_table_diff(geo.curv.R, cat.h1r_curvature_table(p["r"]))
    elif fam == "hp1":
        rows = cat.hp1_curvature_table(p["p"])
        out["connection"] = cat.connection_table_diff(geo.gamma, cat.hp1_connection_table(p["p"]))
        out["curvature (as published)"] = cat.curvature_table_diff(geo.curv.R, rows)
        out["curvature (opposite sign)"] = cat.curvature_table_diff(geo.curv.R, [(i, -v) for i, v in rows])
    for k, v in out.items():
        checks.residual("tables", k, v, asserted=k != "curvature (as published)")
    return {k: float(v) for k, v in out.items()}


def _expected_checks(entry, geo, verdict, pkg, flat, energy_d, checks):
    exp = entry.expected
    tol = checks.tol
    active = sorted(geo.signature.active)
    z = geo.acms.zeta
    if "active" in exp:
        checks.flag("expected", "class", active == sorted(exp["active"]), value=geo.signature.names())
    if "active_within" in exp:
        checks.flag("expected", "class within " + "+".join(f"C{i}" for i in exp["active_within"]),
                    set(active) <= set(exp["active_within"]), value=geo.signature.names())
    for label in exp.get("labels", []):
        checks.flag("expected", f"label {label}", label in geo.signature.labels)
    if "alpha" in exp:
        label = exp["labels"][0]
        got = geo.signature.alpha.get(label)
        checks.residual("expected", f"{label} alpha", 1 if got is None else got - exp["alpha"])
    for key in ("harmonic", "harmonic_map"):
        if key in exp:
            got = verdict.is_harmonic if key == "harmonic" else verdict.is_harmonic_map
            checks.flag("expected", key, got == exp[key], value=got)
    if "d_star_eta" in exp:
        checks.residual("expected", "d* eta", hm.d_star(geo.gamma, z) - exp["d_star_eta"])
    if "s_ac" in exp:
        checks.residual("expected", "s^ac", pkg.s_ac - exp["s_ac"])
    if "nu_eta" in exp:
        checks.residual("expected", "nu = c eta", ft.maxabs(verdict.nu - z * exp["nu_eta"]))
    if exp.get("nu_zero"):
        checks.residual("expected", "nu = 0", ft.maxabs(verdict.nu))
    if "conformally_flat" in exp:
        checks.flag("expected", "conformally flat", flat == exp["conformally_flat"], value=flat)
    if "ac_einstein" in exp:
        got = hm.weakly_ac_einstein(geo, pkg)
        checks.flag("expected", "ac-Einstein", got == exp["ac_einstein"], value=got)
    if "bending_density" in exp:
        checks.residual("expected", "bending density", energy_d.bending - exp["bending_density"])
    return tol
