"""Command-line front end: ``acmg <command> --model ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog as cat
from . import report as rp
from .acms_core import StructureError
from .bochner import BochnerError
from .harmonic import ConventionError, HarmonicityError
from .lie_geometry import ModelError
from .torsion import TorsionError

COMMANDS = ("classify", "harmonic", "curvature", "bochner", "verify", "report")
DEFAULT_TOLERANCE = 1e-9


class InputError(Exception):
    """Bad command-line input or model file; exit code 2."""


def _number(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="acmg", description="Intrinsic torsion, classes and harmonicity of "
                                 "almost contact metric structures on Lie groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "classify": "class signature and component norms",
        "harmonic": "harmonicity verdicts and criteria cross-checks",
        "curvature": "curvature summary and table comparison",
        "bochner": "exterior derivatives, norm ledger and energy identities",
        "verify": "run every identity suite (whole catalog when --model is omitted)",
        "report": "the complete analysis report",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=help_text[name])
        p.add_argument("--model", help=f"catalog name ({', '.join(cat.CATALOG)}) or path to a model file")
        p.add_argument("--n", type=int, help="abelian, hyperbolic: n")
        p.add_argument("--c", type=_number, help="hyperbolic: c > 0")
        p.add_argument("--r", type=_number, help="h1r: r; su2: radius")
        p.add_argument("--p", type=int, help="hp1: p")
        p.add_argument("--tag", help="h12: A, B or C")
        p.add_argument("--phi", help="JSON file holding the phi block (a square matrix)")
        p.add_argument("--tolerance", type=float, help="residual tolerance (default 1e-9)")
        p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", help="write the report here instead of standard output")
    return parser


def _tolerance(args, file_tol=None):
    if args.tolerance is not None:
        tol = args.tolerance
    elif file_tol is not None:
        tol = file_tol
    elif os.environ.get("ACMG_TOLERANCE"):
        raw = os.environ["ACMG_TOLERANCE"]
        try:
            tol = float(raw)
        except ValueError:
            raise InputError(f"ACMG_TOLERANCE: not a number: {raw!r}")
    else:
        tol = DEFAULT_TOLERANCE
    if not tol >= 0:
        raise InputError(f"tolerance must be non-negative, got {tol}")
    return tol


def _load_phi(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})")
    if isinstance(data, dict):
        data = data.get("phi")
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InputError(f"{path}: expected a square matrix (list of rows)")
    k = len(data)
    for a, row in enumerate(data):
        if len(row) != k:
            raise InputError(f"{path}: row {a} has {len(row)} entries, expected {k}")
        for b, v in enumerate(row):
            try:
                cat._number(v, f"{path}: [{a}][{b}]")
            except cat.ModelFileError as exc:
                raise InputError(str(exc))
    return [[Fraction(v) if isinstance(v, str) else v for v in row] for row in data]


def _integer(value, flag):
    if value is None:
        return None
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise InputError(f"{flag} must be an integer, got {value}")
        value = int(value)
    if value < 1:
        raise InputError(f"{flag} must be at least 1, got {value}")
    return value


def load_entry(args):
    """Catalog or custom entry selected on the command line."""
    name = args.model
    if name in cat.CATALOG:
        exact = args.exact
        phi = _load_phi(args.phi) if args.phi else None
        given = lambda *keys: {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
        try:
            if name == "abelian":
                kw = given("n")
                entry = cat.abelian(_integer(kw.get("n", 1), "--n"), exact)
            elif name == "hyperbolic":
                kw = given("n", "c")
                c = kw.get("c", Fraction(1))
                entry = cat.hyperbolic(_integer(kw.get("n", 1), "--n"), c,
                                       phi_hat=phi, exact=exact)
            elif name == "h1r":
                entry = cat.heisenberg_h1r(_integer(args.r, "--r") or 1, phi, exact)
            elif name == "hp1":
                entry = cat.heisenberg_hp1(_integer(args.p, "--p") or 1, phi, exact)
            elif name == "h12":
                if exact:
                    raise InputError("h12: the H(1,2) examples have irrational entries; drop --exact")
                entry = cat.h12_example((args.tag or "A").upper())
            else:
                r = args.r if args.r is not None else Fraction(1)
                entry = cat.sphere_su2(r, exact)
        except (ValueError, StructureError, ModelError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"{name}: {exc}")
        return entry, _tolerance(args)
    path = Path(name)
    if not path.exists():
        raise InputError(f"--model: {name!r} is neither a catalog name ({', '.join(cat.CATALOG)}) "
                         f"nor an existing file")
    try:
        entry = cat.custom_from_file(path)
    except cat.ModelFileError as exc:
        raise InputError(str(exc))
    file_tol = None
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        if "tolerance" in raw:
            file_tol = float(raw["tolerance"])
    except (ValueError, TypeError):
        pass
    tol = _tolerance(args, file_tol)
    if args.exact and not entry.acms.exact:
        try:
            entry.model, entry.acms = entry.model.astype(True), entry.acms.astype(True)
            rp.geometry_for(entry, tol)
        except (StructureError, ModelError) as exc:
            raise InputError(f"{path}: not a valid structure in exact arithmetic ({exc})")
    return entry, tol


# -- subcommands ------------------------------------------------------------

def _checks_payload(checks):
    return [{"suite": c.suite, "name": c.name, "value": c.value,
             "asserted": c.asserted, "passed": c.passed} for c in checks]


def _payload(command, rep: rp.AnalysisReport):
    if command == "report":
        return rep.to_dict()
    head = {"model": rep.model["name"]}
    if command == "classify":
        body = dict(rep.classification)
        suites = {"torsion"}
    elif command == "harmonic":
        body = {"harmonic": rep.harmonicity["harmonic"], "harmonic_map": rep.harmonicity["harmonic_map"],
                "class": rep.classification["class"]}
        body.update({k: v for k, v in rep.harmonicity.items() if k not in body})
        suites = {"harmonic", "criteria"}
    elif command == "curvature":
        body = {k: v for k, v in rep.curvature.items()}
        body["conformally_flat"] = rep.model["conformally_flat"]
        body["einstein"] = rep.model["einstein"]
        suites = {"tables"}
    elif command == "bochner":
        body = dict(rep.energy)
        body["unimodular"] = rep.model["unimodular"]
        suites = {"bochner", "norm ledger"}
    else:
        body = {"class": rep.classification["class"]}
        suites = None
    checks = [c for c in rep.checks if suites is None or c.suite in suites]
    failed = [c for c in checks if c.asserted and not c.passed]
    return {**head, **body, "checks": _checks_payload(checks), "ok": not failed}


_SUITES = {
    "classify": (),
    "harmonic": ("harmonic",),
    "curvature": ("tables",),
    "bochner": ("bochner",),
    "verify": ("all",),
    "report": ("all",),
}


def run_one(command, entry, tol, exact):
    if command == "classify":
        rep = rp.classify(entry, tol, exact)
    else:
        rep = rp.analyze(entry, tol, exact, _SUITES[command])
    payload = _payload(command, rep)
    ok = rep.ok if command in ("verify", "report") else payload["ok"]
    return payload, ok


def _render(payload, fmt):
    if fmt == "json":
        return json.dumps(rp._encode(payload), indent=2)
    lines = []
    checks = payload.get("checks", [])
    rp._render_dict(lines, {k: v for k, v in payload.items() if k != "checks"}, "")
    if checks:
        lines.append("checks:")
        for c in checks:
            mark = "PASS" if c["passed"] else "FAIL"
            tag = "" if c["asserted"] else " (reported only)"
            lines.append(f"  [{mark}] {c['suite']}: {c['name']} = {rp.format_value(c['value'])}{tag}")
    return "\n".join(lines)


def _sweep(args):
    tol = _tolerance(args)
    results, all_ok = [], True
    for entry in cat.default_entries(exact=args.exact):
        payload, ok = run_one("verify", entry, tol, None)
        failed = [c for c in payload["checks"] if c["asserted"] and not c["passed"]]
        results.append({"model": payload["model"], "class": payload["class"], "ok": ok,
                        "checks": len(payload["checks"]), "failed": failed})
        all_ok = all_ok and ok
    return {"entries": results, "ok": all_ok}, all_ok


def _render_sweep(payload, fmt):
    if fmt == "json":
        return json.dumps(rp._encode(payload), indent=2)
    lines = []
    for e in payload["entries"]:
        mark = "ok" if e["ok"] else "FAILED"
        lines.append(f"{e['model']:24s} {rp.format_value(e['class']):20s} {e['checks']:4d} checks  {mark}")
        for c in e["failed"]:
            lines.append(f"    {c['suite']}: {c['name']} = {rp.format_value(c['value'])}")
    lines.append("all asserted checks pass" if payload["ok"] else "some asserted checks fail")
    return "\n".join(lines)


def _emit(text, output):
    if output:
        try:
            Path(output).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            raise InputError(f"--output: cannot write {output} ({exc.strerror})")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify" and args.model is None:
            payload, ok = _sweep(args)
            _emit(_render_sweep(payload, args.format), args.output)
            return 0 if ok else 1
        if args.model is None:
            raise InputError("--model is required")
        entry, tol = load_entry(args)
        payload, ok = run_one(args.command, entry, tol, True if args.exact else None)
        _emit(_render(payload, args.format), args.output)
        return 0 if ok else 1
    except (InputError, StructureError, ModelError) as exc:
        print(f"acmg: error: {exc}", file=sys.stderr)
        return 2
    except (HarmonicityError, BochnerError, TorsionError, ConventionError) as exc:
        print(f"acmg: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
