"""Analyze every catalog entry and print one summary row per model.

Usage: python3 scripts/catalog_sweep.py [--exact] [--json PATH]
"""
import argparse
import json
import time

from acmg import catalog as cat
from acmg import report as rp


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--exact", action="store_true", help="rational arithmetic where available")
    parser.add_argument("--json", help="also write the full reports to this file")
    args = parser.parse_args()

    reports = []
    start = time.perf_counter()
    for entry in cat.default_entries(exact=args.exact):
        rep = rp.analyze(entry)
        reports.append(rep)
        h = rep.harmonicity
        failed = rep.failed
        print(f"{rep.model['name']:24s} {rp.format_value(rep.classification['class']):16s} "
              f"harmonic={h['harmonic']!s:5s} map={h['harmonic_map']!s:5s} "
              f"s={rp.format_value(rep.curvature['s']):8s} checks={len(rep.checks):3d} "
              f"{'ok' if not failed else 'FAILED: ' + ', '.join(c.name for c in failed)}")
    print(f"{len(reports)} models in {time.perf_counter() - start:.2f}s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([rp._encode(r.to_dict()) for r in reports], fh, indent=2)
    return 0 if all(r.ok for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
