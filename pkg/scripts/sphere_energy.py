"""Energy densities of the Sasakian structure on S^3(r) = SU(2) and their totals.

The densities are computed exactly. Totals are shown for the round volume
2 pi^2 r^3 and, for comparison, for the volume (4/3) pi r^3.
"""
import math
import sys
from fractions import Fraction

from acmg import bochner as bo
from acmg import catalog as cat
from acmg.pipeline import Geometry


def main(radii):
    print(f"{'r':>6} {'bending':>10} {'energy':>12} {'round total':>14} {'4/3 pi r^3 total':>17}")
    for r in radii:
        entry = cat.sphere_su2(r)
        d = bo.bending_energy_density(Geometry(entry.model, entry.acms))
        rf = float(r)
        round_total = float(d.energy) * 2 * math.pi ** 2 * rf ** 3
        ball_total = float(d.energy) * 4 / 3 * math.pi * rf ** 3
        print(f"{str(r):>6} {str(d.bending):>10} {str(d.energy):>12} {round_total:14.6f} {ball_total:17.6f}")


if __name__ == "__main__":
    args = sys.argv[1:] or ["1/2", "1", "2", "3"]
    main([Fraction(a) for a in args])
