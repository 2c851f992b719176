# Smallest and largest triangulations of prisms and antiprisms.
#
# Parabola coordinates put the base polygon on y = x^2; "regular" uses a
# rational approximation of the regular m-gon.  The constructions give
# closed formulas; for small m the exact search confirms them.

import math

from polydissect import families as fam
from polydissect.families import Coords, FamilySpec, Kind, build
from polydissect.extremal import Mode, Sense, extremal

print(" m | prism min  max(placing)  max(split) | antiprism min  max")
for m in range(3, 11):
    print(f"{m:2d} | {fam.prism_min_triangulation(m, Coords.PARABOLA).size:9d}"
          f"  {fam.prism_max_placing(m).size:12d}  {fam.prism_max_split(m, Coords.PARABOLA).size:10d}"
          f" | {fam.antiprism_min_triangulation(m, Coords.PARABOLA).size:13d}"
          f"  {fam.antiprism_max_construction(m, Coords.PARABOLA).size:3d}")

# %% the search on small instances
for m in (3, 4, 5, 6):
    for coords in (Coords.PARABOLA, Coords.REGULAR_APPROX):
        cfg = build(FamilySpec(Kind.PRISM, m, coordinatization=coords))
        lo = extremal(cfg, Mode.TRIANGULATION, Sense.MIN).optimum
        hi = extremal(cfg, Mode.TRIANGULATION, Sense.MAX).optimum
        print(f"prism m={m} {coords.value:9s}: {lo}..{hi}  (formula min {2 * m - 5 + math.ceil(m / 2)})")
