# Halving dissections of P_m: 4m - 6 tetrahedra from two triangulated halves.
#
# P_m is an m-gon in the plane z = 0 with two short segments, one above and
# one below.  Each half can be triangulated around its segment using a
# monotone path through the polygon.  The two halves disagree on the
# polygon, so together they form a dissection but not a triangulation.

from polydissect.families import FamilySpec, Kind, build, halving_dissection, small_Pm_triangulation
from polydissect.complexes import check_bounds, euler_audit, mismatched_regions
from polydissect.extremal import Budget, Mode, Sense, build_model, solve

for m in (4, 6, 8, 10, 12):
    d = halving_dissection(m)
    regions = mismatched_regions(d)
    t = small_Pm_triangulation(build(FamilySpec(Kind.PM, m)))
    print(f"m={m:2d}: halving dissection {d.size:2d} ({d.status.value}, region k={regions[0].k}), "
          f"small triangulation {t.size}, Euler ok={euler_audit(d, regions).holds}, "
          f"bounds {check_bounds(d, regions)['lower']}..{check_bounds(d, regions)['upper']}")

# %% how large can a triangulation of P_8 be?
cfg = build(FamilySpec(Kind.PM, 8))
res = solve(build_model(cfg, mode=Mode.TRIANGULATION, sense=Sense.MAX), Budget(nodes=2_000_000))
print("P_8: max triangulation", res.optimum, "proven" if res.proven else f"(bound {res.bound})",
      "vs. halving dissection", halving_dissection(8).size)
