# A lattice polytope whose largest dissection beats every triangulation.
#
# Eight integer points in R^3.  Every tetrahedron spanned by them has volume
# at least 1/6, and the whole polytope has volume 2, so no dissection can
# use more than 12 pieces.  We construct a 12-piece one, check it exactly,
# and then let the exact search confirm that triangulations stop at 11.

from polydissect.families import FamilySpec, Kind, build, lattice_example_dissection
from polydissect.complexes import family_report, mismatched_regions
from polydissect.extremal import Mode, Sense, build_model, enumerate_optima

cfg = build(FamilySpec(Kind.LATTICE_P))
for name in sorted(cfg.names, key=cfg.names.get):
    print(f"{name:>3s} = {tuple(int(x) for x in cfg.points[cfg.names[name]])}")
print("volume of the hull:", cfg.total_volume)

# %% the construction
dis = lattice_example_dissection()
print(dis, "volumes:", sorted({str(s.volume) for s in dis.simplices}))

# %% where does it fail to be a triangulation?
for region in mismatched_regions(dis):
    print("mismatched region: a", region.k, "-gon in the plane", region.hyperplane)
    print("  one side:  ", region.side_a)
    print("  other side:", region.side_b)

report = family_report(dis)
print("Euler counts n, n', e_i:", report["n"], report["n_prime"], report["e_i"])
print("size bounds:", report["bounds"])

# %% exhaustive check
for mode in (Mode.DISSECTION, Mode.TRIANGULATION):
    res = enumerate_optima(build_model(cfg, mode=mode, sense=Sense.MAX))
    print(f"max {mode.name.lower()}: {res.optimum}, attained by {len(res.all_optima)} families")
