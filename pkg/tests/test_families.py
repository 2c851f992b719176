import math
import random
from fractions import Fraction as F

import pytest

from polydissect import families as fam
from polydissect.complexes import (
    SimplexFamily, Status, check_region_convexity, euler_audit, mismatched_regions,
    regions_disjoint, validate,
)
from polydissect.families import Coords, FamilySpec, Kind, build
from polydissect.pointconfig import PointConfiguration

from oracles import euler_counts, hull_volume, leibniz_det, tet_volume


def tet_volume_4(cfg, s):
    p = [cfg.points[i] for i in s]
    return abs(leibniz_det([[p[i][k] - p[0][k] for k in range(4)] for i in range(1, 5)])) / 24


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@pytest.mark.parametrize("m", range(3, 13))
def test_regular_polygon_is_strictly_convex_ccw(m):
    pts = fam.regular_polygon(m)
    assert len(set(pts)) == m
    assert all(_cross(pts[i], pts[(i + 1) % m], pts[(i + 2) % m]) > 0 for i in range(m))
    if m not in (3, 4, 6):
        # rounded to the unit circle within one unit of the shared denominator
        assert all(abs(x * x + y * y - 1) < F(3, fam.POLYGON_DENOMINATOR) for x, y in pts)


def test_parabola_polygon():
    assert fam.parabola_polygon(4) == [(0, 0), (1, 1), (2, 4), (3, 9)]


@pytest.mark.parametrize("bad", [
    dict(kind=Kind.PM, m=5), dict(kind=Kind.PRISM, m=2), dict(kind=Kind.PRISM), dict(kind=Kind.CUBE),
])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        FamilySpec(**bad)


@pytest.mark.parametrize("kind, m, d, n", [
    (Kind.LATTICE_P, None, None, 8), (Kind.ANTIPRISM8_P, None, None, 8), (Kind.PRISM, 5, None, 10),
    (Kind.ANTIPRISM, 5, None, 10), (Kind.PM, 6, None, 10), (Kind.RM, 6, None, 8), (Kind.CUBE, None, 3, 8),
    (Kind.KLEE_MINTY, None, 4, 16), (Kind.CUBOCTAHEDRON, None, None, 12),
    (Kind.TRUNC_TETRAHEDRON, None, None, 12), (Kind.TRUNC_OCTAHEDRON, None, None, 24),
    (Kind.RHOMBIC_DODECAHEDRON, None, None, 14), (Kind.SCHOENHARDT_BIPYRAMID, None, None, 8),
])
def test_build_point_counts(kind, m, d, n):
    cfg = build(FamilySpec(kind, m, d))
    extra = 2 if kind == Kind.SCHOENHARDT_BIPYRAMID else 0
    assert cfg.n == n + extra
    if kind not in (Kind.PM, Kind.RM):
        # every point is a vertex of the hull
        assert cfg.vertex_labels() == frozenset(range(cfg.n))


def test_lattice_polytope_volume_matches_oracle():
    cfg = build(FamilySpec(Kind.LATTICE_P))
    assert all(x.denominator == 1 for p in cfg.points for x in p)
    assert cfg.total_volume == hull_volume(cfg.points) == 2


def test_lattice_dissection_is_unimodular():
    d = fam.lattice_example_dissection()
    assert d.size == 12 and d.status == Status.DISSECTION
    assert all(tet_volume([d.config.points[i] for i in s]) == F(1, 6) for s in d.labels())
    (region,) = mismatched_regions(d)
    assert region.k == 4 and all(check_region_convexity(d, region).values())


def test_lattice_triangulation_11():
    t = fam.lattice_example_triangulation11()
    assert t.size == 11 and validate(t).status == Status.TRIANGULATION
    nb, ni, ei = euler_counts(t.config.points, t.labels())
    assert t.size == nb + ei - ni - 3 and ei == 6


def test_lattice_placing_sizes_stay_in_range():
    cfg = build(FamilySpec(Kind.LATTICE_P))
    rnd = random.Random(0)
    seen = set()
    for _ in range(60):
        order = list(range(cfg.n))
        rnd.shuffle(order)
        t = fam.placing_triangulation(cfg, order)
        assert t.status == Status.TRIANGULATION
        seen.add(t.size)
    assert seen <= set(range(5, 12)) and len(seen) >= 3


@pytest.mark.parametrize("m", [4, 6, 8])
def test_halving_dissection(m):
    d = fam.halving_dissection(m)
    assert d.size == 4 * m - 6 and d.status == Status.DISSECTION
    regions = mismatched_regions(d)
    assert [r.k for r in regions] == [m]
    assert all(all(check_region_convexity(d, r).values()) for r in regions)
    assert regions_disjoint(d, regions) and euler_audit(d, regions).holds


@pytest.mark.parametrize("m", [4, 6, 8])
def test_small_triangulation_of_pm(m):
    t = fam.small_Pm_triangulation(build(FamilySpec(Kind.PM, m)))
    assert t.size == m + 5 and t.status == Status.TRIANGULATION
    nb, ni, ei = euler_counts(t.config.points, t.labels())
    assert (ni, ei) == (0, 4)


@pytest.mark.parametrize("m", [4, 6, 8])
def test_short_halving_paths(m):
    cfg = build(FamilySpec(Kind.PM, m))
    poly = fam.polygon_labels(cfg)
    side_v, along_v, *_ = fam._half_data(cfg, "v1", "v2")
    side_u, along_u, *_ = fam._half_data(cfg, "u1", "u2")
    top = fam.min_monotone_path(cfg, poly, along_v)
    bottom = fam.min_monotone_path(cfg, poly, along_u)
    # the two shortest paths are crossing chords: with their own fills the halves mismatch
    d = fam.halving_triangulation(cfg, top, bottom, fam.fill_along_path(cfg, poly, top, side_v),
                                  fam.fill_along_path(cfg, poly, bottom, side_u))
    assert d.size == 2 * m - 2 and d.status == Status.DISSECTION
    # a fan from one end of the top chord carries both paths: a triangulation of size 2m - 1
    w = cfg.names["w"] if cfg.names["w"] in top.vertices else cfg.names["e"]
    fill = fam.fan_fill(cfg, poly, w)
    bottom2 = fam.MonotonePath((bottom.vertices[0], w, bottom.vertices[1]), along_u)
    t = fam.halving_triangulation(cfg, top, bottom2, fill, fill)
    assert t.size == 2 * m - 1 and t.status == Status.TRIANGULATION


@pytest.mark.parametrize("coords", [Coords.REGULAR_APPROX, Coords.PARABOLA])
@pytest.mark.parametrize("m", range(3, 9))
def test_prism_and_antiprism_constructions(m, coords):
    pmin = fam.prism_min_triangulation(m, coords)
    assert pmin.size == 2 * m - 5 + math.ceil(m / 2) and pmin.status == Status.TRIANGULATION
    amin = fam.antiprism_min_triangulation(m, coords)
    assert amin.size == 3 * m - 5 and amin.status == Status.TRIANGULATION
    split = fam.prism_max_split(m, coords)
    assert split.size == math.ceil((m * m + 6 * m - 16) / 4) and split.status == Status.TRIANGULATION
    amax = fam.antiprism_max_construction(m, coords)
    assert amax.size == (m * m + 8 * m - 16) // 4 and amax.status == Status.TRIANGULATION


@pytest.mark.parametrize("m", range(3, 9))
def test_prism_max_placing(m):
    t = fam.prism_max_placing(m)
    assert t.size == (m * m + m - 6) // 2 and t.status == Status.TRIANGULATION


def test_cone_over_boundary_of_cube_from_a_corner():
    cfg = build(FamilySpec(Kind.CUBE, d=3))
    simp = fam.cone_over_boundary(cfg, range(8), 0)
    t = SimplexFamily(cfg, simp)
    assert validate(t).status == Status.TRIANGULATION and t.size == 6


def test_trapezoid_cube():
    t = fam.trapezoid_cube_7()
    assert t.size == 7 and t.status == Status.TRIANGULATION
    assert euler_counts(t.config.points, t.labels())[2] == 2
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    names = {**{f"b{i}": i for i in range(4)}, **{f"t{i}": 4 + i for i in range(4)}}
    cube = PointConfiguration([p + (z,) for z in (0, 1) for p in square], names)
    # b0 b1 t2 t3 span the plane y = z in the regular cube
    with pytest.raises(fam.ConstructionError):
        fam.trapezoid_cube_7(cube)


def test_staircase_cells_count_and_shape():
    cells = fam.staircase_cells((0, 1, 2), (0, 1))
    assert len(cells) == math.comb(3, 1)
    assert all(len(c) == 4 for c in cells)


def test_segment_squared():
    seg = fam.segment()
    sq, rep = fam.haiman_product(seg, seg)
    assert sq.size == 2 and rep.g_ratio == 1


def test_klee_minty_cube_is_combinatorial_cube():
    cfg = build(FamilySpec(Kind.KLEE_MINTY, d=3))
    assert len(cfg.facets()) == 6
    assert all(len(f.vertex_labels) == 4 for f in cfg.facets())


def test_bipyramid_dissection():
    d = fam.schoenhardt_bipyramid_dissection()
    assert d.size == 24 and d.config.dim == 4 and d.status == Status.DISSECTION
    edge = fam._digits("78")
    # the edge 78 is surrounded by 1 2 3 in one twisted-prism triangulation and by 4 5 6 in the other
    assert fam.link_of_edge([fam._digits(w) for w in fam.T1_PRIME], edge) == set(fam._digits("123"))
    assert fam.link_of_edge([fam._digits(w) for w in fam.T2_PRIME], edge) == set(fam._digits("456"))
    assert sum(tet_volume_4(d.config, s) for s in d.labels()) == d.config.total_volume
