"""Explicit point configurations and their triangulations/dissections.

Constructors return a :class:`PointConfiguration` (``build``) or a
:class:`SimplexFamily` over one.  Nothing is trusted: every constructor that
claims a status re-validates its output on the actual coordinates.

Labels follow input order.  Named vertices (``"v1"``, ``"n"``, ...) are kept
in ``config.names``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .complexes import SimplexFamily, Status, validate
from .pointconfig import PointConfiguration, placing_simplices
from .simplexrel import Classifier, PairRelation

F = Fraction


class ConstructionError(RuntimeError):
    """A construction failed its own validation or a precondition check."""


class Kind(enum.Enum):
    PM = "pm"
    RM = "rm"
    LATTICE_P = "lattice-p"
    ANTIPRISM8_P = "antiprism8-p"
    PRISM = "prism"
    ANTIPRISM = "antiprism"
    TRAPEZOID_CUBE = "trapezoid-cube"
    CUBE = "cube"
    KLEE_MINTY = "klee-minty"
    CUBOCTAHEDRON = "cuboctahedron"
    TRUNC_TETRAHEDRON = "truncated-tetrahedron"
    TRUNC_OCTAHEDRON = "truncated-octahedron"
    RHOMBIC_DODECAHEDRON = "rhombic-dodecahedron"
    SCHOENHARDT_BIPYRAMID = "schoenhardt-bipyramid"


class Coords(enum.Enum):
    REGULAR_APPROX = "regular"
    PARABOLA = "parabola"
    CANONICAL_RATIONAL = "canonical"


_NEEDS_M = {Kind.PM, Kind.RM, Kind.PRISM, Kind.ANTIPRISM}
_NEEDS_D = {Kind.CUBE, Kind.KLEE_MINTY}


@dataclass(frozen=True)
class FamilySpec:
    kind: Kind
    m: int | None = None
    d: int | None = None
    coordinatization: Coords = Coords.REGULAR_APPROX

    def __post_init__(self):
        if self.kind in _NEEDS_M:
            if self.m is None or self.m < 3:
                raise ValueError(f"{self.kind.value} needs m >= 3")
            if self.kind in (Kind.PM, Kind.RM) and self.m % 2:
                raise ValueError(f"{self.kind.value} needs an even polygon order")
        if self.kind in _NEEDS_D and (self.d is None or self.d < 1):
            raise ValueError(f"{self.kind.value} needs d >= 1")


# ---------------------------------------------------------------------------
# planar polygons

POLYGON_DENOMINATOR = 10_000

# affine images of the regular hexagon, square and triangle
_HEXAGON = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
_SQUARE = [(1, 0), (0, 1), (-1, 0), (0, -1)]


def _octant_point(turns: Fraction, den: int) -> tuple:
    """Rounded point on the unit circle at angle ``turns * 2pi``.

    The angle is folded into the first octant with exact rational angle
    arithmetic, so the mirror symmetries of the circle are kept exactly.
    """
    turns = turns % 1
    sy = sx = 1
    swap = False
    if turns > F(1, 2):
        turns, sy = 1 - turns, -1
    if turns > F(1, 4):
        turns, sx = F(1, 2) - turns, -1
    if turns > F(1, 8):
        turns, swap = F(1, 4) - turns, True
    theta = 2 * math.pi * float(turns)
    x = F(round(math.cos(theta) * den), den)
    y = F(round(math.sin(theta) * den), den)
    if turns == F(1, 8):
        y = x
    if swap:
        x, y = y, x
    return (sx * x, sy * y)


def regular_polygon(m: int, phase: Fraction = F(0), den: int = POLYGON_DENOMINATOR,
                    affine_exact: bool = True) -> list[tuple]:
    """Vertices of a near-regular m-gon, counterclockwise, at angles 2pi(k+phase)/m.

    Exact affine-regular coordinates are used for m = 3, 4, 6 with phase 0
    (unless ``affine_exact`` is off); otherwise rounded points on the unit
    circle sharing denominator ``den``.
    """
    if affine_exact and phase == 0 and m in (3, 4, 6):
        base = _SQUARE if m == 4 else _HEXAGON
        step = len(base) // m
        return [tuple(F(c) for c in base[k * step]) for k in range(m)]
    return [_octant_point(F(k, m) + F(phase) / m, den) for k in range(m)]


def parabola_polygon(m: int, offset: Fraction = F(0)) -> list[tuple]:
    return [(F(i) + offset, (F(i) + offset) ** 2) for i in range(m)]


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_cyclic_order(points: dict) -> list:
    """Labels of planar points in convex position, counterclockwise."""
    pts = sorted(points, key=lambda i: points[i])
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross2(points[lower[-2]], points[lower[-1]], points[p]) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(points[upper[-2]], points[upper[-1]], points[p]) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _strictly_inside(poly: list, q) -> bool:
    n = len(poly)
    return all(_cross2(poly[i], poly[(i + 1) % n], q) > 0 for i in range(n))


# ---------------------------------------------------------------------------
# building configurations

def _lift(poly, z):
    return [(x, y, F(z)) for x, y in poly]


_PM_SLOPES = [F(1, 7), F(2, 9), F(1, 5), F(3, 11), F(2, 13), F(1, 6), F(4, 17)]
_PM_LENGTHS = [F(1, 2), F(1, 3), F(1, 4)]


def _pm_points(m: int, with_u: bool):
    poly = regular_polygon(m)
    for slope, length in itertools.product(_PM_SLOPES, _PM_LENGTHS):
        dv = (F(1), slope)
        du = (-slope, F(1))
        edges = [(q[0] - p[0], q[1] - p[1]) for p, q in itertools.combinations(poly, 2)]
        if any(dv[0] * e[1] - dv[1] * e[0] == 0 or du[0] * e[1] - du[1] * e[0] == 0 for e in edges):
            continue
        v1 = (-length * dv[0], -length * dv[1])
        v2 = (length * dv[0], length * dv[1])
        u1 = (-length * du[0], -length * du[1])
        u2 = (length * du[0], length * du[1])
        mids = [((a[0] + b[0]) / 2, (a[1] + b[1]) / 2) for a in (v1, v2) for b in (u1, u2)]
        if not all(_strictly_inside(poly, q) for q in mids):
            continue
        pts = _lift(poly, 0) + [(*v1, F(1)), (*v2, F(1))]
        if with_u:
            pts += [(*u1, F(-1)), (*u2, F(-1))]
        cfg = PointConfiguration(pts)
        if len(cfg.vertex_labels()) != len(pts):
            continue
        if with_u and any(len(f.vertex_labels) != 3 for f in cfg.facets()):
            continue
        return pts, dv, du
    raise ConstructionError(f"no generic spine placement found for m={m}")


def _pm_names(m: int, pts, dv, du, with_u: bool) -> dict:
    names = {f"q{i}": i for i in range(m)}
    names.update(v1=m, v2=m + 1)
    if with_u:
        names.update(u1=m + 2, u2=m + 3)

    def key(i, d):
        return pts[i][0] * d[0] + pts[i][1] * d[1]

    names["n"] = max(range(m), key=lambda i: key(i, dv))
    names["s"] = min(range(m), key=lambda i: key(i, dv))
    names["e"] = max(range(m), key=lambda i: key(i, du))
    names["w"] = min(range(m), key=lambda i: key(i, du))
    return names


def _prism_points(m: int, coords: Coords):
    if coords == Coords.PARABOLA:
        base = parabola_polygon(m)
    else:
        base = regular_polygon(m)
    pts = _lift(base, 0) + _lift(base, 1)
    names = {f"u{i + 1}": i for i in range(m)}
    names.update({f"v{i + 1}": m + i for i in range(m)})
    return pts, names


def _antiprism_points(m: int, coords: Coords):
    """u-cap at z=0, v-cap at z=1, with side edges v_i u_i and u_i v_(i+1)."""
    if coords == Coords.PARABOLA:
        v = parabola_polygon(m)
        u = [(F(t), F(t) ** 2) for t in [F(2 * i + 1, 2) for i in range(m - 1)] + [F(-1, 2)]]
    elif m == 3:
        v = [tuple(map(F, _HEXAGON[2 * i])) for i in range(3)]
        u = [tuple(map(F, _HEXAGON[2 * i + 1])) for i in range(3)]
    else:
        v = regular_polygon(m, affine_exact=False)
        u = regular_polygon(m, F(1, 2))
    pts = _lift(u, 0) + _lift(v, 1)
    names = {f"u{i + 1}": i for i in range(m)}
    names.update({f"v{i + 1}": m + i for i in range(m)})
    return pts, names


def _klee_minty(d: int, eps: Fraction = F(1, 3)):
    pts = []
    for bits in itertools.product((0, 1), repeat=d):
        x = []
        for j, b in enumerate(bits):
            lo = eps * x[-1] if j else F(0)
            hi = 1 - eps * x[-1] if j else F(1)
            x.append(hi if b else lo)
        pts.append(tuple(x))
    return pts


def _signed_perms(base, keep=lambda signs: True):
    out = set()
    for perm in set(itertools.permutations(base)):
        for signs in itertools.product((1, -1), repeat=3):
            if not keep(signs):
                continue
            p = tuple(F(s * c) for s, c in zip(signs, perm))
            out.add(p)
    return sorted(out)


# the top triangle 456 is twisted clockwise against 123
SCHOENHARDT_POINTS = [
    (10, 0, 0), (-6, 8, 0), (-6, -8, 0),
    (10, F(-1, 10), 10), (F(-59, 10), 8, 10), (F(-61, 10), F(-81, 10), 10),
    (0, 0, F(101, 10)), (0, 0, F(-1, 10)),
]

_LATTICE = {
    "s": (0, 0, 0), "e": (1, 0, 0), "w": (0, 1, 0), "n": (1, 1, 0),
    "v1": (-1, 0, 1), "v2": (1, 1, 1), "u1": (0, 1, -1), "u2": (2, 0, -1),
}

_ANTIPRISM8 = {
    "u1": (1, 0, 0), "w": (1, 0, 1), "v1": (-1, 0, 0), "s": (-1, 0, -1),
    "v2": (0, 1, 1), "n": (1, 1, 1), "u2": (0, 1, -1), "e": (-1, 1, -1),
}


def build(spec: FamilySpec) -> PointConfiguration:
    """Exact rational coordinates for ``spec`` with its named vertices."""
    k = spec.kind
    if k == Kind.LATTICE_P or k == Kind.ANTIPRISM8_P:
        table = _LATTICE if k == Kind.LATTICE_P else _ANTIPRISM8
        return PointConfiguration(list(table.values()), {nm: i for i, nm in enumerate(table)})
    if k in (Kind.PM, Kind.RM):
        with_u = k == Kind.PM
        pts, dv, du = _pm_points(spec.m, with_u)
        return PointConfiguration(pts, _pm_names(spec.m, pts, dv, du, with_u))
    if k == Kind.PRISM:
        return PointConfiguration(*_prism_points(spec.m, spec.coordinatization))
    if k == Kind.ANTIPRISM:
        return PointConfiguration(*_antiprism_points(spec.m, spec.coordinatization))
    if k == Kind.TRAPEZOID_CUBE:
        base = parabola_polygon(4)
        pts = _lift(base, 0) + _lift(base, 1)
        return PointConfiguration(pts, {**{f"b{i}": i for i in range(4)}, **{f"t{i}": 4 + i for i in range(4)}})
    if k == Kind.CUBE:
        return PointConfiguration(list(itertools.product((0, 1), repeat=spec.d)))
    if k == Kind.KLEE_MINTY:
        return PointConfiguration(_klee_minty(spec.d))
    if k == Kind.CUBOCTAHEDRON:
        return PointConfiguration(_signed_perms((1, 1, 0)))
    if k == Kind.TRUNC_OCTAHEDRON:
        return PointConfiguration(_signed_perms((0, 1, 2)))
    if k == Kind.RHOMBIC_DODECAHEDRON:
        return PointConfiguration(_signed_perms((1, 1, 1)) + _signed_perms((2, 0, 0)))
    if k == Kind.TRUNC_TETRAHEDRON:
        return PointConfiguration(_signed_perms((3, 1, 1), keep=lambda s: s.count(-1) % 2 == 0))
    if k == Kind.SCHOENHARDT_BIPYRAMID:
        pts = [tuple(F(c) for c in p) for p in SCHOENHARDT_POINTS]
        centre = tuple(sum(c) / len(pts) for c in zip(*pts))
        lifted = [p + (F(0),) for p in pts] + [centre + (F(1),), centre + (F(-1),)]
        names = {str(i + 1): i for i in range(8)}
        names.update(top=8, bottom=9)
        return PointConfiguration(lifted, names)
    raise ValueError(f"unsupported kind {k}")


# ---------------------------------------------------------------------------
# generic helpers

def _checked(config: PointConfiguration, simplices, want: Status, what: str) -> SimplexFamily:
    fam = SimplexFamily(config, simplices)
    rep = validate(fam)
    if rep.status != want:
        raise ConstructionError(
            f"{what}: expected {want.value}, got {rep.status.value} "
            f"(overlaps={rep.overlaps[:3]}, deficit={rep.volume_deficit})")
    return fam


def placing_triangulation(config: PointConfiguration, order: Sequence[int] | None = None) -> SimplexFamily:
    fam = SimplexFamily(config, placing_simplices(config, order))
    fam.status = Status.TRIANGULATION
    return fam


def _cap_triangles(config: PointConfiguration, facet_labels) -> list[tuple]:
    """Fan triangulation of a polygonal facet of a 3-polytope."""
    labels = sorted(facet_labels)
    if len(labels) == 3:
        return [tuple(labels)]
    normal = config.hyperplane(labels[:3])[:3]
    drop = max(range(3), key=lambda c: abs(normal[c]))
    proj = {i: tuple(x for c, x in enumerate(config.points[i]) if c != drop) for i in labels}
    cyc = convex_cyclic_order(proj)
    return [tuple(sorted((cyc[0], cyc[i], cyc[i + 1]))) for i in range(1, len(cyc) - 1)]


def cone_over_boundary(config: PointConfiguration, labels, apex: int) -> list[tuple]:
    """Cone ``apex`` over the boundary facets of conv(labels) not containing it."""
    labels = sorted(labels)
    sub = PointConfiguration([config.points[i] for i in labels])
    back = dict(enumerate(labels))
    local_apex = labels.index(apex)
    out = []
    for f in sub.facets():
        if local_apex in f.vertex_labels:
            continue
        for tri in _cap_triangles(sub, f.vertex_labels):
            out.append(tuple(sorted(back[i] for i in tri + (local_apex,))))
    return out


# ---------------------------------------------------------------------------
# halving triangulations of P_m and relatives

@dataclass(frozen=True)
class MonotonePath:
    vertices: tuple
    direction: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def _dot2(p, d):
    return p[0] * d[0] + p[1] * d[1]


def _perp(d):
    return (-d[1], d[0])


def _spine(config: PointConfiguration, a: str, b: str) -> tuple:
    pa, pb = config.points[config.names[a]], config.points[config.names[b]]
    return (pb[0] - pa[0], pb[1] - pa[1])


def _check_monotone(config: PointConfiguration, path: MonotonePath) -> None:
    vals = [_dot2(config.points[i], path.direction) for i in path.vertices]
    if not all(x < y for x, y in zip(vals, vals[1:])):
        raise ConstructionError(f"path {path.vertices} is not strictly monotone")


def polygon_labels(config: PointConfiguration) -> list[int]:
    """The z = 0 polygon of a P_m / R_m style configuration, counterclockwise."""
    labels = [i for i, p in enumerate(config.points) if p[2] == 0]
    return convex_cyclic_order({i: config.points[i][:2] for i in labels})


def max_monotone_path(config: PointConfiguration, polygon, direction) -> MonotonePath:
    order = sorted(polygon, key=lambda i: _dot2(config.points[i], direction))
    return MonotonePath(tuple(order), tuple(direction))


def min_monotone_path(config: PointConfiguration, polygon, direction) -> MonotonePath:
    order = sorted(polygon, key=lambda i: _dot2(config.points[i], direction))
    return MonotonePath((order[0], order[-1]), tuple(direction))


def _chains(config, polygon, a, b, side):
    n = len(polygon)
    ia, ib = polygon.index(a), polygon.index(b)
    c1 = [polygon[(ia + t) % n] for t in range((ib - ia) % n + 1)]
    c2 = [polygon[(ia - t) % n] for t in range((ia - ib) % n + 1)]
    ref = c1 if len(c1) > 2 else c2
    mid = config.points[ref[1]][:2]
    pa, pb = config.points[a][:2], config.points[b][:2]
    above = _cross2(pa, pb, mid) * _cross2(pa, pb, (pa[0] + side[0], pa[1] + side[1])) > 0
    if ref is c1:
        return (c1, c2) if above else (c2, c1)
    return (c2, c1) if above else (c1, c2)


def fill_along_path(config: PointConfiguration, polygon, path: MonotonePath, side) -> list[tuple]:
    """A triangulation of the polygon that contains every edge of ``path``.

    The path splits the polygon into convex pieces between its points of
    contact with each boundary chain; each piece is fanned.
    """
    a, b = path.vertices[0], path.vertices[-1]
    tris = []
    for chain in _chains(config, polygon, a, b, side):
        on_path = set(path.vertices)
        common = [v for v in chain if v in on_path]
        for c0, c1 in zip(common, common[1:]):
            seg_chain = chain[chain.index(c0):chain.index(c1) + 1]
            pv = list(path.vertices)
            seg_path = pv[pv.index(c0):pv.index(c1) + 1]
            piece = seg_chain + seg_path[::-1][1:-1]
            for i in range(1, len(piece) - 1):
                tris.append(tuple(sorted((piece[0], piece[i], piece[i + 1]))))
    return sorted(tris)


def fan_fill(config: PointConfiguration, polygon, apex: int) -> list[tuple]:
    """The fan triangulation of the polygon from one of its vertices."""
    k = polygon.index(apex)
    cyc = polygon[k:] + polygon[:k]
    return sorted(tuple(sorted((cyc[0], cyc[i], cyc[i + 1]))) for i in range(1, len(cyc) - 1))


def _above_path(config, path: MonotonePath, side, tri) -> bool:
    c = [sum(config.points[i][k] for i in tri) / 3 for k in range(2)]
    along = path.direction
    fc = _dot2(c, along)
    for p, q in zip(path.vertices, path.vertices[1:]):
        fp, fq = _dot2(config.points[p], along), _dot2(config.points[q], along)
        if fp <= fc <= fq:
            gp, gq = _dot2(config.points[p], side), _dot2(config.points[q], side)
            g = gp + (gq - gp) * (fc - fp) / (fq - fp)
            return _dot2(c, side) > g
    raise ConstructionError("triangle centroid outside the path's range")


def halving_half(config, polygon, path: MonotonePath, fill, low: int, high: int, side) -> list[tuple]:
    """Path edges joined to the spine, fill triangles joined to its ends."""
    _check_monotone(config, path)
    edges = {tuple(sorted(e)) for t in fill for e in itertools.combinations(t, 2)}
    for e in zip(path.vertices, path.vertices[1:]):
        if tuple(sorted(e)) not in edges:
            raise ConstructionError(f"path edge {e} is not an edge of the fill")
    out = [tuple(sorted((p, q, low, high))) for p, q in zip(path.vertices, path.vertices[1:])]
    for t in fill:
        out.append(tuple(sorted(t + ((high,) if _above_path(config, path, side, t) else (low,)))))
    return out


def _half_data(config, spine_lo: str, spine_hi: str):
    side = _spine(config, spine_lo, spine_hi)
    return side, _perp(side), config.names[spine_lo], config.names[spine_hi]


def halving_triangulation(config: PointConfiguration, top_path: MonotonePath | None = None,
                          bottom_path: MonotonePath | None = None, top_fill=None, bottom_fill=None,
                          check: bool = True) -> SimplexFamily:
    """Triangulate the two halves of P_m (or R_m alone) independently.

    Default paths are the maximal ones; default fills are derived from the
    paths.  The result is always a dissection; it is a triangulation exactly
    when the two fills agree.
    """
    poly = polygon_labels(config)
    side_v, along_v, v1, v2 = _half_data(config, "v1", "v2")
    top_path = top_path or max_monotone_path(config, poly, along_v)
    top_fill = top_fill or fill_along_path(config, poly, top_path, side_v)
    simplices = halving_half(config, poly, top_path, top_fill, v1, v2, side_v)
    if "u1" in config.names:
        side_u, along_u, u1, u2 = _half_data(config, "u1", "u2")
        bottom_path = bottom_path or max_monotone_path(config, poly, along_u)
        bottom_fill = bottom_fill or fill_along_path(config, poly, bottom_path, side_u)
        simplices += halving_half(config, poly, bottom_path, bottom_fill, u1, u2, side_u)
    fam = SimplexFamily(config, simplices)
    if check:
        rep = validate(fam)
        if rep.status == Status.INVALID:
            raise ConstructionError(f"halving construction invalid: {rep.overlaps[:3]}")
    return fam


def halving_dissection(m: int) -> SimplexFamily:
    """Both halves of P_m with maximal paths: 4m - 6 tetrahedra."""
    return halving_triangulation(build(FamilySpec(Kind.PM, m)))


def small_Pm_triangulation(config: PointConfiguration) -> SimplexFamily:
    """Five central tetrahedra plus the four arc fans: m + 5 tetrahedra."""
    nm = config.names
    v1, v2, u1, u2 = nm["v1"], nm["v2"], nm["u1"], nm["u2"]
    n, s, e, w = nm["n"], nm["s"], nm["e"], nm["w"]
    simplices = [(v1, v2, u1, u2), (v1, v2, u1, w), (v1, v2, u2, e), (v1, u1, u2, s), (v2, u1, u2, n)]
    poly = polygon_labels(config)
    blocked = {s, e, w, n}

    def arc(a, b):
        k = len(poly)
        for step in (1, -1):
            path = [a]
            i = poly.index(a)
            while path[-1] != b:
                i = (i + step) % k
                path.append(poly[i])
            if not blocked & set(path[1:-1]):
                return path
        raise ConstructionError("north/east/south/west are not in cyclic position")

    for (a, b), pair in [((n, e), (v2, u2)), ((n, w), (v2, u1)), ((s, e), (v1, u2)), ((s, w), (v1, u1))]:
        path = arc(a, b)
        simplices += [tuple(sorted((p, q) + pair)) for p, q in zip(path, path[1:])]
    return _checked(config, [tuple(sorted(t)) for t in simplices], Status.TRIANGULATION, "small P_m triangulation")


def _lattice_halves(config):
    poly = polygon_labels(config)
    side_v, along_v, v1, v2 = _half_data(config, "v1", "v2")
    side_u, along_u, u1, u2 = _half_data(config, "u1", "u2")
    top_path = max_monotone_path(config, poly, along_v)
    top_fill = fill_along_path(config, poly, top_path, side_v)
    top = halving_half(config, poly, top_path, top_fill, v1, v2, side_v)
    nm = config.names
    gaps = [tuple(sorted((nm["s"], nm["w"], v1, u1))), tuple(sorted((nm["e"], nm["n"], v2, u2)))]
    return poly, top, top_fill, (side_u, along_u, u1, u2), gaps


def lattice_example_dissection() -> SimplexFamily:
    """Two maximal halves plus the tetrahedra swv1u1 and env2u2."""
    config = build(FamilySpec(Kind.LATTICE_P))
    poly, top, _, (side_u, along_u, u1, u2), gaps = _lattice_halves(config)
    path = max_monotone_path(config, poly, along_u)
    bottom = halving_half(config, poly, path, fill_along_path(config, poly, path, side_u), u1, u2, side_u)
    return _checked(config, top + bottom + gaps, Status.DISSECTION, "lattice dissection")


def lattice_example_triangulation11() -> SimplexFamily:
    """Maximal top half, a length-two bottom path in the same polygon fill."""
    config = build(FamilySpec(Kind.LATTICE_P))
    poly, top, top_fill, (side_u, along_u, u1, u2), gaps = _lattice_halves(config)
    nm = config.names
    for mid in ("e", "w"):
        path = MonotonePath((nm["s"], nm[mid], nm["n"]), along_u)
        try:
            bottom = halving_half(config, poly, path, top_fill, u1, u2, side_u)
        except ConstructionError:
            continue
        fam = SimplexFamily(config, top + bottom + gaps)
        if validate(fam).status == Status.TRIANGULATION:
            return fam
    raise ConstructionError("no length-two bottom path gives a triangulation")


# ---------------------------------------------------------------------------
# prisms and antiprisms

def _cap(config, prefix, m):
    return [config.names[f"{prefix}{i + 1}"] for i in range(m)]


def prism_min_triangulation(m: int, coords: Coords = Coords.REGULAR_APPROX) -> SimplexFamily:
    """Chop alternate cap vertices, then cone the leftover antiprism."""
    config = build(FamilySpec(Kind.PRISM, m, coordinatization=coords))
    u, v = _cap(config, "u", m), _cap(config, "v", m)
    if m == 3:
        chop_u, chop_v = [0], []
    elif m % 2 == 0:
        chop_u = list(range(0, m, 2))
        chop_v = list(range(1, m, 2))
    else:
        chop_u = list(range(0, m - 2, 2))
        chop_v = list(range(1, m - 1, 2))
    simplices = []
    for i in chop_u:
        simplices.append(tuple(sorted((u[i - 1], u[i], u[(i + 1) % m], v[i]))))
    for j in chop_v:
        simplices.append(tuple(sorted((v[j - 1], v[j], v[(j + 1) % m], u[j]))))
    rest = [u[i] for i in range(m) if i not in chop_u] + [v[j] for j in range(m) if j not in chop_v]
    apex = next(x for x in rest if x in v)
    simplices += cone_over_boundary(config, rest, apex)
    return _checked(config, simplices, Status.TRIANGULATION, f"prism minimum m={m}")


def antiprism_min_triangulation(m: int, coords: Coords = Coords.REGULAR_APPROX) -> SimplexFamily:
    config = build(FamilySpec(Kind.ANTIPRISM, m, coordinatization=coords))
    apex = config.names["v1"]
    return _checked(config, cone_over_boundary(config, range(config.n), apex),
                    Status.TRIANGULATION, f"antiprism minimum m={m}")


def prism_max_placing(m: int, coords: Coords = Coords.PARABOLA) -> SimplexFamily:
    """Placing triangulation for the order u_1..u_m, v_1..v_m: (m^2+m-6)/2 tetrahedra."""
    config = build(FamilySpec(Kind.PRISM, m, coordinatization=coords))
    u, v = _cap(config, "u", m), _cap(config, "v", m)
    want = (m * m + m - 6) // 2
    for order in (u + v, u + v[::-1]):
        simplices = placing_simplices(config, order)
        if len(simplices) == want:
            fam = SimplexFamily(config, simplices)
            fam.status = Status.TRIANGULATION
            return fam
    raise ConstructionError(f"visibility condition fails for this {coords.value} prism (m={m})")


def _cut_diagonal(simplices, a, b, c, d):
    """Which diagonal of the quadrilateral with sides ab, cd (a-c, b-d opposite) is used."""
    edges = {frozenset(e) for s in simplices for e in itertools.combinations(s, 2)}
    if frozenset((a, d)) in edges:
        return (a, d)
    if frozenset((b, c)) in edges:
        return (b, c)
    return None


def prism_max_split(m: int, coords: Coords = Coords.REGULAR_APPROX) -> SimplexFamily:
    """Cut the prism into two placing-maximal subprisms sharing a cut diagonal."""
    config = build(FamilySpec(Kind.PRISM, m, coordinatization=coords))
    u, v = _cap(config, "u", m), _cap(config, "v", m)
    k = m // 2 + 1
    parts = [list(range(k)), list(range(k - 1, m)) + [0]]
    if m == 3:
        return placing_triangulation(config)
    options = []
    for idx in parts:
        sub_u = [u[i] for i in idx]
        sub_v = [v[i] for i in idx]
        sub_labels = sub_u + sub_v
        sub = PointConfiguration([config.points[x] for x in sub_labels])
        local = {x: i for i, x in enumerate(sub_labels)}
        want = (len(idx) + 1) * len(idx) // 2 - 3
        found = {}
        for first, second in ((sub_u, sub_v), (sub_v, sub_u)):
            for seq in (second, second[::-1]):
                simp = placing_simplices(sub, [local[x] for x in first + seq])
                if len(simp) != want:
                    continue
                glob = [tuple(sorted(sub_labels[i] for i in s)) for s in simp]
                diag = _cut_diagonal(glob, u[0], v[0], u[idx[0] if idx[0] else k - 1], v[k - 1])
                found.setdefault(diag, glob)
        options.append(found)
    want_total = math.ceil((m * m + 6 * m - 16) / 4)
    for diag in options[0]:
        if diag in options[1]:
            simplices = options[0][diag] + options[1][diag]
            if len(simplices) != want_total:
                continue
            fam = SimplexFamily(config, simplices)
            if validate(fam).status == Status.TRIANGULATION:
                return fam
    raise ConstructionError(f"no compatible subprism triangulations for m={m}")


def antiprism_max_construction(m: int, coords: Coords = Coords.REGULAR_APPROX) -> SimplexFamily:
    """Cones from v_1 and u_ceil(m/2) plus two staircases of mixed tetrahedra.

    Mixed tetrahedra are v_i v_(i+1) u_j u_(j+1) for 1 <= i <= j <= m//2 and
    u_i u_(i+1) v_j v_(j+1) for m//2 + 1 <= i < j <= m (indices mod m).
    """
    config = build(FamilySpec(Kind.ANTIPRISM, m, coordinatization=coords))
    u, v = _cap(config, "u", m), _cap(config, "v", m)
    h = m // 2

    def U(i):
        return u[(i - 1) % m]

    def V(i):
        return v[(i - 1) % m]

    top_apex = U(h + 1)
    simplices = [tuple(sorted(t + (V(1),))) for t in _cap_triangles(config, u)]
    simplices += [tuple(sorted(t + (top_apex,))) for t in _cap_triangles(config, v)]
    for i in range(1, h + 1):
        for j in range(i, h + 1):
            simplices.append(tuple(sorted((V(i), V(i + 1), U(j), U(j + 1)))))
    for i in range(h + 1, m + 1):
        for j in range(i + 1, m + 1):
            simplices.append(tuple(sorted((U(i), U(i + 1), V(j), V(j + 1)))))
    want = (m * m + 8 * m - 16) // 4
    if len(simplices) != want:
        raise ConstructionError(f"antiprism construction has {len(simplices)} tetrahedra, expected {want}")
    return _checked(config, simplices, Status.TRIANGULATION, f"antiprism maximum m={m}")


# ---------------------------------------------------------------------------
# the combinatorial 3-cube with seven tetrahedra

def _compatible_trios(config, clf, labels, x):
    ok = {PairRelation.DISJOINT, PairRelation.COMMON_FACE}
    cands = [c for c in itertools.combinations(sorted(labels), 4)
             if c != x and config.orientation(c) != 0 and clf.classify(c, x) in ok]
    for trio in itertools.combinations(cands, 3):
        if all(clf.classify(a, b) in ok for a, b in itertools.combinations(trio, 2)):
            yield trio


def trapezoid_cube_7(config: PointConfiguration | None = None) -> SimplexFamily:
    """Seven tetrahedra: X = b0 b1 t2 t3 plus three in each non-convex half.

    ``config`` may replace the trapezoid prism by another labelled cube
    (bottom b0..b3, top t0..t3); when b0b1 and t2t3 are coplanar, as in the
    regular cube, the construction is refused.
    """
    config = config or build(FamilySpec(Kind.TRAPEZOID_CUBE))
    nm = config.names
    x = tuple(sorted((nm["b0"], nm["b1"], nm["t2"], nm["t3"])))
    if config.orientation(x) == 0:
        raise ConstructionError("edges b0b1 and t2t3 are coplanar: the scheme needs them skew")
    clf = Classifier(config)
    ok = {PairRelation.DISJOINT, PairRelation.COMMON_FACE}
    lower = [nm[k] for k in ("b0", "b1", "b2", "b3", "t2", "t3")]
    upper = [nm[k] for k in ("b0", "b1", "t0", "t1", "t2", "t3")]
    need = config.total_volume - config.volume(x)
    uppers = list(_compatible_trios(config, clf, upper, x))
    for lo in _compatible_trios(config, clf, lower, x):
        vlo = sum(config.volume(t) for t in lo)
        for hi in uppers:
            if vlo + sum(config.volume(t) for t in hi) != need:
                continue
            if all(clf.classify(a, b) in ok for a in lo for b in hi):
                return _checked(config, [x, *lo, *hi], Status.TRIANGULATION, "seven-tetrahedron cube")
    raise ConstructionError("the two halves admit no compatible three-tetrahedron triangulations")


# ---------------------------------------------------------------------------
# products of cubes

@dataclass(frozen=True)
class HaimanReport:
    d1: int
    d2: int
    s1: int
    s2: int
    product_size: int
    f_lower: int

    @property
    def d(self) -> int:
        return self.d1 + self.d2

    @property
    def g_ratio(self) -> Fraction:
        """g(d) >= g_ratio ** (1/d)."""
        return Fraction(self.f_lower, math.factorial(self.d))

    @property
    def g(self) -> float:
        return float(self.g_ratio) ** (1 / self.d)

    def describe(self) -> str:
        return f"g({self.d}) >= ({self.f_lower}/{math.factorial(self.d)})^(1/{self.d}) = {self.g:.4f}"


def staircase_cells(a: Sequence[int], b: Sequence[int]) -> list[list[tuple]]:
    """Staircase triangulation of (simplex a) x (simplex b) as vertex-pair lists."""
    d1, d2 = len(a) - 1, len(b) - 1
    cells = []
    for ups in itertools.combinations(range(d1 + d2), d2):
        i = j = 0
        cell = [(a[0], b[0])]
        for step in range(d1 + d2):
            if step in ups:
                j += 1
            else:
                i += 1
            cell.append((a[i], b[j]))
        cells.append(cell)
    return cells


def cartesian_product(c1: PointConfiguration, c2: PointConfiguration) -> PointConfiguration:
    return PointConfiguration([p + q for p in c1.points for q in c2.points])


def haiman_product(cube1: tuple, cube2: tuple, check: bool = True) -> tuple[SimplexFamily, HaimanReport]:
    """Triangulate a product of two triangulated cubes cell by cell."""
    (c1, t1), (c2, t2) = cube1, cube2
    prod = cartesian_product(c1, c2)
    n2 = c2.n
    simplices = []
    for s in t1.simplices:
        for t in t2.simplices:
            for cell in staircase_cells(s.vertex_labels, t.vertex_labels):
                simplices.append(tuple(sorted(i * n2 + j for i, j in cell)))
    d1, d2 = c1.dim, c2.dim
    size = t1.size * t2.size * math.comb(d1 + d2, d1)
    if len(simplices) != size:
        raise ConstructionError("staircase count does not match the product formula")
    fam = SimplexFamily(prod, simplices)
    if check:
        rep = validate(fam)
        if rep.status != Status.TRIANGULATION:
            raise ConstructionError(f"product is not a triangulation: {rep.status.value}")
    elif fam.volume != prod.total_volume:
        raise ConstructionError("product cells do not fill the product polytope")
    return fam, HaimanReport(d1, d2, t1.size, t2.size, size, size)


def segment() -> tuple[PointConfiguration, SimplexFamily]:
    cfg = PointConfiguration([(0,), (1,)])
    fam = SimplexFamily(cfg, [(0, 1)], Status.TRIANGULATION)
    return cfg, fam


# ---------------------------------------------------------------------------
# a four-dimensional dissection with a non-convex mismatched region

T1_PRIME = ["1278", "1378", "2378", "1247", "2457", "2357", "3567", "1367", "1467"]
T2_PRIME = ["4578", "4678", "5678", "1248", "2458", "2358", "3568", "1368", "1468"]
SHARED = ["1245", "2356", "1346"]


def _digits(word: str) -> tuple:
    return tuple(sorted(int(c) - 1 for c in word))


def schoenhardt_bipyramid_dissection() -> SimplexFamily:
    """Cone two triangulations of the twisted-prism hull to opposite apices."""
    config = build(FamilySpec(Kind.SCHOENHARDT_BIPYRAMID))
    top, bottom = config.names["top"], config.names["bottom"]
    simplices = [_digits(w) + (top,) for w in T1_PRIME + SHARED]
    simplices += [_digits(w) + (bottom,) for w in T2_PRIME + SHARED]
    return _checked(config, [tuple(sorted(s)) for s in simplices], Status.DISSECTION, "bipyramid dissection")


def link_of_edge(simplices, edge) -> set:
    e = set(edge)
    return set().union(*(set(s) - e for s in simplices if e <= set(s)))
