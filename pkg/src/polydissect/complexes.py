"""Dissections and triangulations: validation, mismatched regions, audits."""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactgeom import StructuralError, nullspace, primitive, strict_common_point
from .pointconfig import PointConfiguration
from .simplexrel import (
    Classifier,
    PairRelation,
    Simplex,
    bulk_relation_table,
    make_simplex,
)

log = logging.getLogger(__name__)


class Status(enum.Enum):
    UNKNOWN = "UNKNOWN"
    DISSECTION = "DISSECTION"
    TRIANGULATION = "TRIANGULATION"
    INVALID = "INVALID"


class ConsistencyError(AssertionError):
    """An identity that must hold for valid inputs failed: a bug, not bad data."""


class SimplexFamily:
    """A set of d-simplices of one configuration, with a validation status."""

    def __init__(self, config: PointConfiguration, simplices: Iterable, status: Status = Status.UNKNOWN):
        self.config = config
        simps = []
        for s in simplices:
            simps.append(s if isinstance(s, Simplex) else make_simplex(config, s))
        self.simplices: tuple = tuple(sorted(simps))
        self.status = status
        self.diagnostics: dict = {}

    @property
    def size(self) -> int:
        return len(self.simplices)

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def labels(self) -> list[tuple]:
        return [s.vertex_labels for s in self.simplices]

    @property
    def volume(self) -> Fraction:
        return sum((s.volume for s in self.simplices), Fraction(0))

    def __repr__(self) -> str:
        return f"SimplexFamily(size={self.size}, status={self.status.value})"

    def validate(self) -> "SimplexFamily":
        validate(self)
        return self


@dataclass
class ValidationReport:
    status: Status
    size: int
    volume: Fraction
    total_volume: Fraction
    overlaps: list = field(default_factory=list)
    improper: list = field(default_factory=list)

    @property
    def volume_deficit(self) -> Fraction:
        return self.total_volume - self.volume


def pair_relations(family: SimplexFamily) -> dict:
    """Relation of every pair of simplices in the family, keyed by index pair."""
    cfg = family.config
    labels = family.labels()
    if len(labels) > 150 and cfg.n <= 40:
        table = bulk_relation_table(cfg, family.simplices)
        return {(i, j): r for i, j, r in table.pairs()}
    clf = Classifier(cfg)
    return {
        (i, j): clf.classify(labels[i], labels[j])
        for i, j in itertools.combinations(range(len(labels)), 2)
    }


def validate(family: SimplexFamily) -> ValidationReport:
    """Classify the family as TRIANGULATION, DISSECTION or INVALID.

    A dissection has pairwise interior-disjoint simplices whose volumes add
    up to the volume of conv(A); closed interior-disjoint simplices of full
    total volume cover the polytope.
    """
    cfg = family.config
    rels = pair_relations(family)
    labels = family.labels()
    overlaps = [(labels[i], labels[j]) for (i, j), r in rels.items() if r == PairRelation.INTERIOR_OVERLAP]
    improper = [(labels[i], labels[j]) for (i, j), r in rels.items() if r == PairRelation.IMPROPER_BOUNDARY]
    vol = family.volume
    total = cfg.total_volume
    if overlaps or vol != total:
        status = Status.INVALID
    elif improper:
        status = Status.DISSECTION
    else:
        status = Status.TRIANGULATION
    report = ValidationReport(status, family.size, vol, total, overlaps, improper)
    family.status = status
    family.diagnostics = {
        "overlapping_pairs": overlaps,
        "improper_pairs": improper,
        "volume_deficit": total - vol,
    }
    return report


# ---------------------------------------------------------------------------
# mismatched regions

@dataclass
class MismatchedRegion:
    hyperplane: tuple
    member_faces: list
    side_a: list
    side_b: list
    polygon_vertices: list | None = None

    @property
    def k(self) -> int:
        labels = set().union(*map(set, self.member_faces))
        return len(self.polygon_vertices) if self.polygon_vertices is not None else len(labels)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "hyperplane": list(self.hyperplane),
            "sideA": [list(f) for f in self.side_a],
            "sideB": [list(f) for f in self.side_b],
            "polygon": list(self.polygon_vertices) if self.polygon_vertices is not None else None,
        }


def _canonical_plane(config: PointConfiguration, face: tuple) -> tuple:
    h = primitive(config.hyperplane(face))
    lead = next(x for x in h if x)
    return h if lead > 0 else tuple(-x for x in h)


def _project(config: PointConfiguration, plane: tuple, labels: Iterable[int]):
    """Affine isomorphism from the hyperplane to R^(d-1): drop one coordinate."""
    d = config.dim
    drop = max(range(d), key=lambda c: abs(plane[c]))
    return {i: tuple(x for c, x in enumerate(config.points[i]) if c != drop) for i in labels}


def _faces_overlap(proj: dict, f: tuple, g: tuple) -> bool:
    """Relative interiors of two (d-1)-simplices in one hyperplane meet."""
    from .exactgeom import simplex_halfspaces

    pa = [proj[i] for i in f]
    pb = [proj[i] for i in g]
    if len(pa[0]) == 0:
        return True
    feasible, _, _ = strict_common_point(simplex_halfspaces(pa), simplex_halfspaces(pb))
    return feasible


def face_incidences(family: SimplexFamily) -> dict:
    """(d-1)-face -> list of opposite vertices over the family's simplices."""
    out: dict = {}
    for s in family.simplices:
        v = s.vertex_labels
        for i in range(len(v)):
            out.setdefault(v[:i] + v[i + 1:], []).append(v[i])
    return out


def mismatched_regions(family: SimplexFamily) -> list[MismatchedRegion]:
    """Connected components (of size > 1) of the improper-coplanarity graph.

    Nodes are the (d-1)-faces of the family's simplices; two faces are
    adjacent when they lie in a common hyperplane, differ, and their
    relative interiors meet.  In dimension 3 each region also carries its
    convex polygon (cyclic vertex order) and the two side triangulations.
    """
    cfg = family.config
    d = cfg.dim
    inc = face_incidences(family)
    by_plane: dict = {}
    for face in inc:
        by_plane.setdefault(_canonical_plane(cfg, face), []).append(face)
    regions = []
    for plane, faces in sorted(by_plane.items()):
        if len(faces) < 2:
            continue
        faces.sort()
        proj = _project(cfg, plane, set().union(*map(set, faces)))
        parent = list(range(len(faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in itertools.combinations(range(len(faces)), 2):
            if _faces_overlap(proj, faces[i], faces[j]):
                parent[find(i)] = find(j)
        comps: dict = {}
        for i in range(len(faces)):
            comps.setdefault(find(i), []).append(faces[i])
        for members in comps.values():
            if len(members) < 2:
                continue
            side_a, side_b = [], []
            for f in members:
                signs = {cfg.side(f, apex) * _orient_sign(cfg, f, plane) for apex in inc[f]}
                if len(signs) != 1:
                    log.warning("face %s is shared by simplices on both sides of its plane", f)
                (side_a if max(signs) > 0 else side_b).append(f)
            poly = _polygon_order(cfg, plane, members) if d == 3 else None
            regions.append(MismatchedRegion(plane, sorted(members), sorted(side_a), sorted(side_b), poly))
    return regions


def _orient_sign(cfg, face, plane) -> int:
    # relate config.hyperplane(face) to the canonical plane orientation
    h = primitive(cfg.hyperplane(face))
    return 1 if h == plane else -1


def _polygon_order(cfg: PointConfiguration, plane: tuple, faces: list) -> list:
    """Vertices of the convex hull of the region, in cyclic order."""
    labels = sorted(set().union(*map(set, faces)))
    proj = _project(cfg, plane, labels)
    pts = sorted(labels, key=lambda i: proj[i])

    def cross(o, a, b):
        return (proj[a][0] - proj[o][0]) * (proj[b][1] - proj[o][1]) - (proj[a][1] - proj[o][1]) * (proj[b][0] - proj[o][0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _area2(cfg, plane, tri) -> Fraction:
    proj = _project(cfg, plane, tri)
    a, b, c = (proj[i] for i in tri)
    return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def check_region_convexity(family: SimplexFamily, region: MismatchedRegion) -> dict:
    """Literal checks that a 3D region is a convex polygon with two edge-disjoint triangulations."""
    cfg = family.config
    poly = region.polygon_vertices
    plane = region.hyperplane
    proj = _project(cfg, plane, poly)
    n = len(poly)
    poly_area2 = abs(sum(proj[poly[i]][0] * proj[poly[(i + 1) % n]][1] - proj[poly[(i + 1) % n]][0] * proj[poly[i]][1] for i in range(n)))
    area_a = sum(_area2(cfg, plane, t) for t in region.side_a)
    area_b = sum(_area2(cfg, plane, t) for t in region.side_b)
    labels = set().union(*map(set, region.member_faces))
    boundary = {frozenset((poly[i], poly[(i + 1) % n])) for i in range(n)}

    def interior_edges(tris):
        return {frozenset(e) for t in tris for e in itertools.combinations(t, 2)} - boundary

    shared = interior_edges(region.side_a) & interior_edges(region.side_b)
    return {
        "convex_polygon": set(poly) == labels,
        "side_a_tiles": area_a == poly_area2,
        "side_b_tiles": area_b == poly_area2,
        "no_shared_interior_edge": not shared,
        "two_sides": bool(region.side_a) and bool(region.side_b),
    }


def _relint_meet(cfg: PointConfiguration, f: tuple, g: tuple) -> bool:
    """Do the relative interiors of two triangles in R^3 intersect?"""
    pf = [cfg.points[i] for i in f]
    pg = [cfg.points[i] for i in g]
    # unknowns: barycentrics lam (3) and mu (3); sum lam = 1, sum mu = 1, lam.P = mu.Q
    rows = [[1, 1, 1, 0, 0, 0, 1], [0, 0, 0, 1, 1, 1, 1]]
    for c in range(3):
        rows.append([p[c] for p in pf] + [-q[c] for q in pg] + [0])
    a = [[Fraction(x) for x in r[:6]] for r in rows]
    b = [Fraction(r[6]) for r in rows]
    base = _particular_solution(a, b)
    if base is None:
        return False
    null = nullspace(a)
    if not null:
        return all(x > 0 for x in base)
    if len(null) == 1:
        lo, hi = None, None
        for x0, v in zip(base, null[0]):
            if v == 0:
                if x0 <= 0:
                    return False
                continue
            bound = -x0 / v
            if v > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        return lo is None or hi is None or lo < hi
    raise StructuralError("coplanar triangles: use the in-plane test")


def _particular_solution(a, b):
    from .exactgeom import _row_echelon

    aug = [row + [rhs] for row, rhs in zip(a, b)]
    red, pivots = _row_echelon([list(r) for r in aug])
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return x


def regions_disjoint(family: SimplexFamily, regions: Sequence[MismatchedRegion]) -> bool:
    """Distinct regions have disjoint relative interiors."""
    cfg = family.config
    for r1, r2 in itertools.combinations(regions, 2):
        if r1.hyperplane == r2.hyperplane:
            proj = _project(cfg, r1.hyperplane, set().union(*map(set, r1.member_faces + r2.member_faces)))
            if any(_faces_overlap(proj, f, g) for f in r1.member_faces for g in r2.member_faces):
                return False
            continue
        if cfg.dim == 3 and any(_relint_meet(cfg, f, g) for f in r1.member_faces for g in r2.member_faces):
            return False
    return True


# ---------------------------------------------------------------------------
# Euler / inflation audit and size bounds

@dataclass
class EulerAudit:
    n: int
    n_prime: int
    e_i: int
    tetra_count: int
    region_sizes: tuple = ()

    @property
    def predicted(self) -> int:
        """n + e_i - n' - 3, corrected by the holes an inflation would open."""
        return self.n + self.e_i - self.n_prime - 3 - sum(k - 3 for k in self.region_sizes)

    @property
    def holds(self) -> bool:
        return self.tetra_count == self.predicted

    def as_dict(self) -> dict:
        return {"n": self.n, "n_prime": self.n_prime, "e_i": self.e_i, "size": self.tetra_count,
                "region_sizes": list(self.region_sizes), "holds": self.holds}


def euler_audit(family: SimplexFamily, regions: Sequence[MismatchedRegion] | None = None) -> EulerAudit:
    """Count boundary/interior vertices and interior edges of a 3D family.

    For a triangulation the tetrahedron count must equal n + e_i - n' - 3.
    For a mismatching dissection each mismatched k-gon lowers it by k - 3
    (inflate the region, cone the hole from a new interior point, count).
    """
    cfg = family.config
    if cfg.dim != 3:
        raise StructuralError("the Euler audit is three-dimensional")
    if regions is None:
        regions = mismatched_regions(family) if family.status != Status.TRIANGULATION else []
    used = set().union(*map(set, family.labels()))
    boundary = cfg.boundary_labels()
    n = len(used & boundary)
    n_prime = len(used - boundary)
    edges = {e for s in family.simplices for e in itertools.combinations(s.vertex_labels, 2)}
    e_i = sum(1 for e in edges if not cfg.on_common_facet(e))
    audit = EulerAudit(n, n_prime, e_i, family.size, tuple(r.k for r in regions))
    if not audit.holds:
        raise ConsistencyError(
            f"Euler identity fails: {audit.tetra_count} != {audit.predicted} ({audit})")
    return audit


class BoundsViolation(ConsistencyError):
    pass


def check_bounds(family: SimplexFamily, regions: Sequence[MismatchedRegion] | None = None) -> dict:
    """n - 2 <= |D| (mismatching dissections) and |D| <= C(n-2, 2) (all dissections).

    n counts hull vertices; families that use other points are reported
    with ``applies`` False and never fail.
    """
    cfg = family.config
    if regions is None:
        regions = mismatched_regions(family)
    vertices = cfg.vertex_labels()
    n = len(vertices)
    lower, upper = n - 2, math.comb(n - 2, 2)
    mismatching = bool(regions)
    # the bounds speak about simplices spanned by polytope vertices only
    applies = all(i in vertices for s in family.labels() for i in s)
    ok = not applies or (family.size <= upper and (not mismatching or family.size >= lower))
    verdict = {"lower": lower, "upper": upper, "size": family.size, "mismatching": mismatching,
               "applies": applies, "ok": ok}
    if not ok:
        raise BoundsViolation(f"dissection size outside [{lower}, {upper}]: {verdict}")
    return verdict


def family_report(family: SimplexFamily) -> dict:
    """JSON-ready summary: status, size, Euler counts, regions and bounds."""
    rep = validate(family)
    out = {"status": rep.status.value, "size": family.size}
    if rep.status == Status.INVALID:
        out["volume_deficit"] = str(rep.volume_deficit)
        out["overlapping_pairs"] = [list(map(list, p)) for p in rep.overlaps[:20]]
        return out
    regions = mismatched_regions(family) if rep.status == Status.DISSECTION else []
    out["regions"] = [r.as_dict() for r in regions]
    if family.config.dim == 3:
        audit = euler_audit(family, regions)
        out.update(n=audit.n, n_prime=audit.n_prime, e_i=audit.e_i)
        out["bounds"] = check_bounds(family, regions)
    return out
