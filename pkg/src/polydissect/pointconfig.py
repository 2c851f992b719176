"""Point configurations, convex hulls, circuits and total volume."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactgeom import (
    StructuralError,
    dot,
    format_rat,
    homogeneous,
    hyperplane_through,
    int_det,
    nullspace,
    parse_rat,
    primitive,
    rank,
    rat,
)


class DegenerateError(ValueError):
    """The configuration does not affinely span its ambient space."""


@dataclass(frozen=True)
class Facet:
    """A facet of conv(A): ``functional . (x, 1) >= 0`` on every point.

    ``functional`` is a primitive integer vector acting on affine
    coordinates ``(x_1, ..., x_d, 1)``.
    """

    vertex_labels: frozenset
    functional: tuple

    def value(self, point: Sequence[Fraction]) -> Fraction:
        return sum(c * x for c, x in zip(self.functional, point)) + self.functional[-1]


@dataclass(frozen=True)
class Circuit:
    """A minimal affine dependency with its signed Radon partition."""

    positive: frozenset
    negative: frozenset

    @property
    def support(self) -> frozenset:
        return self.positive | self.negative

    def negated(self) -> "Circuit":
        return Circuit(self.negative, self.positive)


class PointConfiguration:
    """Labelled exact-rational points in R^d.

    Labels are the indices ``0..n-1`` in input order.  Instances are treated
    as immutable; predicate results are memoised on the instance.
    """

    def __init__(self, points: Iterable[Sequence], names: Mapping[str, int] | None = None):
        pts = [tuple(rat(x) for x in p) for p in points]
        if not pts:
            raise StructuralError("empty point configuration")
        d = len(pts[0])
        if d < 1 or any(len(p) != d for p in pts):
            raise StructuralError("points have inconsistent dimensions")
        if len(pts) < d + 1:
            raise DegenerateError(f"{len(pts)} points cannot span R^{d}")
        self.points: tuple = tuple(pts)
        self.dim = d
        self.names = dict(names or {})
        self.hpoints = tuple(homogeneous(p) for p in pts)
        self._weights = tuple(h[-1] for h in self.hpoints)
        self._hyperplanes: dict = {}
        self._dets: dict = {}
        if rank([list(p) + [1] for p in pts]) != d + 1:
            raise DegenerateError("configuration is not full-dimensional")

    # -- basic accessors ---------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"PointConfiguration(n={self.n}, dim={self.dim})"

    def label(self, name: str) -> int:
        return self.names[name]

    def labels(self, *names: str) -> tuple:
        return tuple(sorted(self.names[x] for x in names))

    @cached_property
    def ipoints(self) -> tuple:
        """Coordinates scaled by one common denominator to plain integers."""
        den = math.lcm(*(x.denominator for p in self.points for x in p))
        return tuple(tuple(int(x * den) for x in p) for p in self.points)

    @cached_property
    def fingerprint(self) -> str:
        import hashlib

        return hashlib.sha256(format_polytope(self).encode()).hexdigest()[:16]

    # -- exact predicates --------------------------------------------------
    def hdet(self, labels: Sequence[int]) -> int:
        """Integer determinant of the homogeneous rows (positive row scales)."""
        key = tuple(labels)
        v = self._dets.get(key)
        if v is None:
            v = int_det([self.hpoints[i] for i in key])
            self._dets[key] = v
        return v

    def orientation(self, labels: Sequence[int]) -> int:
        v = self.hdet(labels)
        return (v > 0) - (v < 0)

    def volume(self, labels: Sequence[int]) -> Fraction:
        labels = tuple(labels)
        if len(labels) != self.dim + 1:
            raise StructuralError(f"a {self.dim}-simplex needs {self.dim + 1} labels")
        w = math.prod(self._weights[i] for i in labels)
        return Fraction(abs(self.hdet(tuple(sorted(labels)))), w * math.factorial(self.dim))

    def hyperplane(self, labels: Sequence[int]) -> tuple:
        """Integer functional through d labelled points (zero if dependent)."""
        key = tuple(labels)
        h = self._hyperplanes.get(key)
        if h is None:
            h = hyperplane_through([self.hpoints[i] for i in key])
            self._hyperplanes[key] = h
        return h

    def side(self, facet: Sequence[int], label: int) -> int:
        v = dot(self.hyperplane(facet), self.hpoints[label])
        return (v > 0) - (v < 0)

    def side_of_point(self, facet: Sequence[int], hpoint: Sequence[int]) -> int:
        v = dot(self.hyperplane(facet), hpoint)
        return (v > 0) - (v < 0)

    def is_independent(self, labels: Sequence[int]) -> bool:
        return rank([list(self.points[i]) + [1] for i in labels]) == len(labels)

    # -- derived structure -------------------------------------------------
    @cached_property
    def _hull(self) -> tuple:
        return _compute_hull(self)

    def facets(self) -> list[Facet]:
        return list(self._hull[0])

    def vertex_labels(self) -> frozenset:
        return self._hull[1]

    def boundary_labels(self) -> frozenset:
        return frozenset().union(*(f.vertex_labels for f in self._hull[0]))

    def on_common_facet(self, labels: Iterable[int]) -> bool:
        s = set(labels)
        return any(s <= f.vertex_labels for f in self._hull[0])

    @cached_property
    def total_volume(self) -> Fraction:
        return total_volume(self)


def placing_simplices(config: PointConfiguration, order: Sequence[int] | None = None) -> list[tuple]:
    """Simplices of the placing triangulation for ``order`` (default: label order).

    The first affinely independent d+1 points of the order form the initial
    simplex; every later point is coned to the boundary facets it sees
    strictly.  Points already in the current hull are skipped.
    """
    d = config.dim
    order = list(range(config.n)) if order is None else list(order)
    if sorted(order) != list(range(config.n)):
        raise StructuralError("order must be a permutation of the labels")
    initial: list[int] = []
    for p in order:
        if config.is_independent(initial + [p]):
            initial.append(p)
            if len(initial) == d + 1:
                break
    if len(initial) < d + 1:
        raise DegenerateError("configuration is not full-dimensional")
    simplices = [tuple(sorted(initial))]
    boundary: dict = {}
    for i in range(d + 1):
        boundary[tuple(sorted(initial[:i] + initial[i + 1:]))] = initial[i]
    for p in order:
        if p in initial:
            continue
        visible = [
            f for f, apex in boundary.items()
            if config.side(f, p) * config.side(f, apex) < 0
        ]
        for f in visible:
            simplices.append(tuple(sorted(f + (p,))))
        for f in visible:
            del boundary[f]
            for i in range(d):
                g = tuple(sorted(f[:i] + f[i + 1:] + (p,)))
                if g in boundary:
                    del boundary[g]
                else:
                    boundary[g] = f[i]
    return simplices


def _boundary_of(simplices: Sequence[tuple]) -> dict:
    count: dict = {}
    for s in simplices:
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if f in count:
                del count[f]
            else:
                count[f] = s[i]
    return count


def _compute_hull(config: PointConfiguration):
    simplices = placing_simplices(config)
    boundary = _boundary_of(simplices)
    d = config.dim
    by_plane: dict = {}
    for f, apex in boundary.items():
        h = config.hyperplane(f)
        if dot(h, config.hpoints[apex]) < 0:
            h = tuple(-x for x in h)
        key = primitive(h)
        by_plane.setdefault(key, None)
    facets = []
    for h in by_plane:
        on = frozenset(i for i in range(config.n) if dot(h, config.hpoints[i]) == 0)
        facets.append(Facet(on, h))
    facets.sort(key=lambda f: sorted(f.vertex_labels))
    vertices = set()
    for i in range(config.n):
        normals = [f.functional[:d] for f in facets if i in f.vertex_labels]
        if normals and rank(normals) == d:
            vertices.add(i)
    return tuple(facets), frozenset(vertices)


def convex_hull(config: PointConfiguration) -> tuple[list[Facet], dict]:
    """Facets of conv(A) and a vertex / non-vertex classification per label."""
    facets = config.facets()
    verts = config.vertex_labels()
    return facets, {i: ("vertex" if i in verts else "non-vertex") for i in range(config.n)}


def total_volume(config: PointConfiguration, order: Sequence[int] | None = None) -> Fraction:
    return sum((config.volume(s) for s in placing_simplices(config, order)), Fraction(0))


def circuits_within(config: PointConfiguration, support: Iterable[int]) -> list[Circuit]:
    """All circuits whose support lies inside ``support``.

    The representative of each circuit puts its smallest label in the
    positive part.
    """
    labels = sorted(set(support))
    d = config.dim
    if len(labels) > 2 * (d + 1):
        raise StructuralError("support too large for circuit enumeration")
    found = []
    for size in range(2, min(len(labels), d + 2) + 1):
        for subset in itertools.combinations(labels, size):
            cols = [list(config.points[i]) + [Fraction(1)] for i in subset]
            matrix = [[cols[j][r] for j in range(size)] for r in range(d + 1)]
            ns = nullspace(matrix)
            if len(ns) != 1 or any(c == 0 for c in ns[0]):
                continue
            vec = ns[0]
            if vec[0] < 0:
                vec = [-c for c in vec]
            pos = frozenset(l for l, c in zip(subset, vec) if c > 0)
            neg = frozenset(l for l, c in zip(subset, vec) if c < 0)
            found.append(Circuit(pos, neg))
    return found


# ---------------------------------------------------------------------------
# text format: "d n" then n lines of d rationals; '#' comments

def format_polytope(config: PointConfiguration) -> str:
    lines = [f"{config.dim} {config.n}"]
    for p in config.points:
        lines.append(" ".join(format_rat(x) for x in p))
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


class ParseError(ValueError):
    pass


def parse_polytope(text: str) -> PointConfiguration:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("line 1: missing header 'd n'")
    lineno, header = lines[0]
    try:
        d, n = (int(x) for x in header.split())
    except ValueError as exc:
        raise ParseError(f"line {lineno}: header must be 'd n'") from exc
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"line {lineno}: header announces {n} points, found {len(body)}")
    pts = []
    for lineno, line in body:
        fields = line.split()
        if len(fields) != d:
            raise ParseError(f"line {lineno}: expected {d} coordinates, got {len(fields)}")
        try:
            pts.append([parse_rat(x) for x in fields])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return PointConfiguration(pts)


def read_polytope(path) -> PointConfiguration:
    with open(path) as fh:
        return parse_polytope(fh.read())


def write_polytope(config: PointConfiguration, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_polytope(config))
