"""Slow, independent reference computations used by the tests.

Nothing here calls the package's predicates: determinants by the Leibniz
sum, supporting planes by brute force over point triples, and simplex
intersections by enumerating vertices of the intersection polytope.
"""

from __future__ import annotations

import itertools
from fractions import Fraction as F


def perm_sign(p):
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(m):
    n = len(m)
    total = F(0)
    for p in itertools.permutations(range(n)):
        term = F(perm_sign(p))
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


def gauss_solve(a, b):
    """Unique solution of a square system, or None when singular."""
    n = len(a)
    m = [[F(x) for x in row] + [F(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def tet_volume(p):
    rows = [[p[i][k] - p[0][k] for k in range(3)] for i in range(1, 4)]
    return abs(leibniz_det(rows)) / 6


def barycentric(tet, x):
    """Barycentric coordinates of x with respect to a 3-simplex."""
    a = [[tet[j][k] for j in range(4)] for k in range(3)] + [[1, 1, 1, 1]]
    return gauss_solve(a, list(x) + [1])


def plane(p, q, r):
    u = [q[k] - p[k] for k in range(3)]
    v = [r[k] - p[k] for k in range(3)]
    nrm = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
    return nrm, sum(nrm[k] * p[k] for k in range(3))


def supporting_planes(points):
    """Every plane through three points that has all points weakly on one side."""
    out = []
    for i, j, k in itertools.combinations(range(len(points)), 3):
        nrm, off = plane(points[i], points[j], points[k])
        if nrm == (0, 0, 0):
            continue
        vals = [sum(nrm[t] * p[t] for t in range(3)) - off for p in points]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            out.append((nrm, off))
    return out


def on_plane(pl, x):
    nrm, off = pl
    return sum(nrm[t] * x[t] for t in range(3)) == off


def euler_counts(points, tets):
    """(boundary vertices used, interior vertices used, interior edges)."""
    sup = supporting_planes(points)
    used = sorted({i for t in tets for i in t})
    bnd = [i for i in used if any(on_plane(pl, points[i]) for pl in sup)]
    edges = {e for t in tets for e in itertools.combinations(sorted(t), 2)}
    interior = [e for e in edges if not any(on_plane(pl, points[e[0]]) and on_plane(pl, points[e[1]]) for pl in sup)]
    return len(bnd), len(used) - len(bnd), len(interior)


def hull_volume(points):
    """Volume of the convex hull by coning boundary triangles from a point."""
    sup = supporting_planes(points)
    c = [sum(p[k] for p in points) / len(points) for k in range(3)]
    seen, vol = set(), F(0)
    for pl in sup:
        on = [i for i, p in enumerate(points) if on_plane(pl, p)]
        key = frozenset(on)
        if key in seen:
            continue
        seen.add(key)
        # fan the facet polygon: sort around its centroid by angle-free comparison
        face = _order_face([points[i] for i in on], pl[0])
        for t in range(1, len(face) - 1):
            vol += tet_volume([c, face[0], face[t], face[t + 1]])
    return vol


def _order_face(pts, nrm):
    # keep only hull vertices of the facet, then order by gift wrapping in the plane
    drop = max(range(3), key=lambda k: abs(nrm[k]))
    keep = [k for k in range(3) if k != drop]
    pp = [(p[keep[0]], p[keep[1]], p) for p in pts]
    pp = sorted(set(pp), key=lambda t: (t[0], t[1]))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pp:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pp):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [t[2] for t in lower[:-1] + upper[:-1]]


def intersection_vertices(ta, tb):
    """Vertices of conv(ta) & conv(tb) for two 3-simplices (brute force)."""
    hs = []
    for tet in (ta, tb):
        for drop in range(4):
            face = [tet[i] for i in range(4) if i != drop]
            nrm, off = plane(*face)
            if sum(nrm[k] * tet[drop][k] for k in range(3)) < off:
                nrm, off = tuple(-x for x in nrm), -off
            hs.append((nrm, off))  # nrm . x >= off
    verts = set()
    for h1, h2, h3 in itertools.combinations(hs, 3):
        x = gauss_solve([h1[0], h2[0], h3[0]], [h1[1], h2[1], h3[1]])
        if x is None:
            continue
        if all(sum(n[k] * x[k] for k in range(3)) >= o for n, o in hs):
            verts.add(tuple(x))
    return list(verts)


def affine_rank(pts):
    if not pts:
        return -1
    rows = [[p[k] - pts[0][k] for k in range(3)] for p in pts[1:]]
    rank, rows = 0, [list(map(F, r)) for r in rows]
    for c in range(3):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def brute_relation(points, a, b):
    """0 disjoint, 1 common face, 2 improper, 3 interior overlap."""
    ta, tb = [points[i] for i in a], [points[i] for i in b]
    verts = intersection_vertices(ta, tb)
    if affine_rank(verts) == 3:
        return 3
    shared = set(a) & set(b)
    if not verts:
        return 0
    # proper iff every intersection vertex lies in the shared face of a
    for x in verts:
        lam = barycentric(ta, x)
        if any(lam[i] != 0 for i, lab in enumerate(a) if lab not in shared):
            return 2
    return 1 if shared else 2
