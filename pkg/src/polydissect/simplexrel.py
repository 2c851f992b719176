"""Full-dimensional simplices of a configuration and their pairwise relations."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactgeom import StructuralError, dot, homogeneous, int_det, simplex_halfspaces, strict_common_point
from .pointconfig import PointConfiguration, circuits_within


class PairRelation(enum.IntEnum):
    DISJOINT = 0
    COMMON_FACE = 1
    IMPROPER_BOUNDARY = 2
    INTERIOR_OVERLAP = 3


@dataclass(frozen=True, order=True)
class Simplex:
    vertex_labels: tuple
    volume: Fraction = field(compare=False)

    def __post_init__(self):
        if self.volume <= 0:
            raise StructuralError(f"degenerate simplex {self.vertex_labels}")

    def __iter__(self):
        return iter(self.vertex_labels)

    def __len__(self):
        return len(self.vertex_labels)

    def facets(self):
        v = self.vertex_labels
        return [v[:i] + v[i + 1:] for i in range(len(v))]


def make_simplex(config: PointConfiguration, labels: Iterable[int]) -> Simplex:
    labels = tuple(sorted(labels))
    if len(labels) != config.dim + 1:
        raise StructuralError(f"a {config.dim}-simplex needs {config.dim + 1} labels")
    if len(set(labels)) != len(labels) or not all(0 <= i < config.n for i in labels):
        raise StructuralError(f"invalid labels {labels}")
    return Simplex(labels, config.volume(labels))


def enumerate_simplices(config: PointConfiguration) -> list[Simplex]:
    """All nondegenerate (d+1)-subsets, in lexicographic label order."""
    out = []
    for labels in itertools.combinations(range(config.n), config.dim + 1):
        if config.hdet(labels) != 0:
            out.append(Simplex(labels, config.volume(labels)))
    return out


# ---------------------------------------------------------------------------
# classification

def _separating_normals(config: PointConfiguration, a: tuple, b: tuple):
    """Candidate normals of facets of conv(a) - conv(b), as integer vectors.

    Each facet of the Minkowski difference is spanned by edge directions of
    a k-face of ``a`` and an l-face of ``b`` with k + l = d - 1.  Facets of
    the simplices themselves come first since they separate most pairs.
    """
    d = config.dim
    for f in itertools.combinations(a, d):
        yield config.hyperplane(f)[:d]
    for f in itertools.combinations(b, d):
        yield config.hyperplane(f)[:d]
    pts = config.ipoints
    for k in range(1, d - 1):
        l = d - 1 - k
        for fa in itertools.combinations(a, k + 1):
            da = [[x - y for x, y in zip(pts[i], pts[fa[0]])] for i in fa[1:]]
            for fb in itertools.combinations(b, l + 1):
                db = [[x - y for x, y in zip(pts[i], pts[fb[0]])] for i in fb[1:]]
                yield _orthogonal(da + db, d)


def _orthogonal(vectors, d):
    # generalized cross product of d-1 integer vectors in R^d
    return [
        (-1) ** j * int_det([[v[c] for c in range(d) if c != j] for v in vectors])
        for j in range(d)
    ]


def separating_hyperplane(config: PointConfiguration, a: tuple, b: tuple):
    """Integer normal u and level c with u.x <= c on ``a`` and u.x >= c on ``b``.

    Values are measured on ``config.ipoints``.  Returns ``None`` exactly when
    the interiors meet: interiors are disjoint iff the origin is not interior
    to conv(a) - conv(b), iff one of its facet normals weakly separates.
    """
    pts = config.ipoints
    for u in _separating_normals(config, a, b):
        if not any(u):
            continue
        va = [dot(u, pts[i]) for i in a]
        vb = [dot(u, pts[i]) for i in b]
        if max(va) <= min(vb):
            return tuple(u), max(va)
        if max(vb) <= min(va):
            return tuple(-c for c in u), -min(va)
    return None


class Classifier:
    """Memoising pair classifier for one configuration."""

    def __init__(self, config: PointConfiguration):
        self.config = config
        self._circuit_cache: dict = {}

    def _circuits(self, labels: frozenset):
        c = self._circuit_cache.get(labels)
        if c is None:
            c = circuits_within(self.config, labels)
            self._circuit_cache[labels] = c
        return c

    def interiors_meet(self, a: tuple, b: tuple) -> bool:
        return self._quick_separation(a, b) is None and separating_hyperplane(self.config, a, b) is None

    def _quick_separation(self, a, b):
        """Separation by a facet hyperplane of ``a`` or ``b`` via orientation signs."""
        cfg = self.config
        for x, y in ((a, b), (b, a)):
            for i in range(len(x)):
                f = x[:i] + x[i + 1:]
                apex_side = cfg.side(f, x[i])
                if all(cfg.side(f, j) * apex_side <= 0 for j in y):
                    return f
        return None

    def classify(self, a: tuple, b: tuple) -> PairRelation:
        cfg = self.config
        a, b = tuple(a), tuple(b)
        if a == b:
            return PairRelation.INTERIOR_OVERLAP
        sa, sb = set(a), set(b)
        shared = sa & sb
        f = self._quick_separation(a, b)
        if f is not None:
            on_a = {i for i in a if cfg.side(f, i) == 0}
            on_b = {j for j in b if cfg.side(f, j) == 0}
        else:
            sep = separating_hyperplane(cfg, a, b)
            if sep is None:
                return PairRelation.INTERIOR_OVERLAP
            u, c = sep
            pts = cfg.ipoints
            on_a = {i for i in a if dot(u, pts[i]) == c}
            on_b = {j for j in b if dot(u, pts[j]) == c}
        # the closed intersection lies in the separating hyperplane
        if on_a <= sb or on_b <= sa:
            return PairRelation.COMMON_FACE if shared else PairRelation.DISJOINT
        if self._improper(frozenset(on_a), frozenset(on_b)):
            return PairRelation.IMPROPER_BOUNDARY
        return PairRelation.COMMON_FACE if shared else PairRelation.DISJOINT

    def _improper(self, fa: frozenset, fb: frozenset) -> bool:
        for c in self._circuits(fa | fb):
            if (c.positive <= fa and c.negative <= fb) or (c.negative <= fa and c.positive <= fb):
                return True
        return False


def classify_pair(config: PointConfiguration, a, b, classifier: Classifier | None = None) -> PairRelation:
    la = a.vertex_labels if isinstance(a, Simplex) else tuple(sorted(a))
    lb = b.vertex_labels if isinstance(b, Simplex) else tuple(sorted(b))
    n = config.dim + 1
    if len(la) != n or len(lb) != n or max(la + lb) >= config.n:
        raise StructuralError("simplices do not belong to this configuration")
    return (classifier or Classifier(config)).classify(la, lb)


def classify_pair_by_lp(config: PointConfiguration, a, b) -> PairRelation:
    """Slow reference route: the exact max-min-slack LP plus circuits on a | b."""
    la = tuple(a.vertex_labels if isinstance(a, Simplex) else sorted(a))
    lb = tuple(b.vertex_labels if isinstance(b, Simplex) else sorted(b))
    pa = [config.points[i] for i in la]
    pb = [config.points[i] for i in lb]
    feasible, _, _ = strict_common_point(simplex_halfspaces(pa), simplex_halfspaces(pb))
    if feasible:
        return PairRelation.INTERIOR_OVERLAP
    sa, sb = frozenset(la), frozenset(lb)
    for c in circuits_within(config, sa | sb):
        if (c.positive <= sa and c.negative <= sb) or (c.negative <= sa and c.positive <= sb):
            return PairRelation.IMPROPER_BOUNDARY
    return PairRelation.COMMON_FACE if sa & sb else PairRelation.DISJOINT


class RelationTable:
    """Symmetric pairwise relation table packed as 2-bit codes.

    Code layout: the pair (i, j), i < j, lives at triangular index
    ``j*(j-1)//2 + i``.
    """

    def __init__(self, n: int, codes: bytearray):
        self.n = n
        self._codes = codes

    @staticmethod
    def _index(i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return j * (j - 1) // 2 + i

    def __getitem__(self, key) -> PairRelation:
        i, j = key
        if i == j:
            return PairRelation.INTERIOR_OVERLAP
        k = self._index(i, j)
        return PairRelation((self._codes[k >> 2] >> ((k & 3) * 2)) & 3)

    def __len__(self) -> int:
        return self.n * (self.n - 1) // 2

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "RelationTable":
        n = dense.shape[0]
        iu, ju = np.triu_indices(n, k=1)
        # order by j then i to match _index
        order = np.lexsort((iu, ju))
        flat = dense[iu[order], ju[order]].astype(np.uint8)
        pad = (-len(flat)) % 4
        flat = np.concatenate([flat, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 4)
        packed = flat[:, 0] | (flat[:, 1] << 2) | (flat[:, 2] << 4) | (flat[:, 3] << 6)
        return cls(n, bytearray(packed.astype(np.uint8).tobytes()))

    def dense(self) -> np.ndarray:
        codes = np.frombuffer(bytes(self._codes), dtype=np.uint8)
        flat = np.stack([(codes >> s) & 3 for s in (0, 2, 4, 6)], axis=1).reshape(-1)[: len(self)]
        out = np.full((self.n, self.n), int(PairRelation.INTERIOR_OVERLAP), dtype=np.int8)
        iu, ju = np.triu_indices(self.n, k=1)
        order = np.lexsort((iu, ju))
        out[iu[order], ju[order]] = flat
        out[ju[order], iu[order]] = flat
        return out

    def pairs(self, relation: PairRelation | None = None):
        for j in range(self.n):
            for i in range(j):
                r = self[i, j]
                if relation is None or r == relation:
                    yield i, j, r

    def counts(self) -> dict:
        out = {r.name: 0 for r in PairRelation}
        for _, _, r in self.pairs():
            out[r.name] += 1
        return out


def relation_table(
    config: PointConfiguration,
    simplices: Sequence[Simplex],
    classifier: Classifier | None = None,
    prefilter=None,
) -> RelationTable:
    """Classify every pair of ``simplices``.

    ``prefilter(i, j)`` may return a known relation (used by the solver to
    short-circuit pairs already known to overlap).
    """
    clf = classifier or Classifier(config)
    n = len(simplices)
    total = n * (n - 1) // 2
    codes = bytearray((total + 3) // 4)
    labels = [s.vertex_labels for s in simplices]
    k = 0
    for j in range(n):
        lj = labels[j]
        for i in range(j):
            r = prefilter(i, j) if prefilter else None
            if r is None:
                r = clf.classify(labels[i], lj)
            if r:
                codes[k >> 2] |= int(r) << ((k & 3) * 2)
            k += 1
    return RelationTable(n, codes)


# ---------------------------------------------------------------------------
# simplex file format: one simplex per line, 0-based labels, '#' comments

def format_simplices(simplices: Iterable) -> str:
    lines = []
    for s in simplices:
        labels = s.vertex_labels if isinstance(s, Simplex) else tuple(sorted(s))
        lines.append(" ".join(str(i) for i in labels))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_simplices(text: str, config: PointConfiguration | None = None) -> list[tuple]:
    from .pointconfig import ParseError

    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            labels = tuple(sorted(int(x) for x in line.split()))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: labels must be integers") from exc
        if config is not None:
            if len(labels) != config.dim + 1:
                raise ParseError(f"line {lineno}: expected {config.dim + 1} labels, got {len(labels)}")
            if any(not 0 <= i < config.n for i in labels):
                raise ParseError(f"line {lineno}: label out of range")
        out.append(labels)
    return out


# ---------------------------------------------------------------------------
# bulk classification for whole configurations

_WEIGHT_SCHEDULE = (
    (1, 1, 1, 1, 1, 1, 1),
    (1, 2, 3, 4, 5, 6, 7),
    (7, 3, 5, 2, 11, 13, 17),
    (5, 8, 13, 21, 34, 55, 89),
    (19, 2, 31, 7, 3, 23, 11),
)


def _signs(rows: list, cols: list) -> np.ndarray:
    """Exact sign matrix of rows @ cols.T for integer vectors."""
    if not rows or not cols:
        return np.zeros((len(rows), len(cols)), dtype=np.int8)
    width = len(rows[0])
    big_r = max(abs(x) for r in rows for x in r)
    big_c = max(abs(x) for c in cols for x in c)
    if big_r * big_c * width < 2 ** 62:
        prod = np.asarray(rows, dtype=np.int64) @ np.asarray(cols, dtype=np.int64).T
    else:
        prod = np.asarray(rows, dtype=object) @ np.asarray(cols, dtype=object).T
    return np.sign(prod).astype(np.int8)


class SimplexGeometry:
    """Facet/sign bookkeeping shared by the bulk classifier and the solver.

    Holds every spanning hyperplane through d points, the sign of every
    configuration point against it, and a set of generic sample points (one
    per simplex, lying on no spanning hyperplane) together with the matrix
    telling which simplex contains which sample point in its interior.
    """

    def __init__(self, config: PointConfiguration, simplices: Sequence[Simplex]):
        self.config = config
        self.simplices = list(simplices)
        d = config.dim
        self.plane_index: dict = {}
        planes = []
        for f in itertools.combinations(range(config.n), d):
            h = config.hyperplane(f)
            if any(h):
                self.plane_index[f] = len(planes)
                planes.append(h)
        self.planes = planes
        self.point_signs = _signs(planes, list(config.hpoints))
        n_s = len(self.simplices)
        self.facet_idx = np.zeros((n_s, d + 1), dtype=np.int64)
        self.apex_sign = np.zeros((n_s, d + 1), dtype=np.int8)
        for k, s in enumerate(self.simplices):
            v = s.vertex_labels
            for i in range(d + 1):
                pi = self.plane_index[v[:i] + v[i + 1:]]
                self.facet_idx[k, i] = pi
                self.apex_sign[k, i] = self.point_signs[pi, v[i]]
        self._build_samples()

    def _build_samples(self):
        cfg = self.config
        d = cfg.dim
        seen = {}
        hsamples = []
        for s in self.simplices:
            for weights in _WEIGHT_SCHEDULE:
                w = weights[: d + 1]
                q = [sum(wi * cfg.points[i][c] for wi, i in zip(w, s.vertex_labels)) / sum(w)
                     for c in range(d)]
                hq = homogeneous(q)
                if hq in seen:
                    break
                if all(dot(h, hq) != 0 for h in self.planes):
                    seen[hq] = len(hsamples)
                    hsamples.append(hq)
                    break
        self.samples = hsamples
        sig = _signs(self.planes, hsamples)
        # member[s, p]: sample p strictly inside simplex s
        member = np.ones((len(self.simplices), len(hsamples)), dtype=bool)
        for i in range(d + 1):
            member &= sig[self.facet_idx[:, i]] == self.apex_sign[:, i][:, None]
        self.member = member

    def vertex_masks(self) -> np.ndarray:
        return np.array([sum(1 << i for i in s.vertex_labels) for s in self.simplices], dtype=np.uint64)

    def facet_masks(self) -> tuple[np.ndarray, np.ndarray]:
        """Per (simplex, facet): points not strictly on the apex side; points on the facet plane."""
        n = self.config.n
        weights = (np.uint64(1) << np.arange(n, dtype=np.uint64))
        ps = self.point_signs[self.facet_idx]  # (N, d+1, n)
        prod = ps * self.apex_sign[:, :, None]
        out_mask = ((prod <= 0) * weights).sum(axis=2, dtype=np.uint64)
        on_mask = ((ps == 0) * weights).sum(axis=2, dtype=np.uint64)
        return out_mask, on_mask


def _mask_labels(mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def bulk_relation_table(
    config: PointConfiguration,
    simplices: Sequence[Simplex],
    geometry: SimplexGeometry | None = None,
    classifier: Classifier | None = None,
    chunk: int = 256,
) -> RelationTable:
    """Relation table for many simplices at once.

    Same verdicts as :func:`relation_table`.  Facet separation and sample
    point overlap are decided with vectorised bit operations; only the
    remaining pairs go through the exact per-pair classifier.
    """
    if config.n > 64:
        return relation_table(config, simplices, classifier)
    geo = geometry or SimplexGeometry(config, simplices)
    clf = classifier or Classifier(config)
    n_s = len(simplices)
    d = config.dim
    labels = [s.vertex_labels for s in simplices]
    vmask = geo.vertex_masks()
    out_mask, on_mask = geo.facet_masks()
    member = geo.member.astype(np.float32)
    dense = np.zeros((n_s, n_s), dtype=np.int8)
    improper_cache: dict = {}
    for start in range(0, n_s, chunk):
        stop = min(n_s, start + chunk)
        rows = np.arange(start, stop)
        va = vmask[rows][:, None]
        vb = vmask[None, :]
        shared = (va & vb) != 0
        rel = np.full((stop - start, n_s), -1, dtype=np.int8)
        overlap = (member[rows] @ member.T) > 0
        # facet separation: a's facets against b, then b's facets against a
        for side in (0, 1):
            for k in range(d + 1):
                if side == 0:
                    om = out_mask[rows, k][:, None]
                    sep = (vb & ~om) == 0
                    onm = on_mask[rows, k][:, None]
                else:
                    om = out_mask[:, k][None, :]
                    sep = (va & ~om) == 0
                    onm = on_mask[:, k][None, :]
                todo = sep & (rel < 0)
                if not todo.any():
                    continue
                shape = (stop - start, n_s)
                on_a = np.broadcast_to(va & onm, shape)
                on_b = np.broadcast_to(vb & onm, shape)
                trivial = ((on_b & ~va) == 0) | ((on_a & ~vb) == 0)
                easy = todo & trivial
                rel[easy & shared] = PairRelation.COMMON_FACE
                rel[easy & ~shared] = PairRelation.DISJOINT
                hard = todo & ~trivial
                for i, j in zip(*np.nonzero(hard)):
                    key = (int(on_a[i, j]), int(on_b[i, j]))
                    bad = improper_cache.get(key)
                    if bad is None:
                        bad = clf._improper(_mask_labels(key[0]), _mask_labels(key[1]))
                        improper_cache[key] = bad
                    if bad:
                        rel[i, j] = PairRelation.IMPROPER_BOUNDARY
                    else:
                        rel[i, j] = PairRelation.COMMON_FACE if shared[i, j] else PairRelation.DISJOINT
        rel[(rel < 0) & overlap] = PairRelation.INTERIOR_OVERLAP
        ri, rj = np.nonzero(rel < 0)
        if len(ri):
            rel[ri, rj] = _classify_residual(config, clf, labels, ri + start, rj)
        dense[start:stop] = rel
    return RelationTable.from_dense(dense)


def _int_dets(m: np.ndarray) -> np.ndarray:
    """Determinants of a stack of small integer matrices, exactly, by cofactors."""
    k = m.shape[-1]
    if k == 1:
        return m[..., 0, 0]
    if k == 2:
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    out = np.zeros(m.shape[:-2], dtype=np.int64)
    for j in range(k):
        minor = np.delete(np.delete(m, 0, axis=-2), j, axis=-1)
        out += (-1) ** j * m[..., 0, j] * _int_dets(minor)
    return out


def _cross(vectors: np.ndarray) -> np.ndarray:
    """Generalised cross product of (R, d-1, d) integer vectors: (R, d)."""
    d = vectors.shape[-1]
    return np.stack([(-1) ** j * _int_dets(np.delete(vectors, j, axis=-1)) for j in range(d)], axis=-1)


def _classify_residual(config, clf, labels, ai, bj) -> np.ndarray:
    """Pairs not separated by any simplex facet.

    The remaining candidate normals are orthogonal to the edge directions of
    a k-face of one simplex and an l-face of the other (k + l = d - 1).  They
    are screened in bulk; a pair with no separating normal overlaps.  For
    the others the first separating normal gives the vertices touching the
    hyperplane, and only the improper test is done per pair (memoised).
    """
    d = config.dim
    ip = config.ipoints
    big = max(abs(x) for p in ip for x in p)
    normal_bound = math.factorial(d - 1) * (2 * big) ** (d - 1)
    if 2 * d * big * normal_bound >= 2 ** 62:
        out = np.empty(len(ai), dtype=np.int8)
        for k, (a, b) in enumerate(zip(ai, bj)):
            out[k] = clf.classify(labels[a], labels[b])
        return out
    pts = np.asarray(ip, dtype=np.int64)
    la = np.asarray([labels[a] for a in ai], dtype=np.int64)
    lb = np.asarray([labels[b] for b in bj], dtype=np.int64)
    pa, pb = pts[la], pts[lb]  # (R, d+1, d)
    r = len(ai)
    separated = np.zeros(r, dtype=bool)
    on_a = np.zeros(r, dtype=np.uint64)
    on_b = np.zeros(r, dtype=np.uint64)
    bits_a = np.uint64(1) << la.astype(np.uint64)
    bits_b = np.uint64(1) << lb.astype(np.uint64)
    live = np.arange(r)
    faces = [
        (fa, fb)
        for k in range(1, d - 1)
        for fa in itertools.combinations(range(d + 1), k + 1)
        for fb in itertools.combinations(range(d + 1), d - k)
    ]
    for fa, fb in faces:
        qa, qb = pa[live], pb[live]
        da = qa[:, fa[1:]] - qa[:, fa[:1]]
        db = qb[:, fb[1:]] - qb[:, fb[:1]]
        u = _cross(np.concatenate([da, db], axis=1))
        xa = np.einsum("rkc,rc->rk", qa, u)
        xb = np.einsum("rkc,rc->rk", qb, u)
        nz = u.any(axis=1)
        below = nz & (xa.max(axis=1) <= xb.min(axis=1))
        above = nz & ~below & (xb.max(axis=1) <= xa.min(axis=1))
        for hit, level in ((below, xa.max(axis=1)), (above, xa.min(axis=1))):
            if not hit.any():
                continue
            rows = live[hit]
            touch_a = xa[hit] == level[hit][:, None]
            touch_b = xb[hit] == level[hit][:, None]
            on_a[rows] = (touch_a * bits_a[rows]).sum(axis=1, dtype=np.uint64)
            on_b[rows] = (touch_b * bits_b[rows]).sum(axis=1, dtype=np.uint64)
            separated[rows] = True
        live = live[~(below | above)]
        if not len(live):
            break
    out = np.full(r, PairRelation.INTERIOR_OVERLAP, dtype=np.int8)
    va = bits_a.sum(axis=1, dtype=np.uint64)
    vb = bits_b.sum(axis=1, dtype=np.uint64)
    shared = (va & vb) != 0
    proper = np.where(shared, PairRelation.COMMON_FACE, PairRelation.DISJOINT).astype(np.int8)
    trivial = ((on_a & ~vb) == 0) | ((on_b & ~va) == 0)
    out[separated & trivial] = proper[separated & trivial]
    cache: dict = {}
    for k in np.nonzero(separated & ~trivial)[0]:
        key = (int(on_a[k]), int(on_b[k]))
        bad = cache.get(key)
        if bad is None:
            bad = cache[key] = clf._improper(_mask_labels(key[0]), _mask_labels(key[1]))
        out[k] = PairRelation.IMPROPER_BOUNDARY if bad else proper[k]
    return out
