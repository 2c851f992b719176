"""Minimal and maximal triangulations/dissections by exact branch and bound.

A family of d-simplices is a dissection iff its members are pairwise
interior-disjoint and their volumes add up to vol(conv A).  The model keeps
one 0/1 variable per simplex, an exclusion list (interior overlaps; for
triangulations also improper boundary intersections) and the volume
equation.

The search treats a set of generic sample points as columns of an exact
cover: every sample point lies in the interior of exactly one simplex of
any dissection, and two simplices containing a common sample point overlap.
Branching picks the uncovered sample point with the fewest live candidates.
"""

from __future__ import annotations

import enum
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .complexes import SimplexFamily, Status
from .pointconfig import PointConfiguration, placing_simplices
from .simplexrel import (
    PairRelation,
    RelationTable,
    Simplex,
    SimplexGeometry,
    bulk_relation_table,
    enumerate_simplices,
    make_simplex,
)


class Mode(enum.Enum):
    TRIANGULATION = "tri"
    DISSECTION = "diss"


class Sense(enum.Enum):
    MIN = "min"
    MAX = "max"


class InfeasibleModel(RuntimeError):
    """No feasible family exists: impossible for a valid configuration."""


def _bool_rows_to_ints(mat: np.ndarray) -> list[int]:
    if mat.shape[1] == 0:
        return [0] * mat.shape[0]
    packed = np.packbits(mat, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class IPModel:
    """0/1 model over the simplices of a configuration (canonical order)."""

    config: PointConfiguration
    simplices: tuple
    volumes: tuple
    mode: Mode
    sense: Sense
    conflicts: list          # bitmask of excluded partners per variable (self included)
    columns: list            # bitmask of candidate variables per sample point
    total_volume: Fraction
    n_samples: int = 0

    @property
    def n_variables(self) -> int:
        return len(self.simplices)

    def exclusion_pairs(self):
        for i, mask in enumerate(self.conflicts):
            for j in _bits(mask >> (i + 1)):
                yield (i, i + 1 + j)

    @property
    def n_exclusions(self) -> int:
        return sum((m >> (i + 1)).bit_count() for i, m in enumerate(self.conflicts))

    def index(self, labels: Iterable[int]) -> int:
        return self._index[tuple(sorted(labels))]

    def __post_init__(self):
        self._index = {s.vertex_labels: i for i, s in enumerate(self.simplices)}

    def is_feasible(self, chosen: Sequence[int]) -> bool:
        chosen = sorted(set(chosen))
        mask = sum(1 << i for i in chosen)
        if any((self.conflicts[i] & ~(1 << i)) & mask for i in chosen):
            return False
        return sum((self.volumes[i] for i in chosen), Fraction(0)) == self.total_volume

    def family(self, chosen: Iterable[int]) -> SimplexFamily:
        status = Status.TRIANGULATION if self.mode == Mode.TRIANGULATION else Status.DISSECTION
        return SimplexFamily(self.config, [self.simplices[i] for i in chosen], status)

    def summary(self) -> dict:
        return {"variables": self.n_variables, "exclusions": self.n_exclusions,
                "columns": len(self.columns), "samples": self.n_samples,
                "mode": self.mode.value, "sense": self.sense.value}


def canonical_order(simplices: Sequence[Simplex]) -> list[int]:
    return sorted(range(len(simplices)), key=lambda i: (simplices[i].volume, simplices[i].vertex_labels))


def build_model(config: PointConfiguration, simplices: Sequence | None = None,
                relation_table: RelationTable | None = None,
                mode: Mode = Mode.TRIANGULATION, sense: Sense = Sense.MIN,
                geometry: SimplexGeometry | None = None) -> IPModel:
    """Variables, exclusions and cover columns for the given simplices.

    ``relation_table``, when given, is indexed like ``simplices``.  Variables
    are re-sorted by (volume, labels) so the model does not depend on the
    input order.
    """
    if simplices is None:
        simplices = enumerate_simplices(config)
    simplices = [s if isinstance(s, Simplex) else make_simplex(config, s) for s in simplices]
    perm = canonical_order(simplices)
    canon = [simplices[i] for i in perm]
    geo = geometry if geometry is not None and geometry.simplices == canon else SimplexGeometry(config, canon)
    if relation_table is None:
        dense = bulk_relation_table(config, canon, geometry=geo).dense()
    else:
        dense = relation_table.dense()[np.ix_(perm, perm)]
    if mode == Mode.TRIANGULATION:
        excl = dense >= PairRelation.IMPROPER_BOUNDARY
    else:
        excl = dense == PairRelation.INTERIOR_OVERLAP
    np.fill_diagonal(excl, True)
    conflicts = _bool_rows_to_ints(excl)
    cols = _bool_rows_to_ints(np.ascontiguousarray(geo.member.T))
    return IPModel(config, tuple(canon), tuple(s.volume for s in canon), mode, sense,
                   conflicts, _reduce_columns(cols), config.total_volume, len(cols))


def _reduce_columns(cols: list[int]) -> list[int]:
    """Drop duplicate columns and columns whose candidates contain another column's."""
    uniq = sorted(set(cols), key=lambda c: (c.bit_count(), c))
    kept: list[int] = []
    for c in uniq:
        if c == 0:
            raise InfeasibleModel("a sample point lies in no candidate simplex")
        if not any(k & c == k for k in kept):
            kept.append(c)
    return kept


# ---------------------------------------------------------------------------
# search

@dataclass
class Budget:
    nodes: int | None = None
    seconds: float | None = None


@dataclass
class SolveResult:
    optimum: int
    certificate: SimplexFamily
    proven: bool
    all_optima: list | None = None
    enumeration_complete: bool | None = None
    bound: int | None = None
    stats: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"optimum": self.optimum, "proven": self.proven, "bound": self.bound,
               "certificate": [list(s.vertex_labels) for s in self.certificate.simplices],
               "stats": self.stats}
        if self.all_optima is not None:
            out["all_optima"] = [[list(s.vertex_labels) for s in f.simplices] for f in self.all_optima]
            out["enumeration_complete"] = self.enumeration_complete
        return out


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, model: IPModel, budget: Budget):
        self.m = model
        self.budget = budget
        den = math.lcm(*(v.denominator for v in model.volumes), model.total_volume.denominator)
        self.vol = [int(v * den) for v in model.volumes]
        self.total = int(model.total_volume * den)
        classes: dict = {}
        for i, v in enumerate(self.vol):
            classes[v] = classes.get(v, 0) | (1 << i)
        self.classes_up = sorted(classes.items())
        self.classes_down = self.classes_up[::-1]
        n_cols = len(model.columns)
        colsof = [0] * model.n_variables
        for j, c in enumerate(model.columns):
            for i in _bits(c):
                colsof[i] |= 1 << j
        self.colsof = colsof
        self.all_cols = (1 << n_cols) - 1
        self.minimise = model.sense == Sense.MIN
        self.nodes = 0
        self.start = time.perf_counter()
        self.best: int | None = None
        self.best_sol: tuple | None = None
        self.history: list = []
        self.open_bounds: list = []
        self.frontier: list | None = None
        # enumeration state
        self.target: int | None = None
        self.found: list = []

    # -- bounds --------------------------------------------------------------
    def _min_extra(self, alive: int, need: int) -> int | None:
        """Fewest live simplices whose volumes can reach ``need``."""
        count = 0
        for v, mask in self.classes_down:
            if need <= 0:
                break
            c = (alive & mask).bit_count()
            if not c:
                continue
            take = min(c, -(-need // v))
            count += take
            need -= take * v
        return count if need <= 0 else None

    def _max_extra(self, alive: int, need: int) -> int:
        """Most live simplices whose volumes fit into ``need``."""
        count = 0
        for v, mask in self.classes_up:
            if v > need:
                break
            c = (alive & mask).bit_count()
            take = min(c, need // v)
            count += take
            need -= take * v
            if take < c:
                break
        return count

    def _hopeless(self, value: int) -> bool:
        """Can a subtree whose best possible value is ``value`` be skipped?"""
        if self.target is not None:
            return value > self.target if self.minimise else value < self.target
        if self.best is None:
            return False
        return value >= self.best if self.minimise else value <= self.best

    # -- core ----------------------------------------------------------------
    def _tick(self):
        self.nodes += 1
        b = self.budget
        out = b.nodes is not None and self.nodes > b.nodes
        if not out and b.seconds is not None and self.nodes % 256 == 0:
            out = time.perf_counter() - self.start > b.seconds
        if out:
            # the stack unwinds on the way out, so keep the open frames now
            self.frontier = [list(f) for f in self.open_bounds]
            raise _OutOfBudget

    def _leaf(self, chosen: list):
        k = len(chosen)
        if self.target is not None:
            if k == self.target:
                self.found.append(tuple(sorted(chosen)))
            return
        if self.best is None or (k < self.best if self.minimise else k > self.best):
            self.best = k
            self.best_sol = tuple(sorted(chosen))
            self.history.append((self.nodes, k))

    def offer(self, chosen: Sequence[int]) -> None:
        if self.m.is_feasible(chosen):
            self._leaf(list(chosen))

    def run(self) -> bool:
        try:
            self._rec((1 << self.m.n_variables) - 1, self.all_cols, [], self.total)
        except _OutOfBudget:
            return False
        return True

    def _rec(self, alive: int, uncovered: int, chosen: list, rem: int):
        self._tick()
        count = len(chosen)
        if not uncovered:
            if rem == 0:
                self._leaf(chosen)
            return
        if rem <= 0:
            return
        cols = self.m.columns
        best_c = None
        best_k = 1 << 62
        sizes = []
        for j in _bits(uncovered):
            c = cols[j] & alive
            k = c.bit_count()
            if k == 0:
                return
            if k < best_k:
                best_k, best_c = k, c
                if k == 1:
                    break
            sizes.append((k, c))
        if self.minimise:
            lb = self._min_extra(alive, rem)
            if lb is None:
                return
            if best_k > 1 and not self._hopeless(count + lb):
                # disjoint uncovered columns each need their own simplex
                sizes.sort(key=lambda t: t[0])
                union = 0
                packed = 0
                for _, c in sizes:
                    if not c & union:
                        packed += 1
                        union |= c
                lb = max(lb, packed)
            bound = count + lb
        else:
            bound = count + self._max_extra(alive, rem)
        if self._hopeless(bound):
            return
        order = list(_bits(best_c))
        order.sort(key=lambda i: self.vol[i], reverse=self.minimise)
        frame = [bound, True]
        self.open_bounds.append(frame)
        try:
            for pos, s in enumerate(order):
                frame[1] = pos + 1 < len(order)
                chosen.append(s)
                self._rec(alive & ~self.m.conflicts[s], uncovered & ~self.colsof[s], chosen, rem - self.vol[s])
                chosen.pop()
                alive &= ~(1 << s)
                if self._hopeless(bound):
                    break
        finally:
            self.open_bounds.pop()

    def residual_bound(self) -> int | None:
        frames = self.open_bounds if self.frontier is None else self.frontier
        open_ = [b for b, more in frames if more]
        open_.append(frames[-1][0] if frames else None)
        vals = [b for b in open_ if b is not None]
        if not vals:
            return self.best
        frontier = min(vals) if self.minimise else max(vals)
        if self.best is None:
            return frontier
        return min(frontier, self.best) if self.minimise else max(frontier, self.best)


def _incumbent_orders(config: PointConfiguration, tries: int = 12):
    labels = list(range(config.n))
    yield labels
    yield labels[::-1]
    rng = random.Random(0)
    for _ in range(tries):
        order = labels[:]
        rng.shuffle(order)
        yield order


def _seed(search: _Search, model: IPModel, tries: int = 12):
    for order in _incumbent_orders(model.config, tries):
        simp = placing_simplices(model.config, order)
        try:
            idx = [model.index(s) for s in simp]
        except KeyError:
            continue
        search.offer(idx)


def solve(model: IPModel, budget: Budget | None = None, seed_tries: int = 12) -> SolveResult:
    """Exact optimum of the model, or the best found when the budget runs out."""
    budget = budget or Budget()
    search = _Search(model, budget)
    _seed(search, model, seed_tries)
    seeded = search.best
    complete = search.run()
    if search.best is None:
        if complete:
            raise InfeasibleModel("no feasible family: the configuration or relation table is inconsistent")
        raise InfeasibleModel("budget exhausted before any feasible family was found")
    cert = model.family(search.best_sol)
    stats = {"nodes": search.nodes, "seconds": round(time.perf_counter() - search.start, 3),
             "incumbent_from_placing": seeded, "improvements": search.history, **model.summary()}
    bound = search.best if complete else search.residual_bound()
    return SolveResult(search.best, cert, complete, bound=bound, stats=stats)


def enumerate_optima(model: IPModel, budget: Budget | None = None, optimum: int | None = None,
                     solve_budget: Budget | None = None) -> SolveResult:
    """All feasible families attaining the optimum (sorted), plus completeness flag."""
    if optimum is None:
        first = solve(model, solve_budget or budget)
        if not first.proven:
            raise InfeasibleModel("optimum not proven; cannot enumerate optima")
        optimum = first.optimum
    search = _Search(model, budget or Budget())
    search.target = optimum
    complete = search.run()
    sols = sorted(set(search.found))
    fams = [model.family(s) for s in sols]
    if not fams:
        raise InfeasibleModel(f"no family of size {optimum} found")
    stats = {"nodes": search.nodes, "seconds": round(time.perf_counter() - search.start, 3), **model.summary()}
    return SolveResult(optimum, fams[0], True, all_optima=fams, enumeration_complete=complete,
                       bound=optimum, stats=stats)


def extremal(config: PointConfiguration, mode: Mode, sense: Sense, budget: Budget | None = None,
             relation_table: RelationTable | None = None) -> SolveResult:
    """Convenience wrapper: enumerate simplices, build the model, solve."""
    return solve(build_model(config, None, relation_table, mode, sense), budget)
