import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from polydissect.complexes import Status, validate
from polydissect.extremal import (
    Budget, InfeasibleModel, Mode, Sense, build_model, enumerate_optima, extremal, solve,
)
from polydissect.pointconfig import PointConfiguration
from polydissect.simplexrel import Classifier, enumerate_simplices, relation_table

from conftest import BIPYRAMID, CUBE, OCTAHEDRON, TRI_PRISM, configs3


def brute_families(cfg, mode):
    """Every pairwise-compatible set of simplices whose volumes add up to the hull volume."""
    simp = enumerate_simplices(cfg)
    clf = Classifier(cfg)
    worst = 1 if mode == Mode.TRIANGULATION else 2
    ok = {(i, j) for i, j in itertools.combinations(range(len(simp)), 2)
          if clf.classify(simp[i].vertex_labels, simp[j].vertex_labels) <= worst}
    total = cfg.total_volume
    out = []

    def rec(start, chosen, vol):
        if vol == total:
            out.append(frozenset(simp[i].vertex_labels for i in chosen))
            return
        for k in range(start, len(simp)):
            if vol + simp[k].volume <= total and all((i, k) in ok for i in chosen):
                rec(k + 1, chosen + [k], vol + simp[k].volume)

    rec(0, [], F(0))
    return out


def _as_sets(result):
    return {frozenset(s.vertex_labels for s in f.simplices) for f in result.all_optima}


@given(configs3(min_points=5, max_points=6), st.sampled_from(list(Mode)), st.sampled_from(list(Sense)))
@settings(max_examples=25)
def test_solver_matches_brute_enumeration(cfg, mode, sense):
    fams = brute_families(cfg, mode)
    sizes = [len(f) for f in fams]
    want = min(sizes) if sense == Sense.MIN else max(sizes)
    model = build_model(cfg, mode=mode, sense=sense)
    res = solve(model)
    assert res.proven and res.optimum == want
    fam = res.certificate
    assert model.is_feasible([model.index(s.vertex_labels) for s in fam.simplices])
    status = validate(fam).status
    assert status == Status.TRIANGULATION or (mode == Mode.DISSECTION and status == Status.DISSECTION)
    enum = enumerate_optima(model, optimum=res.optimum)
    assert enum.enumeration_complete
    assert _as_sets(enum) == {f for f in fams if len(f) == want}


@pytest.mark.parametrize("pts, tri_min, tri_max", [
    (CUBE, 5, 6), (OCTAHEDRON, 4, 4), (TRI_PRISM, 3, 3), (BIPYRAMID, 2, 3),
])
def test_small_solids(pts, tri_min, tri_max):
    cfg = PointConfiguration(pts)
    assert extremal(cfg, Mode.TRIANGULATION, Sense.MIN).optimum == tri_min
    assert extremal(cfg, Mode.TRIANGULATION, Sense.MAX).optimum == tri_max


def test_cube_has_two_corner_cutting_minima():
    cfg = PointConfiguration(CUBE)
    enum = enumerate_optima(build_model(cfg, mode=Mode.TRIANGULATION, sense=Sense.MIN))
    assert len(enum.all_optima) == 2 and enum.enumeration_complete


def test_model_ignores_input_order():
    cfg = PointConfiguration(CUBE)
    simp = enumerate_simplices(cfg)
    shuffled = simp[:]
    random.Random(3).shuffle(shuffled)
    a = build_model(cfg, simp, mode=Mode.DISSECTION, sense=Sense.MAX)
    b = build_model(cfg, shuffled, relation_table=relation_table(cfg, shuffled), mode=Mode.DISSECTION, sense=Sense.MAX)
    assert a.simplices == b.simplices and a.conflicts == b.conflicts and a.columns == b.columns


def test_exclusions_follow_mode():
    cfg = PointConfiguration(CUBE)
    tri = build_model(cfg, mode=Mode.TRIANGULATION)
    diss = build_model(cfg, mode=Mode.DISSECTION)
    assert set(diss.exclusion_pairs()) < set(tri.exclusion_pairs())


def test_budget_exhaustion_is_reported():
    from polydissect.families import FamilySpec, Kind, build

    cfg = build(FamilySpec(Kind.LATTICE_P))
    res = solve(build_model(cfg, mode=Mode.TRIANGULATION, sense=Sense.MAX), Budget(nodes=1))
    assert not res.proven
    assert res.bound >= res.optimum


@pytest.mark.parametrize("sense", [Sense.MIN, Sense.MAX])
@pytest.mark.parametrize("nodes", [3, 20, 60])
def test_truncated_search_bound_brackets_optimum(sense, nodes):
    from polydissect.families import FamilySpec, Kind, build

    model = build_model(build(FamilySpec(Kind.LATTICE_P)), mode=Mode.DISSECTION, sense=sense)
    exact = solve(model)
    cut = solve(model, Budget(nodes=nodes))
    if cut.proven:
        assert cut.optimum == exact.optimum
    elif sense == Sense.MAX:
        assert cut.optimum <= exact.optimum <= cut.bound
    else:
        assert cut.bound <= exact.optimum <= cut.optimum


def test_infeasible_model_raises():
    cfg = PointConfiguration(CUBE)
    simp = [s for s in enumerate_simplices(cfg) if 7 not in s.vertex_labels]
    # no candidate reaches the corner 7, so no family can fill the cube
    with pytest.raises(InfeasibleModel):
        solve(build_model(cfg, simp))
