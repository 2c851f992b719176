from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from polydissect.exactgeom import nullspace
from polydissect.pointconfig import (
    DegenerateError, ParseError, PointConfiguration, circuits_within, format_polytope,
    parse_polytope, placing_simplices,
)

from conftest import CUBE, OCTAHEDRON, configs3
from oracles import hull_volume, on_plane, supporting_planes, tet_volume


@given(configs3())
def test_boundary_labels_match_supporting_planes(cfg):
    sup = supporting_planes(cfg.points)
    brute = {i for i, p in enumerate(cfg.points) if any(on_plane(pl, p) for pl in sup)}
    assert cfg.boundary_labels() == frozenset(brute)


@given(configs3())
def test_total_volume_matches_brute_hull(cfg):
    assert cfg.total_volume == hull_volume(cfg.points)


@given(configs3(), st.randoms(use_true_random=False))
def test_placing_covers_the_hull(cfg, rnd):
    order = list(range(cfg.n))
    rnd.shuffle(order)
    tets = placing_simplices(cfg, order)
    assert sum(tet_volume([cfg.points[i] for i in t]) for t in tets) == cfg.total_volume


@given(configs3(min_points=5, max_points=6))
def test_circuits_are_radon_partitions(cfg):
    for c in circuits_within(cfg, range(cfg.n)):
        sup = sorted(c.support)
        assert not (c.positive & c.negative)
        # exactly one affine dependency on the support, up to scale, with the stated signs
        rows = [[cfg.points[i][k] for i in sup] for k in range(3)] + [[1] * len(sup)]
        ker = nullspace(rows)
        assert len(ker) == 1
        v = dict(zip(sup, ker[0]))
        pos = {i for i in sup if v[i] > 0}
        assert all(v[i] != 0 for i in sup)
        assert pos in (set(c.positive), set(c.negative))


def test_cube_facets_and_volume():
    cfg = PointConfiguration(CUBE)
    assert len(cfg.facets()) == 6
    assert cfg.total_volume == 1
    assert cfg.vertex_labels() == frozenset(range(8))
    assert cfg.on_common_facet([0, 1, 2, 3])
    assert not cfg.on_common_facet([0, 7])


def test_octahedron_sides():
    cfg = PointConfiguration(OCTAHEDRON)
    assert cfg.total_volume == F(4, 3)
    # plane x + y + z = 1: the two opposite vertices sit on the same side
    assert cfg.side((0, 2, 4), 1) == cfg.side((0, 2, 4), 5) != 0
    assert cfg.side((0, 2, 4), 0) == 0


def test_roundtrip_and_fingerprint():
    cfg = PointConfiguration([(0, 0, 0), (F(1, 2), 0, 0), (0, F(1, 3), 0), (0, 0, 1)])
    text = format_polytope(cfg)
    again = parse_polytope(text)
    assert again.points == cfg.points and again.fingerprint == cfg.fingerprint


@pytest.mark.parametrize("text, where", [
    ("", "line 1"),
    ("3 2\n0 0 0\n", "line 1"),
    ("2 3\n0 0\n1 x\n0 1\n", "line 3"),
    ("2 3\n0 0\n1 0 0\n0 1\n", "line 3"),
])
def test_parse_errors_report_lines(text, where):
    with pytest.raises(ParseError, match=where):
        parse_polytope(text)


def test_degenerate_configuration_refused():
    with pytest.raises(DegenerateError):
        PointConfiguration([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
