"""Tests for the channel-diagram and Newton-graph validators.

The positive fixture is a degree-3 graph with one critical pole, worked
out by hand: the pole has valence six (both lifts of every channel edge
end there), its rotation interleaves the two lift families so that the
face walk closes up into three hexagonal faces, and the Euler count
V - E + F = 8 - 9 + 3 = 2 certifies the sphere.  All expected statuses
below were derived on paper before the validators were written.
"""

import pytest

from newtongraph.errors import DanglingReference, Unresolved
from newtongraph.graph_dynamics import build_graph_map, build_weak_graph_map
from newtongraph.newton_axioms import (
    AbstractNewtonGraph,
    ChannelDiagram,
    channel_diagram,
    ray_orbit,
    trees_separated,
    validate_channel_diagram,
    validate_newton_graph,
)
from newtongraph.planar_map import build_planar_map, edge_key
from newtongraph.reporting import FAIL, PARTIAL, PASS

DELTA = frozenset({edge_key(11, 21), edge_key(12, 22), edge_key(13, 23)})


def pole_map():
    rotations = {
        "v_inf": (11, 12, 13),
        "r1": (21, 41),
        "r2": (22, 42),
        "r3": (23, 43),
        "pole": (31, 52, 33, 51, 32, 53),
        "r1p": (61,),
        "r2p": (62,),
        "r3p": (63,),
    }
    twins = [
        (11, 21), (12, 22), (13, 23),
        (31, 41), (32, 42), (33, 43),
        (51, 61), (52, 62), (53, 63),
    ]
    return build_planar_map(rotations, twins)


def pole_dynamics(m, rotate=False):
    """Self-map fixing the channel star; the pole covers the center twice.

    With ``rotate`` the roots are cyclically permuted, which breaks the
    pointwise fixing of the channel (and winds the center's germ).
    """
    if rotate:
        nxt = {"r1": "r2", "r2": "r3", "r3": "r1"}
        vm = {"v_inf": "v_inf", "pole": "v_inf"}
        vm.update(nxt)
        vm.update({"r1p": "r2", "r2p": "r3", "r3p": "r1"})
        shift = {1: 2, 2: 3, 3: 1}
        paths = {}
        for i in (1, 2, 3):
            paths[10 + i] = (10 + shift[i],)
            paths[30 + i] = (10 + shift[i],)
            paths[50 + i] = (10 + shift[i],)
    else:
        vm = {
            "v_inf": "v_inf", "r1": "r1", "r2": "r2", "r3": "r3",
            "pole": "v_inf", "r1p": "r1", "r2p": "r2", "r3p": "r3",
        }
        paths = {
            11: (11,), 12: (12,), 13: (13,),
            31: (11,), 32: (12,), 33: (13,),
            51: (11,), 52: (12,), 53: (13,),
        }
    return build_graph_map(m, m, vm, paths)


def newton_fixture(level=1, degree=3, rotate=False, channel=DELTA):
    m = pole_map()
    gm = pole_dynamics(m, rotate=rotate)
    cd = channel_diagram(m, "v_inf", ("r1", "r2", "r3"), edges=channel)
    return AbstractNewtonGraph(gm, cd, level=level, degree=degree)


def test_pole_map_is_spherical_with_three_faces():
    m = pole_map()
    assert m.face_count == 3
    assert all(len(f) == 6 for f in m.faces)
    assert m.is_connected()


# ---------------------------------------------------------------------------
# channel diagrams


def test_channel_of_fixture_passes():
    m = pole_map()
    cd = channel_diagram(m, "v_inf", ("r1", "r2", "r3"), edges=DELTA)
    report = validate_channel_diagram(cd)
    assert report.statuses() == {
        "star-shape": PASS,
        "root-access": PASS,
        "edge-budget": PASS,
        "bigon-separation": PASS,
    }
    assert report.exit_code == 0


def test_channel_unknown_center_raises():
    m = pole_map()
    with pytest.raises(DanglingReference):
        channel_diagram(m, "nope", ("r1", "r2", "r3"), edges=DELTA)


def test_channel_root_root_edge_fails_star_only():
    rotations = {
        "c": (1, 3, 5),
        "a": (2, 7),
        "b": (4, 8),
        "e": (6,),
    }
    twins = [(1, 2), (3, 4), (5, 6), (7, 8)]
    m = build_planar_map(rotations, twins)
    cd = channel_diagram(m, "c", ("a", "b", "e"))
    report = validate_channel_diagram(cd)
    assert report.statuses() == {
        "star-shape": FAIL,
        "root-access": PASS,
        "edge-budget": PASS,
        "bigon-separation": PASS,
    }


def test_channel_isolated_root_fails_access_only():
    rotations = {"c": (1, 3), "a": (2,), "b": (4,), "e": ()}
    m = build_planar_map(rotations, [(1, 2), (3, 4)])
    cd = channel_diagram(m, "c", ("a", "b", "e"))
    report = validate_channel_diagram(cd)
    assert report.statuses() == {
        "star-shape": PASS,
        "root-access": FAIL,
        "edge-budget": PASS,
        "bigon-separation": PASS,
    }


def test_channel_empty_bigon_fails_separation_only():
    # two parallel edges to root a, adjacent at the center: one of the two
    # complementary sides of the parallel pair holds no diagram vertex
    rotations = {
        "c": (1, 3, 5, 7),
        "a": (4, 2),
        "b": (6,),
        "e": (8,),
    }
    twins = [(1, 2), (3, 4), (5, 6), (7, 8)]
    m = build_planar_map(rotations, twins)
    cd = channel_diagram(m, "c", ("a", "b", "e"))
    report = validate_channel_diagram(cd)
    assert report.statuses() == {
        "star-shape": PASS,
        "root-access": PASS,
        "edge-budget": PASS,
        "bigon-separation": FAIL,
    }


def test_channel_separating_bigon_passes():
    # two parallel edges to root a with one root strictly inside each of
    # the two lens sides
    rotations = {
        "c": (1, 5, 3, 7),
        "a": (2, 4),
        "b": (6,),
        "e": (8,),
    }
    twins = [(1, 2), (3, 4), (5, 6), (7, 8)]
    m = build_planar_map(rotations, twins)
    cd = channel_diagram(m, "c", ("a", "b", "e"))
    report = validate_channel_diagram(cd)
    assert report.exit_code == 0
    assert all(item.status == PASS for item in report.items)


def test_channel_over_budget_also_fails_separation():
    # five edges at degree three: the budget item fails, and a counting
    # argument (every face of a clean diagram has at least four darts)
    # shows some pair must bound an empty lens, so separation fails too
    rotations = {
        "c": (1, 3, 5, 7, 9),
        "a": (2, 6, 4),
        "b": (8,),
        "e": (10,),
    }
    twins = [(1, 2), (3, 4), (5, 6), (7, 8), (9, 10)]
    m = build_planar_map(rotations, twins)
    cd = channel_diagram(m, "c", ("a", "b", "e"))
    report = validate_channel_diagram(cd)
    assert report.item("edge-budget").status == FAIL
    assert report.item("bigon-separation").status == FAIL
    assert report.item("star-shape").status == PASS
    assert report.item("root-access").status == PASS


# ---------------------------------------------------------------------------
# newton graphs


def test_newton_fixture_passes():
    g = newton_fixture()
    report = validate_newton_graph(g)
    assert report.statuses() == {
        "channel-fixed": PASS,
        "degree-extension": PASS,
        "level-stratification": PARTIAL,
        "root-channel-count": PASS,
        "critical-budget": PASS,
        "complement-connected": PASS,
    }
    assert not report.has_failures
    assert report.exit_code == 2  # the stratification item stays partial


def test_newton_wrong_level_fails_stratification_only():
    g = newton_fixture(level=2)
    report = validate_newton_graph(g)
    assert report.item("level-stratification").status == FAIL
    for item_id in (
        "channel-fixed",
        "degree-extension",
        "root-channel-count",
        "critical-budget",
        "complement-connected",
    ):
        assert report.item(item_id).status == PASS
    assert report.exit_code == 1


def test_newton_channel_equals_graph_fails_properness_and_roots():
    m = pole_map()
    g = newton_fixture(channel=frozenset(m.edges))
    report = validate_newton_graph(g)
    assert report.item("channel-fixed").status == FAIL
    assert report.item("root-channel-count").status == FAIL


def test_newton_rotated_channel_breaks_fixing_only():
    # cyclically permuting the roots composes the honest map with a map
    # automorphism, so every degree and extension check still passes and
    # exactly the pointwise-fixing item fails
    g = newton_fixture(rotate=True)
    report = validate_newton_graph(g)
    assert report.item("channel-fixed").status == FAIL
    assert report.item("degree-extension").status == PASS
    assert report.item("root-channel-count").status == PASS
    assert report.item("critical-budget").status == PASS
    assert report.item("complement-connected").status == PASS
    assert report.item("level-stratification").status == PARTIAL
    assert report.exit_code == 1


def test_newton_fiber_capacity_respects_declared_degree():
    # the honest fixture saturates every fiber at exactly three
    g = newton_fixture()
    report = validate_newton_graph(g)
    assert report.item("degree-extension").status == PASS
    report4 = validate_newton_graph(newton_fixture(degree=4))
    assert report4.item("degree-extension").status == PASS


# ---------------------------------------------------------------------------
# ray orbit mechanics


def ray_orbit_map():
    rotations = {
        "g0": (1, 3, 5),
        "g1": (2, 7),
        "g2": (4, 9),
        "t1": (8,),
        "t2": (10,),
        "t3": (6,),
    }
    twins = [(1, 2), (3, 4), (5, 6), (7, 8), (9, 10)]
    m = build_planar_map(rotations, twins)
    vm = {"g0": "g0", "g1": "g2", "g2": "g1", "t1": "t2", "t2": "t1", "t3": "t1"}
    paths = {
        1: (3,),        # gamma1 -> gamma2
        3: (1,),        # gamma2 -> gamma1
        7: (9,),        # ray R1 -> ray R2
        9: (7,),        # ray R2 -> ray R1
        5: (1, 7),      # ray R3 -> gamma1 then R1 (absorbed tail)
    }
    return build_weak_graph_map(m, m, vm, paths)


def test_ray_orbit_periodic_pair():
    gm = ray_orbit_map()
    absorbing = {edge_key(1, 2), edge_key(3, 4)}
    assert ray_orbit(gm, edge_key(7, 8), absorbing) == (0, 2)
    assert ray_orbit(gm, edge_key(9, 10), absorbing) == (0, 2)


def test_ray_orbit_preperiodic_with_absorbed_tail():
    gm = ray_orbit_map()
    absorbing = {edge_key(1, 2), edge_key(3, 4)}
    assert ray_orbit(gm, edge_key(5, 6), absorbing) == (1, 2)


def test_ray_orbit_iteration_cap():
    gm = ray_orbit_map()
    with pytest.raises(Unresolved):
        ray_orbit(gm, edge_key(5, 6), {edge_key(1, 2), edge_key(3, 4)}, max_iter=1)


def test_ray_orbit_unknown_edge():
    gm = ray_orbit_map()
    with pytest.raises(DanglingReference):
        ray_orbit(gm, ("x", "y"), frozenset())


# ---------------------------------------------------------------------------
# tree separation mechanics


def test_trees_separated_by_a_circle():
    # a two-edge circle with one extra vertex strictly inside each disk
    rotations = {
        "u": (1, 3, 5),
        "w": (4, 7, 2),
        "in1": (6,),
        "in2": (8,),
    }
    twins = [(1, 2), (3, 4), (5, 6), (7, 8)]
    m = build_planar_map(rotations, twins)
    circle = {edge_key(1, 2), edge_key(3, 4)}
    ok, _ = trees_separated(m, circle, [("in1",), ("in2",)])
    assert ok
    ok, detail = trees_separated(m, circle, [("in1", "in2")])
    assert not ok
    assert "in1" in detail or "in2" in detail


def test_trees_not_separated_in_single_face():
    rotations = {"u": (1, 5), "w": (2, 7), "in1": (6,), "in2": (8,)}
    m = build_planar_map(rotations, [(1, 2), (5, 6), (7, 8)])
    arc = {edge_key(1, 2)}
    ok, _ = trees_separated(m, arc, [("in1",), ("in2",)])
    assert not ok


# ---------------------------------------------------------------------------
# reporting basics


def test_report_rendering_and_payload():
    import json

    g = newton_fixture()
    report = validate_newton_graph(g)
    text = report.render_text()
    assert "newton-graph" in text
    assert text.count("\n") == len(report.items) + 1
    assert "PARTIAL" in text
    payload = report.to_payload()
    json.dumps(payload)
    assert payload["result"] == "partial"
    assert len(payload["items"]) == 6
