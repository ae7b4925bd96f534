"""Demonstration loading, the experience-biased heuristic, and snap motions."""
from fractions import Fraction

import pytest

from mrplan.egraph import (
    DemoFormatError,
    EGraph,
    EGraphParams,
    egraph_heuristic,
    load_demonstrations,
    snap_successors,
)
from mrplan.heuristics import cell_dijkstra
from mrplan.maps import asset_text, load_crafted
from mrplan.states import HDState, Kind, LDState, Rep, Stance
from mrplan.world import CostTable, GoalSpec, load_map

COSTS = CostTable()
FREE7 = load_map("7 7\n" + "\n".join(["." * 7] * 7))


def demo_text(waypoints):
    lines = [" ".join(str(v) for v in wp) for wp in waypoints]
    return "\n".join(lines) + "\n"


class TestLoading:
    def test_five_waypoints_make_four_edges(self):
        text = demo_text([
            (1, 1, 0, "STAND", 0, 1),
            (1, 1, 0, "STAND", 1, 1),
            (1, 1, 0, "STAND", 2, 1),
            (1, 1, 0, "STAND", 3, 2),
            (2, 1, 0, "STAND", 0, 0),
        ])
        eg = load_demonstrations(FREE7, COSTS, [text])
        assert len(eg) == 4
        assert all(ex for *_e, ex in eg.edges)

    def test_empty_file_is_valid(self):
        eg = load_demonstrations(FREE7, COSTS, ["# just a comment\n"])
        assert len(eg) == 0

    def test_waypoint_on_wall_rejected(self):
        w = load_map("3 1\n.#.")
        text = demo_text([(1, 0, 0, "STAND", 0, 0)])
        with pytest.raises(DemoFormatError, match="invalid state"):
            load_demonstrations(w, COSTS, [text])

    def test_composite_edges_flagged(self):
        text = demo_text([(1, 1, 0, "STAND", 0, 9), (4, 1, 0, "STAND", 0, 0)])
        eg = load_demonstrations(FREE7, COSTS, [text])
        assert len(eg) == 1
        assert eg.edges[0][3] is False

    def test_composite_edge_under_floor_rejected(self):
        # Chebyshev span 5 with cost 2 would break the tracking anchor
        text = demo_text([(1, 1, 0, "STAND", 0, 2), (6, 1, 0, "STAND", 0, 0)])
        with pytest.raises(DemoFormatError, match="admissible floor"):
            load_demonstrations(FREE7, COSTS, [text])

    def test_shipped_demo_is_primitive_legal(self):
        w = load_crafted("rubble_band")
        eg = load_demonstrations(w, COSTS, [asset_text("demos/rubble_cross.demo")])
        assert len(eg) == 12
        assert all(ex for *_e, ex in eg.edges)


def walk_metric(world, goal_cell):
    return cell_dijkstra(world, [goal_cell], COSTS.walk_step, {".", "~", "%"}, diagonal=True)


class TestHeuristic:
    def test_empty_graph_scales_base_field(self):
        goal = GoalSpec(5, 5)
        hg = walk_metric(FREE7, goal.cell)
        for eps in (1, 2, 10):
            he = egraph_heuristic(FREE7, EGraph(), goal, EGraphParams(eps_e=eps), COSTS)
            for x in range(7):
                for y in range(7):
                    s = HDState(x, y, 0, Stance.STAND, 0)
                    assert he(s) == eps * hg(s)

    def test_eps_one_equals_base_field_with_demo(self):
        w = load_crafted("rubble_band")
        eg = load_demonstrations(w, COSTS, [asset_text("demos/rubble_cross.demo")])
        goal = GoalSpec(11, 2)
        hg = walk_metric(w, goal.cell)
        he = egraph_heuristic(w, eg, goal, EGraphParams(eps_e=1), COSTS)
        for x in range(w.width):
            for y in range(w.height):
                s = HDState(x, y, 0, Stance.STAND, 0)
                assert he(s) == hg(s)

    def test_demo_bridge_reduces_pre_band_values(self):
        w = load_crafted("rubble_band")
        eg = load_demonstrations(w, COSTS, [asset_text("demos/rubble_cross.demo")])
        goal = GoalSpec(11, 2)
        p = EGraphParams(eps_e=10)
        he = egraph_heuristic(w, eg, goal, p, COSTS)
        hg = walk_metric(w, goal.cell)
        before = HDState(4, 2, 0, Stance.STAND, 0)
        assert he(before) < p.eps_e * hg(before)
        # bound, zero at goal, non-negative
        for x in range(w.width):
            for y in range(w.height):
                s = HDState(x, y, 0, Stance.STAND, 0)
                assert he(s) <= p.eps_e * hg(s)
                assert he(s) >= 0
        assert he(HDState(11, 2, 0, Stance.STAND, 0)) == 0

    def test_monotone_in_eps(self):
        w = load_crafted("rubble_band")
        eg = load_demonstrations(w, COSTS, [asset_text("demos/rubble_cross.demo")])
        goal = GoalSpec(11, 2)
        fields = [
            egraph_heuristic(w, eg, goal, EGraphParams(eps_e=e), COSTS)
            for e in (1, 2, 10)
        ]
        for x in range(w.width):
            for y in range(w.height):
                s = HDState(x, y, 0, Stance.STAND, 0)
                vals = [f(s) for f in fields]
                assert vals == sorted(vals)


class TestSnaps:
    def make_eg(self):
        text = demo_text([
            (4, 4, 2, "STAND", 0, 1),
            (4, 4, 2, "STAND", 1, 0),
        ])
        return load_demonstrations(FREE7, COSTS, [text])

    def test_snap_cost_formula(self):
        eg = self.make_eg()
        s = HDState(4, 4, 0, Stance.STAND, 1)
        out = snap_successors(eg, COSTS, EGraphParams(), s)
        target = [t for t in out if t.dst == HDState(4, 4, 2, Stance.STAND, 0)]
        assert len(target) == 1
        # two rotations plus one phase unit of circular distance
        assert target[0].cost == 2 * COSTS.rotate + 1 * COSTS.weight_shift == 3
        assert target[0].kind == Kind.SNAP

    def test_no_snap_without_matching_partial_key(self):
        eg = self.make_eg()
        assert snap_successors(eg, COSTS, EGraphParams(), HDState(5, 4, 0, Stance.STAND, 0)) == []
        assert snap_successors(eg, COSTS, EGraphParams(), HDState(4, 4, 0, Stance.CROUCH, 0)) == []

    def test_no_self_snap(self):
        eg = self.make_eg()
        out = snap_successors(eg, COSTS, EGraphParams(), HDState(4, 4, 2, Stance.STAND, 0))
        assert all(t.dst != HDState(4, 4, 2, Stance.STAND, 0) for t in out)
        assert len(out) == 1  # only the phase-1 twin remains

    def test_snaps_share_cell_and_stance(self):
        eg = self.make_eg()
        for s in (HDState(4, 4, 5, Stance.STAND, 3), HDState(4, 4, 2, Stance.STAND, 1)):
            for t in snap_successors(eg, COSTS, EGraphParams(), s):
                assert (t.dst.x, t.dst.y, t.dst.stance) == (s.x, s.y, s.stance)
