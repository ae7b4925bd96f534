"""Search behavior: exact keys, queue discipline, optimality degeneracy
against the Dijkstra oracle, bounded suboptimality, and trace invariants."""
import heapq
import math
from fractions import Fraction

import pytest

from mrplan.heuristics import anchor_field, crawl_field, walk_field
from mrplan.maps import gen_random_map
from mrplan.oracle import dijkstra
from mrplan.primitives import HDGraph, LDGraph
from mrplan.search import (
    HeuristicLists,
    SearchParams,
    Status,
    compute_key,
    init_heuristic_lists,
    plan,
)
from mrplan.states import HDState, LDState, Rep, Stance, state_key
from mrplan.world import CostTable, GoalSpec, is_goal, load_map

COSTS = CostTable()
DENSITIES = {"wall": 0.15, "low": 0.12, "rubble": 0.08}


def zero_h(_s):
    return 0


class TestKey:
    def test_direct_formula(self):
        assert compute_key(10, 4, Fraction(2)) == 18

    def test_weight_one_zero_h(self):
        assert compute_key(7, 0, Fraction(1)) == 7

    def test_rational_weight_exact(self):
        assert compute_key(0, 7, Fraction(3, 2)) == Fraction(21, 2)

    def test_infinite_h(self):
        assert compute_key(3, math.inf, Fraction(2)) == math.inf


class TestHeuristicLists:
    def test_single_rep_two_heuristics(self):
        lists = init_heuristic_lists((Rep.HD,), {1: (Rep.HD,), 2: (Rep.HD,)})
        assert lists.for_rep(Rep.HD) == (1, 2)

    def test_split_per_rep(self):
        lists = init_heuristic_lists((Rep.WALK, Rep.CRAWL), {1: (Rep.WALK,), 2: (Rep.CRAWL,)})
        assert lists.for_rep(Rep.WALK) == (1,)
        assert lists.for_rep(Rep.CRAWL) == (2,)

    def test_all_disabled_degenerates(self):
        lists = init_heuristic_lists((Rep.HD,), {})
        assert lists.for_rep(Rep.HD) == ()

    def test_heuristic_enabled_nowhere_warns_not_raises(self, caplog):
        import logging

        with caplog.at_level(logging.WARNING):
            lists = init_heuristic_lists((Rep.WALK,), {1: ()})
        assert lists.for_rep(Rep.WALK) == ()
        assert any("no representation" in r.message for r in caplog.records)

    def test_anchor_id_reserved(self):
        with pytest.raises(ValueError):
            init_heuristic_lists((Rep.HD,), {0: (Rep.HD,)})


def hd_setup(world, goal):
    graph = HDGraph(world, COSTS)
    h0 = anchor_field(world, COSTS, goal.cell)
    lists = init_heuristic_lists((Rep.HD,), {1: (Rep.HD,)})
    return graph, [h0, zero_h], lists


class TestDegeneracyAndBounds:
    def test_start_equals_goal(self):
        w = gen_random_map(0, 7, 7, DENSITIES)
        goal = GoalSpec(1, 1)
        graph, hs, lists = hd_setup(w, goal)
        r = plan(graph, HDState(1, 1, 0, Stance.STAND, 0), lambda s: is_goal(goal, s),
                 hs, lists, SearchParams(w1=1, w2=1))
        assert r.status == Status.PATH and r.cost == 0 and r.path.steps == []

    @pytest.mark.parametrize("seed", range(12))
    def test_hd_space_matches_dijkstra(self, seed):
        w = gen_random_map(seed, 7, 7, DENSITIES)
        goal = GoalSpec(5, 5)
        start = HDState(1, 1, 0, Stance.STAND, 0)
        graph, hs, lists = hd_setup(w, goal)
        r = plan(graph, start, lambda s: is_goal(goal, s), hs, lists, SearchParams(w1=1, w2=1))
        _, best = dijkstra(graph.successors, [start], lambda s: is_goal(goal, s))
        if best is None:
            assert r.status == Status.EXHAUSTED
        else:
            assert r.status == Status.PATH and r.cost == best

    @pytest.mark.parametrize("seed", range(6))
    def test_ld_spaces_match_dijkstra(self, seed):
        w = gen_random_map(100 + seed, 7, 7, DENSITIES)
        goal = GoalSpec(5, 5)
        for rep, start, field in (
            (Rep.WALK, LDState(Rep.WALK, 1, 1, 0), walk_field),
            (Rep.CRAWL, LDState(Rep.CRAWL, 1, 1), crawl_field),
        ):
            graph = LDGraph(w, COSTS, rep)
            hs = [field(w, COSTS, goal.cell), zero_h]
            lists = init_heuristic_lists((rep,), {1: (rep,)})
            r = plan(graph, start, lambda s: is_goal(goal, s), hs, lists, SearchParams(w1=1, w2=1))
            _, best = dijkstra(graph.successors, [start], lambda s: is_goal(goal, s))
            if best is None:
                assert r.status == Status.EXHAUSTED
            else:
                assert r.status == Status.PATH and r.cost == best

    @pytest.mark.parametrize("seed", range(8))
    def test_inflated_weights_bounded(self, seed):
        w = gen_random_map(200 + seed, 7, 7, DENSITIES)
        goal = GoalSpec(5, 5)
        start = HDState(1, 1, 0, Stance.STAND, 0)
        graph, hs, lists = hd_setup(w, goal)
        r = plan(graph, start, lambda s: is_goal(goal, s), hs, lists, SearchParams(w1=2, w2=2))
        _, best = dijkstra(graph.successors, [start], lambda s: is_goal(goal, s))
        if best is None:
            assert r.status == Status.EXHAUSTED
        else:
            assert r.status == Status.PATH and r.cost <= 4 * best


def reference_astar(graph, start, goal_test, h):
    """Plain A* with the same tie-break policy, for expansion-order parity."""
    g = {start: 0}
    heap = [(compute_key(0, h(start), Fraction(1)), 0, state_key(start), start)]
    closed = set()
    order = []
    incumbent = None
    incumbent_g = math.inf
    while heap:
        k, ng, _, s = heapq.heappop(heap)
        if s in closed or g[s] != -ng:
            continue
        if incumbent_g <= k:
            break
        closed.add(s)
        order.append(s)
        for t in graph.successors(s):
            cand = g[s] + t.cost
            if cand < g.get(t.dst, math.inf):
                g[t.dst] = cand
                if goal_test(t.dst) and cand < incumbent_g:
                    incumbent, incumbent_g = t.dst, cand
                hk = compute_key(cand, h(t.dst), Fraction(1))
                if hk != math.inf:
                    heapq.heappush(heap, (hk, -cand, state_key(t.dst), t.dst))
    return order, (incumbent_g if incumbent is not None else None)


class TestAStarEquivalence:
    @pytest.mark.parametrize("seed", range(4))
    def test_anchor_only_matches_astar_expansion_order(self, seed):
        w = gen_random_map(300 + seed, 6, 6, DENSITIES)
        goal = GoalSpec(4, 4)
        start = HDState(1, 1, 0, Stance.STAND, 0)
        graph = HDGraph(w, COSTS)
        h0 = anchor_field(w, COSTS, goal.cell)
        lists = init_heuristic_lists((Rep.HD,), {})
        r = plan(graph, start, lambda s: is_goal(goal, s), [h0], lists,
                 SearchParams(w1=1, w2=1), debug=True)
        expanded = [e["state"] for e in r.events if e["event"] == "expand"]
        ref_order, ref_cost = reference_astar(graph, start, lambda s: is_goal(goal, s), h0)
        assert (r.cost if r.status == Status.PATH else None) == ref_cost
        assert expanded == ref_order


class TestQueueDiscipline:
    def run_debug(self, seed, w1=2, w2=2):
        w = gen_random_map(400 + seed, 7, 7, DENSITIES)
        goal = GoalSpec(5, 5)
        start = HDState(1, 1, 0, Stance.STAND, 0)
        graph = HDGraph(w, COSTS)
        hs = [anchor_field(w, COSTS, goal.cell),
              walk_field(w, COSTS, goal.cell),
              crawl_field(w, COSTS, goal.cell)]
        lists = init_heuristic_lists((Rep.HD,), {1: (Rep.HD,), 2: (Rep.HD,)})
        return plan(graph, start, lambda s: is_goal(goal, s), hs, lists,
                    SearchParams(w1=Fraction(w1), w2=Fraction(w2)), debug=True)

    @pytest.mark.parametrize("seed", range(5))
    def test_at_most_one_anchor_one_inadmissible_expansion(self, seed):
        r = self.run_debug(seed)
        anchor_seen, inadm_seen = set(), set()
        for e in r.events:
            if e["event"] != "expand":
                continue
            if e["queue"] == 0:
                assert e["state"] not in anchor_seen
                anchor_seen.add(e["state"])
            else:
                assert e["state"] not in inadm_seen
                inadm_seen.add(e["state"])

    @pytest.mark.parametrize("seed", range(5))
    def test_inadmissible_expansions_respect_anchor_slack(self, seed):
        r = self.run_debug(seed)
        for e in r.events:
            if e["event"] == "expand" and e["queue"] != 0:
                assert e["key"] <= 2 * e["minkey0"]

    @pytest.mark.parametrize("seed", range(5))
    def test_insertions_respect_rep_lists(self, seed):
        r = self.run_debug(seed)
        for e in r.events:
            if e["event"] == "insert" and e["queue"] != 0:
                assert e["queue"] in (1, 2)

    def test_anchor_minkey_nondecreasing_with_consistent_h(self):
        r = self.run_debug(3, w1=1, w2=1)
        keys = [e["key"] for e in r.events if e["event"] == "expand" and e["queue"] == 0]
        assert all(a <= b for a, b in zip(keys, keys[1:]))


class TestOutcomes:
    def test_budget_outcome_carries_frontier(self):
        w = gen_random_map(1, 7, 7, {})
        goal = GoalSpec(5, 5)
        graph, hs, lists = hd_setup(w, goal)
        r = plan(graph, HDState(1, 1, 0, Stance.STAND, 0), lambda s: is_goal(goal, s),
                 hs, lists, SearchParams(w1=1, w2=1, expansion_budget=5))
        assert r.status == Status.BUDGET
        assert r.best_frontier
        keys = [k for _, k in r.best_frontier]
        assert keys == sorted(keys)

    def test_exhausted_on_disconnected_goal(self):
        # standing on rubble beside low clearance: in-place moves only, so the
        # search expands a pocket of states and runs dry
        w = load_map("3 1\n%~.")
        goal = GoalSpec(2, 0)
        graph, hs, lists = hd_setup(w, goal)
        r = plan(graph, HDState(0, 0, 0, Stance.STAND, 0), lambda s: is_goal(goal, s),
                 hs, lists, SearchParams(w1=1, w2=1))
        assert r.status == Status.EXHAUSTED
        assert r.best_frontier == []
        assert r.closed_g

    def test_exhausted_when_anchor_prunes_everything(self):
        # goal sealed by walls: the anchor field is infinite at the start, so
        # nothing is ever queued
        w = load_map("5 5\n.....\n.###.\n.#.#.\n.###.\n.....")
        goal = GoalSpec(2, 2)
        graph, hs, lists = hd_setup(w, goal)
        r = plan(graph, HDState(0, 0, 0, Stance.STAND, 0), lambda s: is_goal(goal, s),
                 hs, lists, SearchParams(w1=1, w2=1))
        assert r.status == Status.EXHAUSTED
        assert r.stats.total_expansions == 0

    def test_deterministic_results_and_stats(self):
        w = gen_random_map(7, 7, 7, DENSITIES)
        goal = GoalSpec(5, 5)
        graph, hs, lists = hd_setup(w, goal)
        params = SearchParams(w1=2, w2=2)
        a = plan(graph, HDState(1, 1, 0, Stance.STAND, 0), lambda s: is_goal(goal, s), hs, lists, params, debug=True)
        b = plan(graph, HDState(1, 1, 0, Stance.STAND, 0), lambda s: is_goal(goal, s), hs, lists, params, debug=True)
        assert a.status == b.status and a.cost == b.cost
        assert a.stats.expansions == b.stats.expansions
        assert a.trace == b.trace
        if a.path:
            assert a.path.steps == b.path.steps


GOLDEN_TRACE = [
    "1,WALK(1,1,0),0,0",
    "1,WALK(1,1,1),1,1",
    "1,WALK(1,1,7),1,1",
    "1,WALK(1,1,2),2,2",
    "1,WALK(1,1,6),2,2",
    "1,WALK(2,1,0),2,2",
]


def test_debug_trace_golden():
    """Trace format is stable: queue_id, state, g, key."""
    w = load_map("5 3\n.....\n.....\n.....")
    goal = GoalSpec(4, 1)
    graph = LDGraph(w, COSTS, Rep.WALK)
    h0 = walk_field(w, COSTS, goal.cell)
    lists = init_heuristic_lists((Rep.WALK,), {1: (Rep.WALK,)})
    r = plan(graph, LDState(Rep.WALK, 1, 1, 0), lambda s: is_goal(goal, s),
             [h0, zero_h], lists, SearchParams(w1=1, w2=1), debug=True)
    assert r.status == Status.PATH and r.cost == 6
    assert r.trace[:6] == GOLDEN_TRACE
