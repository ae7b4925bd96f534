"""Hybrid graph: membership rule, frozen successor examples, extensional
agreement with the longhand rule-table enumeration, and refinement behavior."""
import pytest

from mrplan.adaptive_graph import AdaptiveGraph, MembershipError
from mrplan.maps import gen_random_map
from mrplan.oracle import all_hd_states, all_ld_states
from mrplan.reference import reference_successors
from mrplan.states import HDRegion, HDState, Kind, LDState, Rep, Stance
from mrplan.world import CostTable, load_map

COSTS = CostTable()
FREE7 = load_map("7 7\n" + "\n".join(["." * 7] * 7))


def graph(world, *regions):
    g = AdaptiveGraph(world, COSTS)
    for r in regions:
        g = g.add_hd_region(r)
    return g


class TestRegions:
    def test_empty_regions_always_false(self):
        g = graph(FREE7)
        assert not any(g.in_hd_region(x, y) for x in range(7) for y in range(7))

    def test_chebyshev_membership(self):
        g = graph(FREE7, HDRegion(5, 5, 1))
        assert g.in_hd_region(6, 6)
        assert not g.in_hd_region(7, 5) and not g.in_hd_region(3, 5)

    def test_add_region_is_persistent_and_immutable(self):
        g0 = graph(FREE7)
        g1 = g0.add_hd_region(HDRegion(3, 3, 0))
        assert g0.regions == () and len(g1.regions) == 1
        assert not g0.in_hd_region(3, 3) and g1.in_hd_region(3, 3)

    def test_duplicate_regions_allowed(self):
        r = HDRegion(2, 2, 1)
        g = graph(FREE7, r, r)
        assert len(g.regions) == 2

    def test_region_center_must_be_in_bounds(self):
        with pytest.raises(ValueError):
            graph(FREE7, HDRegion(9, 9, 1))


class TestSuccessorExamples:
    def test_crawl_state_open_map_region_free(self):
        """Frozen example: 4 crawl moves (cost 3) + 8 switch targets (cost 5)."""
        g = graph(FREE7)
        out = g.successors(LDState(Rep.CRAWL, 3, 3))
        assert len(out) == 12
        crawl = [t for t in out if t.kind == Kind.LD_PRIMITIVE]
        switch = [t for t in out if t.kind == Kind.REP_SWITCH]
        assert len(crawl) == 4 and all(t.cost == 3 for t in crawl)
        assert len(switch) == 8 and all(t.cost == 5 for t in switch)
        assert {t.dst.theta for t in switch} == set(range(8))

    def test_region_covering_map_gives_raw_hd_successors(self):
        from mrplan.primitives import hd_successors

        g = graph(FREE7, HDRegion(3, 3, 6))
        s = HDState(3, 3, 0, Stance.STAND, 0)
        assert set(g.successors(s)) == set(hd_successors(FREE7, COSTS, s))

    def test_walk_step_into_region_lands_on_nominal_lift(self):
        """Frozen example: the forward step beside a region emits the
        nominal full-body target, not a walk target."""
        g = graph(FREE7, HDRegion(6, 3, 1))  # covers x >= 5
        s = LDState(Rep.WALK, 4, 3, 0)
        out = g.successors(s)
        lifted = [t for t in out if t.dst == HDState(5, 3, 0, Stance.STAND, 0)]
        assert len(lifted) == 1
        assert lifted[0].cost == COSTS.walk_step
        assert lifted[0].kind == Kind.LD_PRIMITIVE
        assert not any(isinstance(t.dst, LDState) and t.dst.cell == (5, 3) for t in out)

    def test_seeded_hd_transition_into_region(self):
        g = graph(FREE7, HDRegion(6, 3, 1))
        s = LDState(Rep.WALK, 4, 3, 0)
        seeded = [t for t in g.successors(s) if t.dst == HDState(5, 3, 0, Stance.STAND, 1)]
        assert len(seeded) == 1 and seeded[0].kind == Kind.HD_PRIMITIVE

    def test_region_exit_projects_into_every_valid_rep(self):
        g = graph(FREE7, HDRegion(3, 3, 0))
        s = HDState(3, 3, 0, Stance.STAND, 0)
        out = g.successors(s)
        exits = [t for t in out if isinstance(t.dst, LDState) and t.dst.cell == (4, 3)]
        assert {t.dst.rep for t in exits} == {Rep.WALK, Rep.CRAWL}
        assert all(t.cost == COSTS.walk_step for t in exits)

    def test_region_exit_onto_low_projects_crawl_only(self):
        w = load_map("3 1\n.~.")
        g = AdaptiveGraph(w, COSTS).add_hd_region(HDRegion(0, 0, 0))
        s = HDState(0, 0, 0, Stance.CROUCH, 0)
        exits = [t for t in g.successors(s) if t.dst.cell == (1, 0)]
        assert [t.dst.rep for t in exits] == [Rep.CRAWL]


class TestMembershipRule:
    def test_hd_outside_region_rejected(self):
        with pytest.raises(MembershipError):
            graph(FREE7).successors(HDState(3, 3, 0, Stance.STAND, 0))

    def test_ld_inside_region_rejected(self):
        with pytest.raises(MembershipError):
            graph(FREE7, HDRegion(3, 3, 1)).successors(LDState(Rep.CRAWL, 3, 3))

    def test_reachable_sweep_respects_partition(self):
        """Every emitted target satisfies the membership rule (exhaustive)."""
        for seed, regions in ((1, (HDRegion(3, 3, 1),)), (2, (HDRegion(1, 4, 2), HDRegion(5, 1, 1)))):
            w = gen_random_map(seed, 8, 8, {"wall": 0.15, "low": 0.15, "rubble": 0.1})
            g = AdaptiveGraph(w, COSTS, regions)
            members = [s for s in all_hd_states(w) if g.member(s)]
            members += [
                s
                for rep in (Rep.WALK, Rep.CRAWL)
                for s in all_ld_states(w, rep)
                if g.member(s)
            ]
            for s in members:
                for t in g.successors(s):
                    assert g.member(t.dst), (s, t)


class TestAgainstRuleTable:
    @pytest.mark.parametrize("seed,regions", [
        (1, ()),
        (2, (HDRegion(3, 3, 1),)),
        (3, (HDRegion(1, 1, 1), HDRegion(4, 4, 2))),
        (4, (HDRegion(2, 4, 0),)),
    ])
    def test_extensional_equality_whole_map(self, seed, regions):
        w = gen_random_map(seed, 6, 6, {"wall": 0.2, "low": 0.15, "rubble": 0.1})
        g = AdaptiveGraph(w, COSTS, regions)
        states = [s for s in all_hd_states(w) if g.member(s)]
        states += [s for rep in (Rep.WALK, Rep.CRAWL) for s in all_ld_states(w, rep) if g.member(s)]
        for s in states:
            got = g.successors(s)
            assert set(got) == set(reference_successors(g, s)), s
            assert len(got) == len(set(got))


class TestDeterminismAndRefinement:
    def test_identical_calls_identical_lists(self):
        w = gen_random_map(6, 7, 7, {"wall": 0.1, "low": 0.1, "rubble": 0.1})
        g = AdaptiveGraph(w, COSTS, (HDRegion(3, 3, 1),))
        s = LDState(Rep.WALK, 1, 1, 0)
        assert g.successors(s) == g.successors(s)
        g2 = AdaptiveGraph(w, COSTS, (HDRegion(3, 3, 1),))
        assert g.successors(s) == g2.successors(s)

    def test_monotone_refinement_far_states_unchanged(self):
        """A new region never changes successors farther than radius + 2 away."""
        w = gen_random_map(8, 8, 8, {"wall": 0.1, "low": 0.1, "rubble": 0.05})
        base = AdaptiveGraph(w, COSTS)
        region = HDRegion(2, 2, 1)
        refined = base.add_hd_region(region)
        for rep in (Rep.WALK, Rep.CRAWL):
            for s in all_ld_states(w, rep):
                d = max(abs(s.x - region.x), abs(s.y - region.y))
                if d >= region.radius + 2:
                    assert base.successors(s) == refined.successors(s)

    def test_projection_cost_flag(self):
        g = AdaptiveGraph(FREE7, COSTS, (HDRegion(3, 3, 0),), projection_cost=1)
        s = HDState(3, 3, 0, Stance.STAND, 0)
        exits = [t for t in g.successors(s) if isinstance(t.dst, LDState) and t.dst.cell == (4, 3)]
        assert all(t.cost == COSTS.walk_step + 1 for t in exits)
