"""Multi-representation multi-heuristic A* over any graph exposing successors.

One admissible anchor queue guards the w1*w2 suboptimality bound; each
inadmissible heuristic owns a shared queue that only ever holds states whose
representation enables that heuristic. The main loop round-robins the
inadmissible queues and falls through to the anchor whenever a queue is empty
or fails the w2 anchor-slack test. Keys use exact rational arithmetic so runs
are bit-reproducible.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import heapq

from .states import AnyState, HDState, LDState, Rep, Transition, fmt_state, state_key

log = logging.getLogger(__name__)

INF = math.inf

Heuristic = Callable[[AnyState], Union[int, Fraction, float]]


def compute_key(g_value: int, h_value, w1: Fraction):
    """Priority g + w1*h in exact arithmetic (infinite h stays infinite)."""
    if h_value == INF:
        return INF
    return g_value + w1 * h_value


@dataclass(frozen=True)
class HeuristicLists:
    """Anchor id (always 0) plus the inadmissible heuristic ids enabled per rep."""

    inadm: Dict[Rep, Tuple[int, ...]]
    anchor: int = 0

    def for_rep(self, rep: Rep) -> Tuple[int, ...]:
        return self.inadm.get(rep, ())


def init_heuristic_lists(reps: Sequence[Rep], enable: Dict[int, Iterable[Rep]]) -> HeuristicLists:
    """Build per-representation heuristic lists from an enable map.

    enable maps inadmissible heuristic ids (1..n) to the representations they
    are enabled for. A heuristic enabled for no representation is kept out of
    every list and only logged.
    """
    table: Dict[Rep, List[int]] = {rep: [] for rep in reps}
    for hid in sorted(enable):
        if hid == 0:
            raise ValueError("heuristic id 0 is reserved for the anchor")
        enabled = [rep for rep in reps if rep in set(enable[hid])]
        if not enabled:
            log.warning("heuristic %d is enabled for no representation", hid)
        for rep in enabled:
            table[rep].append(hid)
    return HeuristicLists(inadm={rep: tuple(ids) for rep, ids in table.items()})


@dataclass(frozen=True)
class SearchParams:
    w1: Fraction = Fraction(1)
    w2: Fraction = Fraction(1)
    expansion_budget: int = 10**9
    wall_clock_s: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "w1", Fraction(self.w1))
        object.__setattr__(self, "w2", Fraction(self.w2))
        if self.w1 < 1 or self.w2 < 1:
            raise ValueError("w1 and w2 must be >= 1")
        if self.expansion_budget <= 0:
            raise ValueError("expansion budget must be positive")


class Status(Enum):
    PATH = "PATH"
    EXHAUSTED = "EXHAUSTED"
    BUDGET = "BUDGET"


@dataclass
class SearchStats:
    expansions: Dict[int, int] = field(default_factory=dict)
    peak_open: Dict[int, int] = field(default_factory=dict)
    total_expansions: int = 0
    wall_time_s: float = 0.0


@dataclass
class Path:
    start: AnyState
    steps: List[Transition] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return sum(t.cost for t in self.steps)

    @property
    def states(self) -> List[AnyState]:
        return [self.start] + [t.dst for t in self.steps]

    @property
    def end(self) -> AnyState:
        return self.steps[-1].dst if self.steps else self.start


@dataclass
class SearchResult:
    status: Status
    path: Optional[Path]
    cost: Optional[int]
    stats: SearchStats
    # Live anchor frontier at the stop point (budget stops), best key first.
    best_frontier: List[Tuple[AnyState, Fraction]] = field(default_factory=list)
    # g value of every expanded state, and its key at expansion time.
    closed_g: Dict[AnyState, int] = field(default_factory=dict)
    closed_keys: Dict[AnyState, Fraction] = field(default_factory=dict)
    # Backpointers for every discovered state (prefix reconstruction).
    backpointers: Dict[AnyState, Optional[Tuple[AnyState, Transition]]] = field(default_factory=dict)
    trace: List[str] = field(default_factory=list)
    events: List[dict] = field(default_factory=list)

    def path_to(self, state: AnyState) -> Optional[Path]:
        """Rebuild the discovered path from a start to any discovered state."""
        if state not in self.backpointers:
            return None
        steps: List[Transition] = []
        cur = state
        while self.backpointers[cur] is not None:
            prev, t = self.backpointers[cur]
            steps.append(t)
            cur = prev
        steps.reverse()
        return Path(cur, steps)


class _Search:
    """Single-run state for one plan() call."""

    def __init__(self, graph, starts, goal_test, heuristics, lists, params, debug):
        self.graph = graph
        self.goal_test = goal_test
        self.hs = heuristics
        self.lists = lists
        self.params = params
        self.debug = debug
        self.n = len(heuristics) - 1
        self.g: Dict[AnyState, int] = {}
        self.bp: Dict[AnyState, Optional[Tuple[AnyState, Transition]]] = {}
        self.closed_anchor: set = set()
        self.closed_inadm: set = set()
        self.heaps: Dict[int, list] = {i: [] for i in range(self.n + 1)}
        # (queue, state) -> (key, g) of the entry currently considered live.
        self.live: Dict[Tuple[int, AnyState], Tuple[object, int]] = {}
        self.stats = SearchStats(
            expansions={i: 0 for i in range(self.n + 1)},
            peak_open={i: 0 for i in range(self.n + 1)},
        )
        self.trace: List[str] = []
        self.events: List[dict] = []
        self.incumbent: Optional[AnyState] = None
        self.incumbent_g = INF
        self.starts = starts

    # -- queue plumbing ------------------------------------------------------

    def key(self, s: AnyState, i: int):
        return compute_key(self.g[s], self.hs[i](s), self.params.w1)

    def push(self, i: int, s: AnyState):
        k = self.key(s, i)
        if k == INF:
            return
        self.live[(i, s)] = (k, self.g[s])
        heapq.heappush(self.heaps[i], (k, -self.g[s], state_key(s), s))
        if len(self.heaps[i]) > self.stats.peak_open[i]:
            self.stats.peak_open[i] = len(self.heaps[i])
        if self.debug:
            self.events.append({"event": "insert", "queue": i, "state": s, "g": self.g[s], "key": k})

    def _clean(self, i: int):
        heap = self.heaps[i]
        while heap:
            k, ng, _, s = heap[0]
            if self.live.get((i, s)) == (k, -ng):
                return
            heapq.heappop(heap)

    def minkey(self, i: int):
        self._clean(i)
        return self.heaps[i][0][0] if self.heaps[i] else INF

    def pop(self, i: int) -> Tuple[AnyState, object]:
        self._clean(i)
        k, ng, _, s = heapq.heappop(self.heaps[i])
        return s, k

    # -- expansion -----------------------------------------------------------

    def expand(self, s: AnyState, i: int, key_at_pop, minkey0):
        rep = s.rep
        if i == 0:
            self.closed_anchor.add(s)
        else:
            self.closed_inadm.add(s)
        # Expanding removes the state from every queue of its representation.
        for q in (0,) + self.lists.for_rep(rep):
            self.live.pop((q, s), None)
        self.stats.expansions[i] += 1
        self.stats.total_expansions += 1
        if self.debug:
            self.trace.append(f"{i},{fmt_state(s)},{self.g[s]},{key_at_pop}")
            self.events.append(
                {"event": "expand", "queue": i, "state": s, "g": self.g[s], "key": key_at_pop, "minkey0": minkey0}
            )
            if i != 0:
                assert key_at_pop <= self.params.w2 * minkey0, (
                    f"inadmissible expansion violated the anchor-slack test: {key_at_pop} > w2*{minkey0}"
                )
        for t in self.graph.successors(s):
            sp = t.dst
            ng = self.g[s] + t.cost
            if ng < self.g.get(sp, INF):
                self.g[sp] = ng
                self.bp[sp] = (s, t)
                if self.goal_test(sp) and ng < self.incumbent_g:
                    self.incumbent, self.incumbent_g = sp, ng
                if sp not in self.closed_anchor:
                    self.push(0, sp)
                    if sp not in self.closed_inadm:
                        k0 = self.key(sp, 0)
                        for q in self.lists.for_rep(sp.rep):
                            kq = self.key(sp, q)
                            if kq == INF or k0 == INF:
                                continue
                            if kq <= self.params.w2 * k0:
                                self.push(q, sp)


def plan(
    graph,
    start,
    goal_test: Callable[[AnyState], bool],
    heuristics: Sequence[Heuristic],
    lists: HeuristicLists,
    params: SearchParams,
    debug: bool = False,
) -> SearchResult:
    """Run the search from one start state (or several, all at g=0).

    heuristics[0] is the anchor and must be admissible over the graph; the
    rest are the inadmissible heuristics referenced by the lists.
    """
    t0 = time.perf_counter()
    if isinstance(start, (HDState, LDState)):
        starts = [start]
    else:
        starts = list(start)
    if not starts:
        raise ValueError("at least one start state required")
    starts = sorted(set(starts), key=state_key)
    sr = _Search(graph, starts, goal_test, heuristics, lists, params, debug)
    closed_g: Dict[AnyState, int] = {}
    closed_keys: Dict[AnyState, Fraction] = {}

    for st in starts:
        sr.g[st] = 0
        sr.bp[st] = None
        if goal_test(st) and sr.incumbent_g > 0:
            sr.incumbent, sr.incumbent_g = st, 0
        sr.push(0, st)
        for q in lists.for_rep(st.rep):
            sr.push(q, st)

    def finish(status: Status) -> SearchResult:
        sr.stats.wall_time_s = time.perf_counter() - t0
        path = None
        cost = None
        if status == Status.PATH:
            steps: List[Transition] = []
            cur = sr.incumbent
            while sr.bp[cur] is not None:
                prev, t = sr.bp[cur]
                steps.append(t)
                cur = prev
            steps.reverse()
            path = Path(cur, steps)
            # Ancestors along the chain may have improved after the goal's g
            # was recorded, so the real chain cost can only be lower.
            cost = path.cost
            assert cost <= sr.incumbent_g, "reconstructed path may not exceed the recorded goal cost"
        frontier: List[Tuple[AnyState, Fraction]] = []
        if status == Status.BUDGET:
            seen = {}
            for (q, s), (k, gv) in sr.live.items():
                if q == 0:
                    seen[s] = k
            frontier = sorted(seen.items(), key=lambda kv: (kv[1], state_key(kv[0])))
        return SearchResult(
            status=status,
            path=path,
            cost=cost,
            stats=sr.stats,
            best_frontier=frontier,
            closed_g=closed_g,
            closed_keys=closed_keys,
            backpointers=sr.bp,
            trace=sr.trace,
            events=sr.events,
        )

    def over_budget() -> bool:
        if sr.stats.total_expansions >= params.expansion_budget:
            return True
        if params.wall_clock_s is not None and time.perf_counter() - t0 > params.wall_clock_s:
            return True
        return False

    def expand_from(i: int):
        s, k = sr.pop(i)
        mk0 = sr.minkey(0)
        sr.expand(s, i, k, mk0)
        closed_g[s] = sr.g[s]
        closed_keys[s] = k

    while sr.minkey(0) != INF:
        schedule = range(1, sr.n + 1) if sr.n > 0 else (0,)
        for i in schedule:
            if over_budget():
                return finish(Status.BUDGET)
            mk0 = sr.minkey(0)
            if mk0 == INF:
                break
            if i != 0 and sr.minkey(i) <= params.w2 * mk0:
                if sr.incumbent_g <= sr.minkey(i):
                    return finish(Status.PATH)
                expand_from(i)
            else:
                if sr.incumbent_g <= mk0:
                    return finish(Status.PATH)
                expand_from(0)

    if sr.incumbent is not None:
        return finish(Status.PATH)
    return finish(Status.EXHAUSTED)
