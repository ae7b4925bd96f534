"""mrplan: grid planning with adaptive dimensionality over multiple
locomotion representations, with interleaved execution and experience reuse."""

from .adaptive_graph import AdaptiveGraph, MembershipError, ad_successors
from .egraph import EGraph, EGraphParams, egraph_heuristic, load_demonstrations, snap_successors
from .executive import ExecParams, ExecTrace, Segment, interleave_run, simulate_execute, split_segments
from .planner import (
    AdaptivePlanParams,
    AdaptiveResult,
    Outcome,
    Tunnel,
    build_tunnel,
    plan_adaptive,
    select_region,
    track,
    validate_path,
)
from .primitives import (
    HDGraph,
    LDGraph,
    executable_macro_successors,
    hd_successors,
    ld_successors,
    special_projection_successors,
)
from .projection import cross_project, inverse_project, project
from .search import (
    HeuristicLists,
    Path,
    SearchParams,
    SearchResult,
    Status,
    compute_key,
    init_heuristic_lists,
    plan,
)
from .states import (
    AnyState,
    Controller,
    HDRegion,
    HDState,
    Kind,
    LDState,
    Rep,
    Stance,
    Transition,
)
from .world import CostTable, GoalSpec, World, is_goal, load_map, make_goal

__version__ = "0.1.0"
