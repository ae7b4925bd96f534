"""Map parsing, cost table validation, goal semantics."""
import pytest

from mrplan.states import HDState, LDState, Rep, Stance
from mrplan.world import (
    CostTable,
    CostTableError,
    GoalSpec,
    MapFormatError,
    WALL,
    dump_map,
    is_goal,
    load_map,
    make_goal,
)


def test_load_basic():
    w = load_map("3 1\n.#.")
    assert (w.width, w.height) == (3, 1)
    assert w.terrain(1, 0) == WALL
    assert w.terrain(0, 0) == "."


def test_load_low_cell():
    w = load_map("2 2\n..\n.~")
    assert w.terrain(1, 1) == "~"


def test_out_of_bounds_reads_wall():
    w = load_map("2 2\n..\n..")
    assert w.terrain(-1, 0) == WALL
    assert w.terrain(0, 5) == WALL


def test_row_length_mismatch():
    with pytest.raises(MapFormatError, match="length 3"):
        load_map("2 1\n...")


def test_unknown_terrain_char_reports_position():
    with pytest.raises(MapFormatError, match="row 2, column 2"):
        load_map("3 2\n...\n.x.")


def test_missing_rows():
    with pytest.raises(MapFormatError):
        load_map("3 3\n...\n...")


def test_dump_round_trip():
    text = "4 2\n.#%~\n....\n"
    assert dump_map(load_map(text)) == text


def test_cost_table_defaults_valid():
    c = CostTable()
    assert c.min_cell_move == 2
    assert c.min_in_place == 1


@pytest.mark.parametrize("field", ["walk_step", "rotate", "crawl_step", "stance_change",
                                   "rep_switch", "rubble_substep", "weight_shift"])
def test_cost_table_rejects_nonpositive(field):
    with pytest.raises(CostTableError):
        CostTable(**{field: 0})
    with pytest.raises(CostTableError):
        CostTable(**{field: -3})


def test_goal_matches_any_representation():
    g = GoalSpec(4, 2)
    assert is_goal(g, HDState(4, 2, 7, Stance.CROUCH, 3))
    assert is_goal(g, LDState(Rep.WALK, 4, 2, 0))
    assert is_goal(g, LDState(Rep.CRAWL, 4, 2))
    assert not is_goal(g, HDState(4, 3, 0, Stance.STAND, 0))


def test_make_goal_rejects_wall():
    w = load_map("3 1\n.#.")
    with pytest.raises(ValueError):
        make_goal(w, 1, 0)
