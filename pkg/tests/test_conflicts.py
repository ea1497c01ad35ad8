import itertools

import pytest
from hypothesis import given, settings, strategies as st

from comcore.conflicts import (
    CollisionWindow,
    ConflictType,
    VesselRole,
    classify,
    first_collision,
    label,
    validate,
)
from comcore.errors import RoleNotApplicable, UnclassifiableConflict, WindowUnavailable
from comcore.grid import Cell
from comcore.pathfinder import Solution, TimedPath

from oracles import angular_count, occupancy_collisions, on_starboard

V = Cell(3, 3)
CARDINALS = {"E": Cell(4, 3), "N": Cell(3, 4), "W": Cell(2, 3), "S": Cell(3, 2)}
OPPOSITE = {"E": "W", "W": "E", "N": "S", "S": "N"}


def window(prev_i, prev_j, next_i=None, next_j=None):
    # default: both go straight through the vertex
    mirror = lambda c: Cell(2 * V.x - c.x, 2 * V.y - c.y)
    return CollisionWindow(0, 1, 3, V, prev_i, next_i or mirror(prev_i), prev_j, next_j or mirror(prev_j))


def sol(*paths):
    return Solution(tuple(TimedPath(k, p) for k, p in enumerate(paths)))


def line(x0, y0, dx, dy, n):
    return [(x0 + k * dx, y0 + k * dy) for k in range(n)]


def test_validate_head_on_example():
    found = validate(sol(line(0, 3, 1, 0, 7), line(6, 3, -1, 0, 7)))
    conflict, w = found
    assert (conflict.agent_i, conflict.agent_j, conflict.vertex, conflict.t) == (0, 1, V, 3)
    assert conflict.ctype == ConflictType.HEAD_ON
    assert {w.prev_i, w.prev_j} == {Cell(2, 3), Cell(4, 3)}


def test_validate_grid_orientation():
    # vertical head-on: prev cells south and north of the vertex
    _, w = validate(sol(line(3, 0, 0, 1, 7), line(3, 6, 0, -1, 7)))
    assert (w.prev_i, w.prev_j) == (Cell(3, 2), Cell(3, 4))
    conflict, w = validate(sol(line(3, 0, 0, 1, 7), line(6, 3, -1, 0, 7)))
    assert (w.prev_i, w.prev_j) == (Cell(3, 2), Cell(4, 3))
    assert conflict.ctype == ConflictType.CROSSING


def test_validate_parallel_paths():
    assert validate(sol(line(0, 1, 1, 0, 7), line(0, 2, 1, 0, 7))) is None


def test_validate_picks_lowest_pair_and_ids():
    # three agents reach (3,3) at t=3; a fourth pair collides elsewhere at t=3 too
    paths = [line(0, 3, 1, 0, 7), line(3, 0, 0, 1, 7), line(6, 3, -1, 0, 7), line(3, 6, 0, -1, 7)]
    conflict, _ = validate(sol(*paths))
    assert (conflict.agent_i, conflict.agent_j) == (0, 1)


def test_disappear_at_target():
    # agent 0 stops at (2,3) at t=2; agent 1 passes that cell at t=4
    a = [(0, 3), (1, 3), (2, 3)]
    b = [(2, 0), (2, 1), (2, 2), (2, 2), (2, 3), (2, 4)]
    assert first_collision(sol(a, b)) is None


def test_conflict_at_final_waypoint_has_no_window():
    a = [(0, 3), (1, 3), (2, 3)]
    b = [(2, 5), (2, 4), (2, 3), (2, 2)]
    with pytest.raises(WindowUnavailable):
        validate(sol(a, b))


def test_conflict_at_t0_has_no_window():
    with pytest.raises(WindowUnavailable):
        validate(sol([(0, 0), (1, 0)], [(0, 0), (0, 1)]))


def test_classify_examples():
    assert classify(window(CARDINALS["S"], CARDINALS["N"])) == ConflictType.HEAD_ON
    assert classify(window(CARDINALS["S"], CARDINALS["E"])) == ConflictType.CROSSING
    assert classify(window(CARDINALS["S"], CARDINALS["W"])) == ConflictType.CROSSING


def test_label_examples():
    assert label(window(CARDINALS["S"], CARDINALS["E"])) == (VesselRole.GIVE_WAY, VesselRole.STAND_ON)
    assert label(window(CARDINALS["S"], CARDINALS["W"])) == (VesselRole.STAND_ON, VesselRole.GIVE_WAY)
    with pytest.raises(RoleNotApplicable):
        label(window(CARDINALS["S"], CARDINALS["N"]))


ORDERED_PAIRS = list(itertools.permutations("ENWS", 2))


@pytest.mark.parametrize("a,b", ORDERED_PAIRS)
def test_all_cardinal_pairs(a, b):
    w = window(CARDINALS[a], CARDINALS[b])
    n = angular_count(V, CARDINALS[a], CARDINALS[b])
    ctype = classify(w)
    assert ctype == (ConflictType.HEAD_ON if OPPOSITE[a] == b else ConflictType.CROSSING)
    assert classify(w.swapped()) == ctype
    if ctype == ConflictType.HEAD_ON:
        assert n == 4
        return
    roles = label(w)
    assert sorted(r.value for r in roles) == ["give-way", "stand-on"]
    assert label(w.swapped()) == roles[::-1]
    give = 0 if roles[0] == VesselRole.GIVE_WAY else 1
    prevs = (w.prev_i, w.prev_j)
    # the give-way vessel has the other one on her starboard side
    assert on_starboard(prevs[give], V, prevs[1 - give])
    assert not on_starboard(prevs[1 - give], V, prevs[give])


def test_diagonal_previous_cell_is_unclassifiable():
    w = CollisionWindow(0, 1, 3, V, Cell(2, 2), Cell(4, 4), Cell(4, 4), Cell(2, 2))
    with pytest.raises(UnclassifiableConflict) as info:
        classify(w)
    assert info.value.window == w


def test_wait_in_window_is_unclassifiable():
    w = CollisionWindow(0, 1, 3, V, V, Cell(3, 4), Cell(4, 3), Cell(2, 3))
    with pytest.raises(UnclassifiableConflict):
        classify(w)


@st.composite
def random_walks(draw):
    k = draw(st.integers(2, 4))
    paths = []
    for _ in range(k):
        start = (draw(st.integers(0, 5)), draw(st.integers(0, 5)))
        steps = draw(st.lists(st.sampled_from([(1, 0), (-1, 0), (0, 1), (0, -1)]), min_size=0, max_size=10))
        p = [start]
        for dx, dy in steps:
            p.append((p[-1][0] + dx, p[-1][1] + dy))
        paths.append(p)
    return paths


@settings(max_examples=300, deadline=None)
@given(random_walks())
def test_first_collision_matches_occupancy_oracle(paths):
    s = sol(*paths)
    expected = occupancy_collisions({k: p for k, p in enumerate(paths)})
    got = first_collision(s)
    if not expected:
        assert got is None
        return
    t0 = min(e[0] for e in expected)
    pair = min(e[2] for e in expected if e[0] == t0)
    assert got[0] == t0
    assert (got[1], got[2]) == pair
    assert not any(e[0] < got[0] for e in expected)
