"""
Unit tests for the MCTS push planner and the plan text format.
"""
import math
from pathlib import Path

import pytest

from pushplan.bench import SceneSpec, generate_scene
from pushplan.config import PlannerConfig
from pushplan.exceptions import InvalidStart, NoPlanFound, ParseError
from pushplan.mcts import (
    NodeStatus,
    Plan,
    PlanStats,
    PushSearch,
    SearchNode,
    extract_best_path,
    format_plan,
    parse_plan,
    plan_phim,
    reward,
    reward_from_counts,
    ucb,
)
from pushplan.push_sim import PushAction, PushDirection, StraightPush, is_goal, replay_actions, simulate_push
from pushplan.scene_loader import load_scene

FIXTURES = Path(__file__).parent / "fixtures"

UP = PushDirection.UP
DOWN = PushDirection.DOWN


def scene(name):
    return load_scene(FIXTURES / f"{name}.scene")


def _plan_or_best(config, ws, params):
    try:
        return plan_phim(config, ws, params)
    except NoPlanFound as e:
        return e.plan


def _walk(node):
    yield node
    for child in node.children.values():
        yield from _walk(child)


def _child(parent, action, edge_reward=0.0, status=NodeStatus.OPEN, visits=1, cumulative=0.0):
    node = SearchNode(
        parent.config,
        parent,
        action,
        parent.depth + 1,
        status=status,
        visits=visits,
        cumulative_reward=cumulative,
        edge_reward=edge_reward,
    )
    parent.children[action] = node
    return node


class TestUcb:
    """Test the selection score."""

    def test_known_value(self):
        assert ucb(8, 2, 3.0, math.sqrt(2)) == pytest.approx(3.5393, abs=1e-4)

    def test_shift_keeps_argmax_at_equal_visits(self):
        """Test adding a constant to every reward keeps the best child at uniform visits."""
        rewards = [0.5, 2.0, 1.5]

        def best(shift):
            scores = [ucb(9, 3, (w + shift) * 3, math.sqrt(2)) for w in rewards]
            return scores.index(max(scores))

        assert best(0.0) == best(4.0) == 1

    def test_no_exploration_is_mean(self):
        assert ucb(10, 4, 3.0, 0.0) == 0.75

    def test_less_visited_child_scores_higher(self):
        assert ucb(20, 2, 1.0, 1.0) > ucb(20, 8, 4.0, 1.0)


class TestReward:
    """Test push rewards."""

    @pytest.mark.parametrize(
        "counts,expected",
        [
            ((5, 3, 2, 4), 4.0),
            ((3, 3, 2, 4), 0.0),
            ((3, 4, 2, 2), -1.0),
            ((2, 0, 1, 0), 2.0),
        ],
    )
    def test_from_counts(self, counts, expected):
        assert reward_from_counts(*counts) == expected

    def test_clearing_single_blocker(self):
        ws, config = scene("single_blocker")
        child = simulate_push(config, ws, PushAction(0.05, UP)).next
        assert reward(config, child, ws, 0.05) == 1.0


class TestExtractBestPath:
    """Test how the returned plan is chosen from the tree."""

    def test_shorter_success_wins(self):
        _, config = scene("single_blocker")
        root = SearchNode(config)
        a = _child(root, PushAction(0.05, UP), edge_reward=1.0)
        b = _child(a, PushAction(0.05, DOWN), edge_reward=1.0, status=NodeStatus.TERMINAL_SUCCESS)
        c = _child(root, PushAction(0.08, UP), edge_reward=0.0)
        d = _child(c, PushAction(0.05, UP), edge_reward=0.0)
        _child(d, PushAction(0.05, DOWN), edge_reward=9.0, status=NodeStatus.TERMINAL_SUCCESS)
        plan = extract_best_path(root)
        assert plan.success
        assert plan.actions == (a.action, b.action)

    def test_equal_length_higher_reward_wins(self):
        _, config = scene("single_blocker")
        root = SearchNode(config)
        a = _child(root, PushAction(0.05, UP), edge_reward=1.0)
        _child(a, PushAction(0.05, UP), edge_reward=3.0, status=NodeStatus.TERMINAL_SUCCESS)
        b = _child(root, PushAction(0.05, DOWN), edge_reward=2.0)
        best = _child(b, PushAction(0.05, UP), edge_reward=3.0, status=NodeStatus.TERMINAL_SUCCESS)
        plan = extract_best_path(root)
        assert plan.actions == (b.action, best.action)

    def test_ties_broken_by_action_order(self):
        _, config = scene("single_blocker")
        root = SearchNode(config)
        _child(root, PushAction(0.05, DOWN), edge_reward=1.0, status=NodeStatus.TERMINAL_SUCCESS)
        up = _child(root, PushAction(0.05, UP), edge_reward=1.0, status=NodeStatus.TERMINAL_SUCCESS)
        assert extract_best_path(root).actions == (up.action,)

    def test_failure_nodes_never_returned(self):
        _, config = scene("single_blocker")
        root = SearchNode(config, blocking=1)
        _child(root, PushAction(0.05, UP), status=NodeStatus.FAILURE)
        plan = extract_best_path(root)
        assert not plan.success
        assert plan.actions == ()


class TestPushSearch:
    """Test search mechanics."""

    def test_single_blocker_one_push(self):
        ws, config = scene("single_blocker")
        plan = plan_phim(config, ws)
        assert plan.success
        assert len(plan.actions) == 1
        assert is_goal(plan.final_state(config), ws)

    def test_avoids_wall_press(self):
        ws, config = scene("north_wall_press")
        plan = plan_phim(config, ws)
        assert plan.actions == (PushAction(0.05, DOWN),)

    def test_clear_start_rejected(self):
        ws, config = scene("clear_path")
        with pytest.raises(InvalidStart):
            plan_phim(config, ws)

    def test_exhausted_tree_raises(self):
        ws, config = scene("boxed_in")
        with pytest.raises(NoPlanFound) as exc_info:
            plan_phim(config, ws)
        assert not exc_info.value.plan.success
        assert exc_info.value.code == 1

    @pytest.mark.parametrize("seed", range(4))
    def test_visit_conservation(self, seed):
        """Test every visit of a node is accounted for by its own expansion or a child's."""
        ws, config = generate_scene(SceneSpec(seed=seed))
        search = PushSearch(config, ws, PlannerConfig(max_iterations=40, stabilization_window=1000))
        try:
            search.run()
        except NoPlanFound:
            pass
        assert search.root.visits == search.iterations
        for node in _walk(search.root):
            total = sum(child.visits for child in node.children.values())
            if node is search.root:
                assert node.visits == total
            else:
                assert node.visits == 1 + total
            if node.status is NodeStatus.FAILURE:
                assert node.visits == 1
                assert node.cumulative_reward == 0.0

    @pytest.mark.parametrize("seed", range(3))
    def test_plan_replays(self, seed):
        ws, config = generate_scene(SceneSpec(seed=seed))
        plan = _plan_or_best(config, ws, PlannerConfig(max_iterations=60))
        trace = replay_actions(config, ws, plan.actions)
        assert trace.ok
        assert trace.states == plan.states
        assert len(plan.actions) <= 12

    def test_same_seed_same_plan(self):
        ws, config = generate_scene(SceneSpec(seed=1))
        params = PlannerConfig(max_iterations=60, seed=3)
        assert format_plan(_plan_or_best(config, ws, params)) == format_plan(_plan_or_best(config, ws, params))

    def test_greedy_selection_without_exploration(self):
        """Test that with c = 0 selection follows the best mean reward."""
        ws, config = scene("single_blocker")
        search = PushSearch(config, ws, PlannerConfig(c=0.0))
        root = SearchNode(config, visits=6)
        low = _child(root, PushAction(0.05, UP), visits=3, cumulative=1.0)
        high = _child(root, PushAction(0.05, DOWN), visits=3, cumulative=2.0)
        for node in (low, high):
            node.untried = [PushAction(0.08, UP)]
        search.root = root
        assert search._select() is high

    def test_stops_before_iteration_cap(self):
        """Test a one-push scene settles long before the iteration cap."""
        ws, config = scene("three_lanes")
        search = PushSearch(config, ws, PlannerConfig(max_iterations=400, stabilization_window=5))
        plan = search.run()
        assert plan.success
        assert search.iterations < 400

    @pytest.mark.parametrize("seed", range(3))
    def test_depth_limit(self, seed):
        ws, config = generate_scene(SceneSpec(seed=seed))
        plan = _plan_or_best(config, ws, PlannerConfig(max_depth=2, max_iterations=60))
        assert len(plan.actions) <= 2


class TestPlanText:
    """Test plan formatting and parsing."""

    def _plan(self):
        ws, config = scene("single_blocker")
        outcome = simulate_push(config, ws, PushAction(0.05, UP))
        return Plan((PushAction(0.05, UP),), (outcome.next,), True, PlanStats(7, 1.25, 7))

    def test_format(self):
        assert format_plan(self._plan()) == "push r=0.05 dir=up\nsuccess=true actions=1 iters=7 seconds=-\n"

    def test_format_with_timing(self):
        assert format_plan(self._plan(), timing=True).endswith("seconds=1.250\n")

    def test_parse_all_action_kinds(self):
        text = "push r=0.05 dir=up\npush r=0.035 dir=down obj=2\nshift obj=1 dx=0.1 dy=-0.25\n"
        actions, summary = parse_plan(text + "success=false actions=3 iters=0 seconds=-\n")
        assert actions == [
            PushAction(0.05, UP),
            PushAction(0.035, DOWN, obstacle=2),
            StraightPush(1, 0.1, -0.25),
        ]
        assert summary == {"success": False, "actions": 3, "iters": 0, "seconds": None}

    def test_parse_without_summary(self):
        actions, summary = parse_plan("push r=0.05 dir=down\n")
        assert len(actions) == 1
        assert summary is None

    def test_parse_formatted_plan(self):
        actions, summary = parse_plan(format_plan(self._plan(), timing=True))
        assert actions == [PushAction(0.05, UP)]
        assert summary["seconds"] == 1.25

    @pytest.mark.parametrize(
        "text,line_no",
        [
            ("push r=0.05 dir=left\n", 1),
            ("push r=0.05\n", 1),
            ("push r=abc dir=up\n", 1),
            ("push r=0 dir=up\n", 1),
            ("\nwiggle obj=1\n", 2),
            ("push r=0.05 dir=up\nsuccess=true actions=1 iters=1\npush r=0.05 dir=up\n", 3),
            ("push r=0.05 dir=up\nsuccess=true actions=2 iters=1\n", 2),
            ("shift obj=-1 dx=0 dy=0\n", 1),
            ("push r=0.05 dir=up extra\n", 1),
        ],
    )
    def test_parse_errors(self, text, line_no):
        with pytest.raises(ParseError) as exc_info:
            parse_plan(text)
        assert exc_info.value.line_no == line_no
