# SPDX-License-Identifier: MIT

"""Monte-Carlo tree search over shelf configurations (the ``phim`` planner).

Actions at a node are the persistent clustering radii of the obstacles in its
path region, each combined with both sweep directions. A child is scored once,
when it is expanded, by how many obstacles left the region plus (when some
did) how many clusters the push split apart. There is no rollout stage.
"""

__all__ = [
    "NodeStatus",
    "PlanStats",
    "Plan",
    "SearchNode",
    "PushSearch",
    "check_start",
    "reward",
    "reward_from_counts",
    "ucb",
    "plan_phim",
    "extract_best_path",
    "format_action",
    "format_plan",
    "parse_plan",
]

import logging
import math
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

try:
    from .config import PlannerConfig
    from .exceptions import InvalidStart, NoPlanFound, NoValidRegion, ParseError, TimeBudgetExceeded
    from .geometry import Configuration, Workspace, feasibility_violations
    from .path_region import compute_path_region, count_components, obstacles_in_region
    from .push_sim import (
        Action,
        Motion,
        PushAction,
        PushDirection,
        PushFailure,
        StraightPush,
        available_actions,
        simulate_push,
    )
    from .scene_loader import format_number
    from .records import PlanSummary
except ImportError:
    from config import PlannerConfig
    from exceptions import InvalidStart, NoPlanFound, NoValidRegion, ParseError, TimeBudgetExceeded
    from geometry import Configuration, Workspace, feasibility_violations
    from path_region import compute_path_region, count_components, obstacles_in_region
    from push_sim import (
        Action,
        Motion,
        PushAction,
        PushDirection,
        PushFailure,
        StraightPush,
        available_actions,
        simulate_push,
    )
    from scene_loader import format_number
    from records import PlanSummary

logger = logging.getLogger(__name__)


class NodeStatus(str, Enum):
    OPEN = "open"
    TERMINAL_SUCCESS = "terminal_success"
    FAILURE = "failure"


@dataclass(frozen=True)
class PlanStats:
    """Search effort: iterations (or steps), wall-clock seconds, push simulations."""

    iterations: int = 0
    seconds: float = 0.0
    simulations: int = 0


@dataclass(frozen=True)
class Plan:
    """Actions with the configuration reached after each one.

    ``motions`` holds the gripper motion executed for each action, so the plan
    can be replayed open-loop on a perturbed scene.
    """

    actions: Tuple[Action, ...]
    states: Tuple[Configuration, ...]
    success: bool
    stats: PlanStats = PlanStats()
    motions: Tuple[Motion, ...] = ()
    method: str = "phim"

    def __post_init__(self):
        for name in ("actions", "states", "motions"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))
        if len(self.states) != len(self.actions):
            raise ValueError(f"plan has {len(self.actions)} actions but {len(self.states)} states")
        if self.motions and len(self.motions) != len(self.actions):
            raise ValueError(f"plan has {len(self.actions)} actions but {len(self.motions)} motions")

    def final_state(self, start: Configuration) -> Configuration:
        return self.states[-1] if self.states else start


@dataclass(eq=False)
class SearchNode:
    """One configuration in the search tree.

    ``edge_reward`` is the reward of the action that produced this node;
    ``blocking`` the number of obstacles in its path region.
    """

    config: Configuration
    parent: Optional["SearchNode"] = None
    action: Optional[PushAction] = None
    depth: int = 0
    status: NodeStatus = NodeStatus.OPEN
    visits: int = 0
    cumulative_reward: float = 0.0
    edge_reward: float = 0.0
    blocking: int = 0
    motion: Optional[Motion] = None
    failure: Optional[PushFailure] = None
    children: Dict[PushAction, "SearchNode"] = field(default_factory=dict)
    untried: List[PushAction] = field(default_factory=list)
    exhausted: bool = False

    def path(self) -> List["SearchNode"]:
        """Nodes from the root down to this one."""
        nodes = []
        node: Optional[SearchNode] = self
        while node is not None:
            nodes.append(node)
            node = node.parent
        nodes.reverse()
        return nodes

    def path_reward(self) -> float:
        return math.fsum(n.edge_reward for n in self.path())

    def action_keys(self) -> Tuple[tuple, ...]:
        return tuple(n.action.sort_key() for n in self.path()[1:])

    def refresh_exhausted(self) -> None:
        # Nothing left to expand anywhere below this node.
        self.exhausted = self.status is not NodeStatus.OPEN or (
            not self.untried and all(child.exhausted for child in self.children.values())
        )


def check_start(config: Configuration, ws: Workspace) -> None:
    """Planner precondition: feasible start with a blocked path region.

    Raises:
        InvalidStart: the start is infeasible, has no valid region, or is already a goal.
    """
    problems = feasibility_violations(config, ws)
    if problems:
        raise InvalidStart("; ".join(problems))
    try:
        region = compute_path_region(config, ws)
    except NoValidRegion as e:
        raise InvalidStart(e.message) from e
    if not obstacles_in_region(config, region):
        raise InvalidStart("the path region is already clear")


def reward_from_counts(pi_parent: int, pi_child: int, cc_parent: int, cc_child: int) -> float:
    """``b + t * m``: obstacles removed, plus new clusters when any were removed."""
    removed = pi_parent - pi_child
    gate = 1 if removed > 0 else 0
    split = max(cc_child - cc_parent, 0)
    return float(removed + gate * split)


def reward(parent: Configuration, child: Configuration, ws: Workspace, r_used: float) -> float:
    """Reward of the push that turned ``parent`` into ``child`` at radius ``r_used``.

    Counts are taken over obstacles in each configuration's own path region.
    """
    parent_region = compute_path_region(parent, ws)
    child_region = compute_path_region(child, ws)
    return reward_from_counts(
        len(obstacles_in_region(parent, parent_region)),
        len(obstacles_in_region(child, child_region)),
        count_components(parent, parent_region, r_used),
        count_components(child, child_region, r_used),
    )


def ucb(parent_visits: int, child_visits: int, child_cum_reward: float, c: float) -> float:
    """Mean reward plus ``c * sqrt(2 ln N / n)``."""
    return child_cum_reward / child_visits + c * math.sqrt(2.0 * math.log(parent_visits) / child_visits)


def _walk(root: SearchNode) -> Iterator[SearchNode]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children.values())


def _plan_from(node: SearchNode, stats: PlanStats, method: str) -> Plan:
    path = node.path()[1:]
    return Plan(
        actions=tuple(n.action for n in path),
        states=tuple(n.config for n in path),
        success=node.status is NodeStatus.TERMINAL_SUCCESS,
        stats=stats,
        motions=tuple(n.motion for n in path),
        method=method,
    )


def _success_key(node: SearchNode) -> tuple:
    return (node.depth, -node.path_reward(), node.action_keys())


def extract_best_path(root: SearchNode, stats: Optional[PlanStats] = None, method: str = "phim") -> Plan:
    """Best root-to-leaf path in the tree.

    Success leaves are ranked by fewest actions, then highest path reward,
    then action order. Without a success the non-failure node with the fewest
    blocking obstacles is returned (then shallower, higher reward, action
    order) as an unsuccessful plan.
    """
    stats = stats or PlanStats()
    nodes = list(_walk(root))
    successes = [n for n in nodes if n.status is NodeStatus.TERMINAL_SUCCESS]
    if successes:
        return _plan_from(min(successes, key=_success_key), stats, method)

    candidates = [n for n in nodes if n.status is not NodeStatus.FAILURE]
    best = min(candidates, key=lambda n: (n.blocking,) + _success_key(n))
    return _plan_from(best, stats, method)


class PushSearch:
    """One MCTS run from a start configuration.

    The tree is mutated in place; a search object is not shared across threads.
    """

    def __init__(self, config: Configuration, ws: Workspace, params: PlannerConfig):
        self.ws = ws
        self.params = params
        self.iterations = 0
        self.simulations = 0
        self._rng = random.Random(params.seed)
        self._best: Optional[SearchNode] = None
        self._best_key: Optional[tuple] = None
        self._best_since = 0
        self.root = self._make_node(config, None, None, None, 0.0)

    def _make_node(
        self,
        config: Configuration,
        parent: Optional[SearchNode],
        action: Optional[PushAction],
        motion: Optional[Motion],
        edge_reward: float,
    ) -> SearchNode:
        depth = 0 if parent is None else parent.depth + 1
        region = compute_path_region(config, self.ws)
        blocking = len(obstacles_in_region(config, region))
        node = SearchNode(
            config, parent, action, depth, motion=motion, edge_reward=edge_reward, blocking=blocking
        )
        if blocking == 0:
            node.status = NodeStatus.TERMINAL_SUCCESS
        elif depth < self.params.max_depth:
            node.untried = available_actions(config, self.ws, self.params.nu, self.params.h)
        node.refresh_exhausted()
        return node

    def _select(self) -> SearchNode:
        node = self.root
        while not node.untried:
            live = [child for child in node.children.values() if not child.exhausted]
            node = min(
                live,
                key=lambda child: (
                    -ucb(node.visits, child.visits, child.cumulative_reward, self.params.c),
                    child.action.sort_key(),
                ),
            )
        return node

    def _expand(self, node: SearchNode) -> SearchNode:
        action = node.untried.pop(self._rng.randrange(len(node.untried)))
        self.simulations += 1
        result = simulate_push(node.config, self.ws, action)

        if isinstance(result, PushFailure):
            child = SearchNode(
                node.config, node, action, node.depth + 1, status=NodeStatus.FAILURE, failure=result
            )
            child.refresh_exhausted()
        else:
            gain = reward(node.config, result.next, self.ws, action.radius)
            child = self._make_node(result.next, node, action, result.motion, gain)
            if child.status is NodeStatus.TERMINAL_SUCCESS:
                self._record_success(child)

        node.children[action] = child
        return child

    def _backpropagate(self, child: SearchNode) -> None:
        gain = child.edge_reward
        node: Optional[SearchNode] = child
        while node is not None:
            node.visits += 1
            node.cumulative_reward += gain
            node.refresh_exhausted()
            node = node.parent

    def _record_success(self, node: SearchNode) -> None:
        key = _success_key(node)
        if self._best_key is None or key < self._best_key:
            self._best, self._best_key = node, key
            self._best_since = self.iterations
            logger.debug(f"Iteration {self.iterations}: best plan now {node.depth} actions")

    def run(self) -> Plan:
        """Search until the best plan is stable, the budget runs out, or the tree is exhausted.

        Raises:
            NoPlanFound: no success node was found (best-effort plan attached).
            TimeBudgetExceeded: as above, and the time limit stopped the search.
        """
        params = self.params
        started = time.perf_counter()
        timed_out = False

        while not self.root.exhausted and self.iterations < params.max_iterations:
            if time.perf_counter() - started > params.time_limit_s:
                timed_out = True
                break
            if self._best is not None and self.iterations - self._best_since >= params.stabilization_window:
                break
            self.iterations += 1
            child = self._expand(self._select())
            self._backpropagate(child)

        stats = PlanStats(self.iterations, time.perf_counter() - started, self.simulations)
        plan = extract_best_path(self.root, stats, "phim")
        logger.info(
            f"MCTS finished after {stats.iterations} iterations ({stats.simulations} simulations): "
            f"success={plan.success} actions={len(plan.actions)}"
        )
        if not plan.success:
            if timed_out:
                raise TimeBudgetExceeded(f"no plan within {params.time_limit_s} s", plan)
            reason = "search tree exhausted" if self.root.exhausted else f"{params.max_iterations} iterations used"
            raise NoPlanFound(reason, plan)
        return plan


def plan_phim(config: Configuration, ws: Workspace, params: Optional[PlannerConfig] = None) -> Plan:
    """Plan with persistent-homology-informed MCTS.

    Raises:
        InvalidStart: see :func:`check_start`.
        NoPlanFound: no goal configuration reached.
    """
    params = params or PlannerConfig()
    check_start(config, ws)
    logger.info(f"Starting MCTS (seed={params.seed}, max_iterations={params.max_iterations})")
    return PushSearch(config, ws, params).run()


# Plan text format


def format_action(a: Action) -> str:
    if isinstance(a, StraightPush):
        return f"shift obj={a.obstacle} dx={format_number(a.dx)} dy={format_number(a.dy)}"
    line = f"push r={format_number(a.radius)} dir={a.direction.value}"
    if a.obstacle is not None:
        line += f" obj={a.obstacle}"
    return line


def format_plan(plan: Plan, timing: bool = False) -> str:
    """One line per action, then the summary line.

    ``seconds`` is ``-`` unless ``timing`` is set, so identical plans print
    identical text.
    """
    lines = [format_action(a) for a in plan.actions]
    seconds = f"{plan.stats.seconds:.3f}" if timing else "-"
    lines.append(
        f"success={'true' if plan.success else 'false'} actions={len(plan.actions)} "
        f"iters={plan.stats.iterations} seconds={seconds}"
    )
    return "\n".join(lines) + "\n"


def _fields(tokens: Sequence[str], line_no: int) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise ParseError(f"expected key=value, got {token!r}", line_no)
        if key in fields:
            raise ParseError(f"duplicate field {key!r}", line_no)
        fields[key] = value
    return fields


def _require(fields: Dict[str, str], allowed: Sequence[str], required: Sequence[str], line_no: int) -> None:
    unknown = sorted(set(fields) - set(allowed))
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(unknown)}", line_no)
    missing = [k for k in required if k not in fields]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}", line_no)


def _number(value: str, line_no: int) -> float:
    try:
        number = float(value)
    except ValueError:
        raise ParseError(f"not a number: {value!r}", line_no)
    if not math.isfinite(number):
        raise ParseError(f"non-finite number: {value!r}", line_no)
    return number


def _integer(value: str, line_no: int) -> int:
    try:
        number = int(value)
    except ValueError:
        raise ParseError(f"not an integer: {value!r}", line_no)
    if number < 0:
        raise ParseError(f"negative index: {value!r}", line_no)
    return number


def _boolean(value: str, line_no: int) -> bool:
    if value not in ("true", "false"):
        raise ParseError(f"expected true or false, got {value!r}", line_no)
    return value == "true"


def parse_plan(text: str) -> Tuple[List[Action], Optional[PlanSummary]]:
    """Parse plan text back into actions and the optional summary line.

    Raises:
        ParseError: unknown line, bad field, or an action after the summary.
    """
    actions: List[Action] = []
    summary: Optional[PlanSummary] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if summary is not None:
            raise ParseError("nothing may follow the summary line", line_no)

        tokens = line.split()
        if tokens[0].startswith("success="):
            fields = _fields(tokens, line_no)
            _require(fields, ("success", "actions", "iters", "seconds"), ("success", "actions", "iters"), line_no)
            seconds = fields.get("seconds", "-")
            summary = PlanSummary(
                success=_boolean(fields["success"], line_no),
                actions=_integer(fields["actions"], line_no),
                iters=_integer(fields["iters"], line_no),
                seconds=None if seconds == "-" else _number(seconds, line_no),
            )
            if summary["actions"] != len(actions):
                raise ParseError(f"summary counts {summary['actions']} actions, found {len(actions)}", line_no)
            continue

        keyword, fields = tokens[0], _fields(tokens[1:], line_no)
        if keyword == "push":
            _require(fields, ("r", "dir", "obj"), ("r", "dir"), line_no)
            if fields["dir"] not in (d.value for d in PushDirection):
                raise ParseError(f"direction must be up or down, got {fields['dir']!r}", line_no)
            obstacle = _integer(fields["obj"], line_no) if "obj" in fields else None
            try:
                actions.append(PushAction(_number(fields["r"], line_no), PushDirection(fields["dir"]), obstacle))
            except ValueError as e:
                raise ParseError(str(e), line_no) from e
        elif keyword == "shift":
            _require(fields, ("obj", "dx", "dy"), ("obj", "dx", "dy"), line_no)
            actions.append(
                StraightPush(
                    _integer(fields["obj"], line_no), _number(fields["dx"], line_no), _number(fields["dy"], line_no)
                )
            )
        else:
            raise ParseError(f"unknown plan line {keyword!r}", line_no)

    return actions, summary
