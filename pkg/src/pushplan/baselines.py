# SPDX-License-Identifier: MIT

"""Comparison planners sharing the push simulator and path-region machinery.

- ``phia``: greedy, always the smallest persistent radius.
- ``phis``: breadth-first search over every persistent radius and direction.
- ``ooa``: each obstacle of the initial path region pushed on its own.
- ``grtc``: each obstacle of the initial path region pushed in a straight line
  to a random free spot outside the region.
"""

__all__ = [
    "GOAL_SAMPLES",
    "GOAL_RETRIES",
    "plan_phia",
    "plan_phis",
    "plan_ooa",
    "plan_grtc",
]

import logging
import math
import time
from collections import deque
from typing import Deque, List, Optional, Set, Tuple

import numpy as np

try:
    from .config import PlannerConfig
    from .exceptions import NoPlanFound, TimeBudgetExceeded
    from .geometry import Configuration, Point, Workspace, disk_rect_intersect, disk_within_walls, disks_overlap
    from .mcts import Plan, PlanStats, check_start
    from .path_region import PathRegion, compute_path_region, obstacles_in_region
    from .push_sim import (
        Action,
        Motion,
        PushAction,
        PushDirection,
        PushFailure,
        PushOutcome,
        StraightPush,
        available_actions,
        execute_straight_push,
        is_goal,
        simulate_push,
        sweep_cluster,
    )
except ImportError:
    from config import PlannerConfig
    from exceptions import NoPlanFound, TimeBudgetExceeded
    from geometry import Configuration, Point, Workspace, disk_rect_intersect, disk_within_walls, disks_overlap
    from mcts import Plan, PlanStats, check_start
    from path_region import PathRegion, compute_path_region, obstacles_in_region
    from push_sim import (
        Action,
        Motion,
        PushAction,
        PushDirection,
        PushFailure,
        PushOutcome,
        StraightPush,
        available_actions,
        execute_straight_push,
        is_goal,
        simulate_push,
        sweep_cluster,
    )

logger = logging.getLogger(__name__)

# Random goal placements tried per straight push.
GOAL_SAMPLES = 50
# Straight-push attempts per obstacle.
GOAL_RETRIES = 5


class _Trace:
    """Actions, states and motions accumulated by a sequential planner."""

    def __init__(self, method: str):
        self.method = method
        self.actions: List[Action] = []
        self.states: List[Configuration] = []
        self.motions: List[Motion] = []
        self.steps = 0
        self.simulations = 0
        self.started = time.perf_counter()

    def push(self, action: Action, outcome: PushOutcome) -> None:
        self.actions.append(action)
        self.states.append(outcome.next)
        self.motions.append(outcome.motion)

    def elapsed(self) -> float:
        return time.perf_counter() - self.started

    def plan(self, success: bool) -> Plan:
        stats = PlanStats(self.steps, self.elapsed(), self.simulations)
        return Plan(tuple(self.actions), tuple(self.states), success, stats, tuple(self.motions), self.method)

    def check_time(self, params: PlannerConfig) -> None:
        if self.elapsed() > params.time_limit_s:
            raise TimeBudgetExceeded(f"{self.method} stopped after {params.time_limit_s} s", self.plan(False))


def plan_phia(config: Configuration, ws: Workspace, params: Optional[PlannerConfig] = None) -> Plan:
    """Greedy planner: smallest persistent radius, ``up`` before ``down``.

    Raises:
        InvalidStart: infeasible or already solved start.
        NoPlanFound: both directions fail at some step, or ``max_depth`` is reached.
    """
    params = params or PlannerConfig()
    check_start(config, ws)
    trace = _Trace("phia")
    current = config

    while not is_goal(current, ws):
        if trace.steps >= params.max_depth:
            raise NoPlanFound(f"goal not reached within {params.max_depth} pushes", trace.plan(False))
        trace.check_time(params)
        trace.steps += 1

        radius = min(a.radius for a in available_actions(current, ws, params.nu, params.h))
        for direction in (PushDirection.UP, PushDirection.DOWN):
            action = PushAction(radius, direction)
            trace.simulations += 1
            result = simulate_push(current, ws, action)
            if isinstance(result, PushOutcome):
                trace.push(action, result)
                current = result.next
                break
            logger.debug(f"phia step {trace.steps}: {direction.value} failed with {result.kind.value}")
        else:
            raise NoPlanFound(f"both directions fail at step {trace.steps} (r={radius})", trace.plan(False))

    logger.info(f"phia reached the goal in {len(trace.actions)} pushes")
    return trace.plan(True)


def plan_phis(config: Configuration, ws: Workspace, params: Optional[PlannerConfig] = None) -> Plan:
    """Breadth-first search over persistent radii and both directions.

    Children are generated in action order and configurations already seen
    are skipped, so the first goal found is the shallowest and, among equally
    short plans, the first in action order.

    Raises:
        InvalidStart: infeasible or already solved start.
        NoPlanFound: no goal within ``max_depth`` pushes.
        TimeBudgetExceeded: the time limit ran out first.
    """
    params = params or PlannerConfig()
    check_start(config, ws)
    started = time.perf_counter()
    simulations = 0
    expanded = 0

    Path = Tuple[Tuple[PushAction, PushOutcome], ...]
    frontier: Deque[Tuple[Configuration, Path]] = deque([(config, ())])
    seen: Set[Configuration] = {config}

    def to_plan(path: Path, success: bool) -> Plan:
        stats = PlanStats(expanded, time.perf_counter() - started, simulations)
        return Plan(
            tuple(a for a, _ in path),
            tuple(o.next for _, o in path),
            success,
            stats,
            tuple(o.motion for _, o in path),
            "phis",
        )

    deepest: Path = ()
    while frontier:
        if time.perf_counter() - started > params.time_limit_s:
            raise TimeBudgetExceeded(f"phis stopped after {params.time_limit_s} s", to_plan(deepest, False))
        current, path = frontier.popleft()
        if len(path) >= params.max_depth:
            continue
        expanded += 1

        for action in available_actions(current, ws, params.nu, params.h):
            simulations += 1
            result = simulate_push(current, ws, action)
            if isinstance(result, PushFailure) or result.next in seen:
                continue
            seen.add(result.next)
            extended = path + ((action, result),)
            if is_goal(result.next, ws):
                logger.info(f"phis found a {len(extended)}-push plan after {expanded} expansions")
                return to_plan(extended, True)
            deepest = extended
            frontier.append((result.next, extended))

    raise NoPlanFound(f"no goal within {params.max_depth} pushes", to_plan(deepest, False))


def _band_midline(region: PathRegion) -> float:
    # The band is centred on the target, which is also the frame pivot.
    return region.pivot.y


def plan_ooa(config: Configuration, ws: Workspace, params: Optional[PlannerConfig] = None) -> Plan:
    """Push the obstacles of the initial path region one at a time.

    Obstacles are taken by increasing distance to the gripper. Each goes to
    the nearer side of the band (``up`` above the midline, else ``down``),
    trying the other side when that fails. The initial region is used
    throughout, so chain contacts can leave the final state short of the goal.

    Raises:
        InvalidStart: infeasible or already solved start.
        NoPlanFound: an obstacle cannot be pushed either way, or the goal is not reached.
    """
    params = params or PlannerConfig()
    check_start(config, ws)
    trace = _Trace("ooa")
    region = compute_path_region(config, ws)
    gripper = config.gripper.position
    midline = _band_midline(region)

    def gripper_distance(i: int) -> Tuple[float, int]:
        c = config.obstacles[i].center
        return (math.hypot(c.x - gripper.x, c.y - gripper.y), i)

    current = config
    for i in sorted(obstacles_in_region(config, region), key=gripper_distance):
        trace.check_time(params)
        trace.steps += 1
        frame_y = region.disk_in_frame(current.obstacles[i]).center.y
        first = PushDirection.UP if frame_y > midline else PushDirection.DOWN
        second = PushDirection.DOWN if first is PushDirection.UP else PushDirection.UP
        for direction in (first, second):
            trace.simulations += 1
            result = sweep_cluster(current, ws, region, (i,), direction)
            if isinstance(result, PushOutcome):
                trace.push(PushAction(current.obstacles[i].radius, direction, obstacle=i), result)
                current = result.next
                break
        else:
            raise NoPlanFound(f"obstacle {i} cannot be pushed out of the region", trace.plan(False))

    if not is_goal(current, ws):
        remaining = sorted(obstacles_in_region(current, compute_path_region(current, ws)))
        raise NoPlanFound(f"obstacles {remaining} still block the path region", trace.plan(False))
    logger.info(f"ooa cleared the region with {len(trace.actions)} pushes")
    return trace.plan(True)


def _sample_goal(
    config: Configuration, ws: Workspace, region: PathRegion, index: int, rng: np.random.Generator
) -> Optional[Point]:
    disk = config.obstacles[index]
    others = [d for k, d in enumerate(config.all_disks()) if k != index]
    for _ in range(GOAL_SAMPLES):
        candidate = disk.moved_to(
            (rng.uniform(disk.radius, ws.depth_x - disk.radius), rng.uniform(disk.radius, ws.width_y - disk.radius))
        )
        if (
            disk_within_walls(candidate, ws)
            and not disk_rect_intersect(region.disk_in_frame(candidate), region.rect)
            and not any(disks_overlap(candidate, other) for other in others)
        ):
            return candidate.center
    return None


def plan_grtc(config: Configuration, ws: Workspace, params: Optional[PlannerConfig] = None) -> Plan:
    """Straight-line pushes of each initially blocking obstacle to a random free goal.

    Obstacles are visited in a seeded random order; each gets up to
    ``GOAL_RETRIES`` attempts of ``GOAL_SAMPLES`` goal samples.

    Raises:
        InvalidStart: infeasible or already solved start.
        NoPlanFound: an obstacle ran out of attempts, or the goal is not reached.
        TimeBudgetExceeded: the time limit ran out first.
    """
    params = params or PlannerConfig()
    check_start(config, ws)
    trace = _Trace("grtc")
    rng = np.random.default_rng(params.seed)
    region = compute_path_region(config, ws)
    order = [int(i) for i in rng.permutation(sorted(obstacles_in_region(config, region)))]

    current = config
    for i in order:
        trace.steps += 1
        for attempt in range(GOAL_RETRIES):
            trace.check_time(params)
            goal = _sample_goal(current, ws, region, i, rng)
            if goal is None:
                logger.debug(f"grtc: no free goal for obstacle {i} (attempt {attempt + 1})")
                continue
            origin = current.obstacles[i].center
            push = StraightPush(i, goal.x - origin.x, goal.y - origin.y)
            trace.simulations += 1
            result = execute_straight_push(current, ws, push)
            if isinstance(result, PushOutcome):
                trace.push(push, result)
                current = result.next
                break
            logger.debug(f"grtc: push of obstacle {i} failed with {result.kind.value} (attempt {attempt + 1})")
        else:
            raise NoPlanFound(f"obstacle {i} found no reachable goal in {GOAL_RETRIES} attempts", trace.plan(False))

    if not is_goal(current, ws):
        raise NoPlanFound("chain contacts left obstacles in the path region", trace.plan(False))
    logger.info(f"grtc cleared the region with {len(trace.actions)} pushes")
    return trace.plan(True)
