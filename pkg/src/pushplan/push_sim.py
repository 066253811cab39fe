# SPDX-License-Identifier: MIT

"""Deterministic quasi-static push simulation.

A push is a rectangular gripper sweep through the path region along ``+y``
(``up``) or ``-y`` (``down``) of the region frame. Disks hit by the gripper
end up ``CLEARANCE`` ahead of its front; disks hit by moving disks are
translated along the same direction just far enough to separate. Pushes that
would force a disk through a wall, start inside an object, or move the target
fail and leave the configuration untouched.
"""

__all__ = [
    "CLEARANCE",
    "MAX_NOISE_TRIES",
    "PushDirection",
    "FailureKind",
    "PushAction",
    "StraightPush",
    "Sweep",
    "Motion",
    "PushOutcome",
    "PushFailure",
    "PushResult",
    "ReplayTrace",
    "simulate_push",
    "sweep_cluster",
    "execute_sweep",
    "execute_straight_push",
    "straight_push_sweep",
    "is_goal",
    "apply_noise",
    "available_actions",
    "replay_actions",
    "replay_motions",
]

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from .exceptions import EmptyRegion, NoisyInfeasible, NoValidRegion
    from .geometry import (
        EPS_OVERLAP,
        Configuration,
        Disk,
        Point,
        Rect,
        Workspace,
        disk_rect_intersect,
        disk_within_walls,
        disks_overlap,
        rotate_about,
    )
    from .homology import persistence_diagram, persistent_radii
    from .path_region import PathRegion, closest_component, compute_path_region, obstacles_in_region
except ImportError:
    from exceptions import EmptyRegion, NoisyInfeasible, NoValidRegion
    from geometry import (
        EPS_OVERLAP,
        Configuration,
        Disk,
        Point,
        Rect,
        Workspace,
        disk_rect_intersect,
        disk_within_walls,
        disks_overlap,
        rotate_about,
    )
    from homology import persistence_diagram, persistent_radii
    from path_region import PathRegion, closest_component, compute_path_region, obstacles_in_region

logger = logging.getLogger(__name__)

# Gap between the gripper front and the disks it pushes (m).
CLEARANCE = 0.01

# Rejection budget per object for noise injection.
MAX_NOISE_TRIES = 100


class PushDirection(str, Enum):
    """Sweep direction in the region frame."""

    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> int:
        return 1 if self is PushDirection.UP else -1


class FailureKind(Enum):
    """Why a push was rejected."""

    WALL_PRESS = "WallPress"
    ENTRY_BLOCKED = "EntryBlocked"
    TARGET_DISTURBED = "TargetDisturbed"
    EMPTY_REGION = "EmptyRegion"


@dataclass(frozen=True)
class PushAction:
    """Sweep the closest cluster at ``radius`` in ``direction``.

    With ``obstacle`` set the cluster is replaced by that single obstacle.
    """

    radius: float
    direction: PushDirection
    obstacle: Optional[int] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"push radius must be positive, got {self.radius}")
        if not isinstance(self.direction, PushDirection):
            object.__setattr__(self, "direction", PushDirection(self.direction))

    def sort_key(self) -> tuple:
        direction = 0 if self.direction is PushDirection.UP else 1
        return (0, self.radius, direction, -1 if self.obstacle is None else self.obstacle)


@dataclass(frozen=True)
class StraightPush:
    """Translate one obstacle by ``(dx, dy)`` in the world frame."""

    obstacle: int
    dx: float
    dy: float

    def sort_key(self) -> tuple:
        return (1, self.obstacle, self.dx, self.dy)


@dataclass(frozen=True)
class Sweep:
    """Gripper motion of one push, in the frame rotated by ``-phi`` about ``pivot``.

    ``start_y`` is the gripper centre line at the start; ``end_front`` is where
    its leading edge stops.
    """

    phi: float
    pivot: Point
    corridor: Tuple[float, float]
    start_y: float
    end_front: float
    direction: PushDirection
    gripper_width: float

    @property
    def start_front(self) -> float:
        return self.start_y + self.direction.sign * self.gripper_width / 2.0

    def start_rect(self) -> Rect:
        half = self.gripper_width / 2.0
        return Rect(self.corridor[0], self.corridor[1], self.start_y - half, self.start_y + half)

    def swept_rect(self) -> Rect:
        half = self.gripper_width / 2.0
        if self.direction is PushDirection.UP:
            return Rect(self.corridor[0], self.corridor[1], self.start_y - half, self.end_front)
        return Rect(self.corridor[0], self.corridor[1], self.end_front, self.start_y + half)

    def to_frame(self, p: Sequence[float]) -> Point:
        return rotate_about(p, self.pivot, -self.phi)

    def from_frame(self, p: Sequence[float]) -> Point:
        return rotate_about(p, self.pivot, self.phi)


Action = Union[PushAction, StraightPush]
Motion = Union[Sweep, StraightPush]


@dataclass(frozen=True)
class PushOutcome:
    """Successful push: the next configuration and what moved."""

    next: Configuration
    moved_indices: FrozenSet[int]
    cleared_component: bool
    motion: Motion
    passes: int


@dataclass(frozen=True)
class PushFailure:
    kind: FailureKind
    detail: str


PushResult = Union[PushOutcome, PushFailure]


@dataclass(frozen=True)
class ReplayTrace:
    """States visited while replaying a plan; ``failure`` is set when a step was rejected."""

    states: Tuple[Configuration, ...]
    motions: Tuple[Motion, ...]
    failure: Optional[PushFailure] = None
    failed_at: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def final(self, start: Configuration) -> Configuration:
        return self.states[-1] if self.states else start


def _resolve_chain(
    centers: np.ndarray,
    radii: np.ndarray,
    direction: np.ndarray,
    required: Dict[int, float],
    max_passes: int,
) -> Tuple[np.ndarray, int]:
    """Translate disks along ``direction`` until nothing overlaps.

    ``required`` gives minimum positions (projections onto ``direction``) for
    disks pushed directly. Returns per-disk shifts along ``direction`` (all
    ``>= 0``) and the number of resolution passes that moved something.

    Raises:
        RuntimeError: more than ``max_passes`` passes were needed.
    """
    count = len(centers)
    u = direction / np.linalg.norm(direction)
    perp = np.array([-u[1], u[0]])
    proj = centers @ u
    lateral = centers @ perp
    position = proj.copy()

    # Disks are visited from the back of the sweep to the front, so each one
    # sees every disk that could run into it before its own position is fixed.
    moved: List[int] = []
    for j in sorted(range(count), key=lambda k: (proj[k], k)):
        goal = max(proj[j], required.get(j, -math.inf))
        for i in moved:
            reach = radii[i] + radii[j]
            offset = abs(lateral[j] - lateral[i])
            if offset < reach:
                goal = max(goal, position[i] + math.sqrt(reach * reach - offset * offset))
        if goal > proj[j]:
            position[j] = goal
            moved.append(j)

    passes = 1 if moved else 0
    while True:
        changed = False
        for a in range(count):
            for b in range(a + 1, count):
                reach = radii[a] + radii[b]
                offset = abs(lateral[a] - lateral[b])
                if offset >= reach:
                    continue
                along = math.sqrt(reach * reach - offset * offset)
                back, front = (a, b) if (position[a], a) < (position[b], b) else (b, a)
                if position[front] - position[back] < along - EPS_OVERLAP:
                    position[front] = position[back] + along
                    changed = True
        if not changed:
            break
        passes += 1
        if passes > max_passes:
            raise RuntimeError(f"push resolution did not settle within {max_passes} passes")

    return position - proj, passes


def _world_walls_hold(corners: Iterable[Point], ws: Workspace) -> bool:
    return all(
        -EPS_OVERLAP <= c.y <= ws.width_y + EPS_OVERLAP and c.x <= ws.depth_x + EPS_OVERLAP for c in corners
    )


def _finish(
    config: Configuration,
    ws: Workspace,
    shifts: np.ndarray,
    new_centers: List[Point],
    passes: int,
    motion: Motion,
    members: FrozenSet[int],
    region: Optional[PathRegion],
) -> PushResult:
    n = len(config.obstacles)
    moved = frozenset(i for i in range(n) if shifts[i] > 0.0)

    for i in sorted(moved):
        d = config.obstacles[i].moved_to(new_centers[i])
        if not disk_within_walls(d, ws):
            return PushFailure(
                FailureKind.WALL_PRESS,
                f"obstacle {i} would be pressed to ({d.center.x:.4f}, {d.center.y:.4f}) beyond the walls",
            )

    if shifts[n] > 0.0:
        return PushFailure(FailureKind.TARGET_DISTURBED, "the push would move the target")

    next_config = config.with_obstacle_centers(new_centers[:n])
    cleared = True
    if region is not None:
        cleared = not any(
            disk_rect_intersect(region.disk_in_frame(next_config.obstacles[i]), region.rect) for i in members
        )
    return PushOutcome(next_config, moved, cleared, motion, passes)


def _run_sweep(
    config: Configuration,
    ws: Workspace,
    sweep: Sweep,
    members: FrozenSet[int] = frozenset(),
    region: Optional[PathRegion] = None,
) -> PushResult:
    disks = config.all_disks()
    n = len(config.obstacles)
    frame = [d.moved_to(sweep.to_frame(d.center)) if sweep.phi != 0.0 else d for d in disks]

    start = sweep.start_rect()
    if not _world_walls_hold((sweep.from_frame(c) for c in start.corners()), ws):
        return PushFailure(FailureKind.ENTRY_BLOCKED, "gripper start pose crosses a wall")
    for i, d in enumerate(frame):
        if disk_rect_intersect(d, start):
            what = "the target" if i == n else f"obstacle {i}"
            return PushFailure(FailureKind.ENTRY_BLOCKED, f"gripper start pose collides with {what}")

    sign = sweep.direction.sign
    swept = sweep.swept_rect()
    required = {
        i: sign * sweep.end_front + CLEARANCE + d.radius for i, d in enumerate(frame) if disk_rect_intersect(d, swept)
    }

    centers = np.array([d.center for d in frame], dtype=float)
    radii = np.array([d.radius for d in frame], dtype=float)
    shifts, passes = _resolve_chain(centers, radii, np.array([0.0, float(sign)]), required, max(n, 1))

    new_centers = []
    for i, d in enumerate(disks):
        if shifts[i] > 0.0:
            moved = Point(frame[i].center.x, frame[i].center.y + sign * shifts[i])
            new_centers.append(sweep.from_frame(moved) if sweep.phi != 0.0 else moved)
        else:
            new_centers.append(d.center)

    return _finish(config, ws, shifts, new_centers, passes, sweep, members, region)


def sweep_cluster(
    config: Configuration,
    ws: Workspace,
    region: PathRegion,
    members: Iterable[int],
    direction: PushDirection,
) -> PushResult:
    """Sweep the given obstacles out of ``region`` in ``direction``.

    The gripper starts just outside the members' box (expanded by
    ``CLEARANCE``) on the trailing side and stops once its front reaches the
    far edge of the region rectangle.
    """
    members = frozenset(members)
    if not members:
        return PushFailure(FailureKind.EMPTY_REGION, "no obstacle selected")

    box = Rect.around_disks(region.disk_in_frame(config.obstacles[i]) for i in members).expanded(CLEARANCE)
    h = ws.gripper_width
    if direction is PushDirection.UP:
        start_y = box.y_min - h / 2.0 - CLEARANCE
        end_front = max(region.rect.y_max, start_y + h / 2.0)
    else:
        start_y = box.y_max + h / 2.0 + CLEARANCE
        end_front = min(region.rect.y_min, start_y - h / 2.0)

    sweep = Sweep(region.phi, region.pivot, (box.x_min, box.x_max), start_y, end_front, direction, h)
    return _run_sweep(config, ws, sweep, members, region)


def simulate_push(config: Configuration, ws: Workspace, a: PushAction) -> PushResult:
    """Run one push action on ``config``.

    Returns a :class:`PushOutcome` on success or a :class:`PushFailure`
    (``WallPress``, ``EntryBlocked``, ``TargetDisturbed``, ``EmptyRegion``).
    """
    region = compute_path_region(config, ws)
    if a.obstacle is not None:
        members = frozenset((a.obstacle,))
    else:
        try:
            members = closest_component(config, region, a.radius).member_indices
        except EmptyRegion as e:
            return PushFailure(FailureKind.EMPTY_REGION, e.message)

    result = sweep_cluster(config, ws, region, members, a.direction)
    if isinstance(result, PushFailure):
        logger.debug(f"Push r={a.radius} dir={a.direction.value} failed: {result.kind.value} ({result.detail})")
    return result


def execute_sweep(config: Configuration, ws: Workspace, sweep: Sweep) -> PushResult:
    """Replay a recorded gripper sweep on ``config`` (which may differ from the planned one)."""
    return _run_sweep(config, ws, sweep)


def straight_push_sweep(config: Configuration, ws: Workspace, push: StraightPush) -> Sweep:
    """Gripper sweep that carries one obstacle by ``(dx, dy)``.

    The frame is rotated so the push runs along ``+y``; the gripper is as wide
    as the obstacle plus ``CLEARANCE`` on each side and starts ``CLEARANCE``
    behind it.
    """
    d = config.obstacles[push.obstacle]
    distance = math.hypot(push.dx, push.dy)
    # Frame +y maps to (-sin phi, cos phi) in the world.
    phi = math.atan2(-push.dx, push.dy)
    reach = d.radius + CLEARANCE
    h = ws.gripper_width
    c = d.center
    return Sweep(
        phi, c, (c.x - reach, c.x + reach), c.y - reach - h / 2.0, c.y + distance - reach, PushDirection.UP, h
    )


def execute_straight_push(config: Configuration, ws: Workspace, push: StraightPush) -> PushResult:
    """Carry one obstacle in a straight line with the gripper, resolving chain contacts along the way.

    The gripper body is modelled as for cluster sweeps, so the push is
    rejected when its start pose collides or crosses a wall.
    """
    if push.dx == 0.0 and push.dy == 0.0:
        return PushOutcome(config, frozenset(), True, push, 0)
    return _run_sweep(config, ws, straight_push_sweep(config, ws, push))


def is_goal(config: Configuration, ws: Workspace) -> bool:
    """True when no obstacle touches the path region."""
    try:
        region = compute_path_region(config, ws)
    except NoValidRegion as e:
        logger.debug(f"Goal check without a valid region: {e.message}")
        return False
    return not obstacles_in_region(config, region)


def apply_noise(
    config: Configuration, ws: Workspace, bound: float, seed: Union[int, Sequence[int]]
) -> Configuration:
    """Displace every obstacle and the target by a uniform sample from a disk of radius ``bound``.

    Objects are perturbed in order; each sample is redrawn (up to
    ``MAX_NOISE_TRIES`` times) until the object is inside the shelf and clear
    of every other object.

    Raises:
        NoisyInfeasible: an object found no feasible sample.
    """
    if bound < 0:
        raise ValueError(f"noise bound must be non-negative, got {bound}")
    if bound == 0:
        return config

    rng = np.random.default_rng(seed)
    disks: List[Disk] = list(config.all_disks())
    for k, original in enumerate(disks):
        for _ in range(MAX_NOISE_TRIES):
            rho = bound * math.sqrt(rng.random())
            theta = 2.0 * math.pi * rng.random()
            candidate = original.moved_to(
                (original.center.x + rho * math.cos(theta), original.center.y + rho * math.sin(theta))
            )
            if disk_within_walls(candidate, ws) and not any(
                disks_overlap(candidate, other) for j, other in enumerate(disks) if j != k
            ):
                disks[k] = candidate
                break
        else:
            what = "target" if k == len(disks) - 1 else f"obstacle {k}"
            raise NoisyInfeasible(f"no feasible perturbation of the {what} within {MAX_NOISE_TRIES} samples")

    return Configuration(tuple(disks[:-1]), disks[-1], config.gripper)


def available_actions(config: Configuration, ws: Workspace, nu: float, h: float) -> List[PushAction]:
    """Persistent radii of the in-region obstacles crossed with ``{up, down}``.

    Raises:
        EmptyRegion: the path region is already clear.
    """
    region = compute_path_region(config, ws)
    inside = sorted(obstacles_in_region(config, region))
    if not inside:
        raise EmptyRegion()
    centers = [region.disk_in_frame(config.obstacles[i]).center for i in inside]
    radii = persistent_radii(persistence_diagram(centers), nu, h)
    return [PushAction(r, d) for r in radii for d in (PushDirection.UP, PushDirection.DOWN)]


def replay_actions(config: Configuration, ws: Workspace, actions: Sequence[Action]) -> ReplayTrace:
    """Re-derive and run every action from ``config``.

    Singleton sweeps (``obstacle`` set) use the path region of ``config``
    throughout, as one-at-a-time plans are defined on the initial region.
    """
    region = compute_path_region(config, ws)
    current = config
    states: List[Configuration] = []
    motions: List[Motion] = []
    for step, action in enumerate(actions):
        if isinstance(action, StraightPush):
            result = execute_straight_push(current, ws, action)
        elif action.obstacle is not None:
            result = sweep_cluster(current, ws, region, (action.obstacle,), action.direction)
        else:
            result = simulate_push(current, ws, action)
        if isinstance(result, PushFailure):
            return ReplayTrace(tuple(states), tuple(motions), result, step)
        current = result.next
        states.append(current)
        motions.append(result.motion)
    return ReplayTrace(tuple(states), tuple(motions))


def replay_motions(config: Configuration, ws: Workspace, motions: Sequence[Motion]) -> ReplayTrace:
    """Execute recorded arm motions open-loop on ``config``."""
    current = config
    states: List[Configuration] = []
    for step, motion in enumerate(motions):
        if isinstance(motion, StraightPush):
            result = execute_straight_push(current, ws, motion)
        else:
            result = execute_sweep(current, ws, motion)
        if isinstance(result, PushFailure):
            return ReplayTrace(tuple(states), tuple(motions[:step]), result, step)
        current = result.next
        states.append(current)
    return ReplayTrace(tuple(states), tuple(motions))
