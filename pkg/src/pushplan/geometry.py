# SPDX-License-Identifier: MIT

"""Planar workspace, object and configuration types with feasibility predicates.

Coordinates are metres. ``x`` runs along the shelf depth (``x = 0`` is the
open face the arm enters through), ``y`` across its width (``y = 0`` is the
south wall, ``y = width_y`` the north wall).
"""

__all__ = [
    "EPS_OVERLAP",
    "Point",
    "Rect",
    "Workspace",
    "Disk",
    "GripperPose",
    "Configuration",
    "is_feasible",
    "feasibility_violations",
    "disk_rect_intersect",
    "disks_overlap",
    "disk_within_walls",
    "rotate_about",
]

import math
from dataclasses import dataclass, replace
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

try:
    from .exceptions import GeometryError
except ImportError:
    from exceptions import GeometryError


# Absolute tolerance for separation and wall bounds; float-noise guard only.
EPS_OVERLAP = 1e-9


class Point(NamedTuple):
    """A planar point."""

    x: float
    y: float


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle ``[x_min, x_max] x [y_min, y_max]``."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise GeometryError(f"rectangle has negative extent: {self}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def expanded(self, margin: float) -> "Rect":
        """Grow the rectangle by ``margin`` on every side."""
        return Rect(self.x_min - margin, self.x_max + margin, self.y_min - margin, self.y_max + margin)

    def clipped(self, ws: "Workspace") -> "Rect":
        """Clip to ``[0, depth_x] x [0, width_y]``; collapses to an edge when disjoint."""
        x_min = min(max(self.x_min, 0.0), ws.depth_x)
        x_max = max(min(self.x_max, ws.depth_x), x_min)
        y_min = min(max(self.y_min, 0.0), ws.width_y)
        y_max = max(min(self.y_max, ws.width_y), y_min)
        return Rect(x_min, x_max, y_min, y_max)

    def contains(self, p: Point) -> bool:
        return self.x_min <= p[0] <= self.x_max and self.y_min <= p[1] <= self.y_max

    def corners(self) -> Tuple[Point, Point, Point, Point]:
        """Corners counter-clockwise from ``(x_min, y_min)``."""
        return (
            Point(self.x_min, self.y_min),
            Point(self.x_max, self.y_min),
            Point(self.x_max, self.y_max),
            Point(self.x_min, self.y_max),
        )

    @classmethod
    def around_disks(cls, disks: Iterable["Disk"]) -> "Rect":
        """Tight box over a non-empty collection of disks."""
        disks = list(disks)
        if not disks:
            raise GeometryError("cannot bound an empty set of disks")
        return cls(
            min(d.center.x - d.radius for d in disks),
            max(d.center.x + d.radius for d in disks),
            min(d.center.y - d.radius for d in disks),
            max(d.center.y + d.radius for d in disks),
        )


@dataclass(frozen=True)
class Workspace:
    """Rectangular shelf cross-section.

    ``arm_width`` is the half-width of the path region band; ``gripper_width``
    is the extent of the gripper along the sweep direction.
    """

    depth_x: float
    width_y: float
    arm_width: float
    gripper_width: float

    def __post_init__(self):
        if not self.depth_x > 0:
            raise GeometryError(f"depth_x must be positive, got {self.depth_x}")
        if not self.width_y > 0:
            raise GeometryError(f"width_y must be positive, got {self.width_y}")
        if not 0 < self.gripper_width < self.width_y:
            raise GeometryError(f"gripper_width must lie in (0, width_y), got {self.gripper_width}")
        if not 0 < self.arm_width <= self.width_y:
            raise GeometryError(f"arm_width must lie in (0, width_y], got {self.arm_width}")

    @property
    def bounds(self) -> Rect:
        return Rect(0.0, self.depth_x, 0.0, self.width_y)


@dataclass(frozen=True)
class Disk:
    """Footprint of a cylindrical object."""

    center: Point
    radius: float

    def __post_init__(self):
        if not isinstance(self.center, Point):
            object.__setattr__(self, "center", Point(float(self.center[0]), float(self.center[1])))
        if not self.radius > 0:
            raise GeometryError(f"disk radius must be positive, got {self.radius}")

    def moved_to(self, center: Sequence[float]) -> "Disk":
        return replace(self, center=Point(float(center[0]), float(center[1])))


@dataclass(frozen=True)
class GripperPose:
    """Gripper position and heading (radians, 0 faces into the shelf)."""

    position: Point
    heading: float = 0.0

    def __post_init__(self):
        if not isinstance(self.position, Point):
            object.__setattr__(self, "position", Point(float(self.position[0]), float(self.position[1])))


@dataclass(frozen=True)
class Configuration:
    """Obstacle disks, target disk and gripper pose: the planner state."""

    obstacles: Tuple[Disk, ...]
    target: Disk
    gripper: GripperPose

    def __post_init__(self):
        if not isinstance(self.obstacles, tuple):
            object.__setattr__(self, "obstacles", tuple(self.obstacles))

    def obstacle_centers(self) -> np.ndarray:
        """Obstacle centres as an ``(n, 2)`` array."""
        if not self.obstacles:
            return np.zeros((0, 2))
        return np.array([d.center for d in self.obstacles], dtype=float)

    def obstacle_radii(self) -> np.ndarray:
        return np.array([d.radius for d in self.obstacles], dtype=float)

    def with_obstacle_centers(self, centers: Sequence[Sequence[float]]) -> "Configuration":
        """Copy with every obstacle moved to the matching centre."""
        moved = tuple(d.moved_to(c) for d, c in zip(self.obstacles, centers))
        return replace(self, obstacles=moved)

    def with_target_center(self, center: Sequence[float]) -> "Configuration":
        return replace(self, target=self.target.moved_to(center))

    def all_disks(self) -> Tuple[Disk, ...]:
        """Obstacles followed by the target."""
        return self.obstacles + (self.target,)


def disks_overlap(a: Disk, b: Disk, tolerance: float = EPS_OVERLAP) -> bool:
    """True when the disks interpenetrate by more than ``tolerance``."""
    gap = math.hypot(a.center.x - b.center.x, a.center.y - b.center.y)
    return gap < a.radius + b.radius - tolerance


def disk_within_walls(d: Disk, ws: Workspace, tolerance: float = EPS_OVERLAP) -> bool:
    """Bounds check: ``y`` in ``[r, width_y - r]``, ``x`` in ``[0, depth_x - r]``.

    The open face (``x = 0``) only constrains the centre, so objects may stick
    out of the shelf front.
    """
    x, y = d.center
    return (
        d.radius - tolerance <= y <= ws.width_y - d.radius + tolerance
        and -tolerance <= x <= ws.depth_x - d.radius + tolerance
    )


def feasibility_violations(config: Configuration, ws: Workspace) -> List[str]:
    """Human-readable list of broken configuration invariants (empty when feasible)."""
    problems = []
    disks = config.all_disks()
    labels = [f"obstacle {i}" for i in range(len(config.obstacles))] + ["target"]

    for label, d in zip(labels, disks):
        if not disk_within_walls(d, ws):
            problems.append(f"{label} at ({d.center.x}, {d.center.y}) r={d.radius} is outside the shelf")

    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if disks_overlap(disks[i], disks[j]):
                problems.append(f"{labels[i]} overlaps {labels[j]}")

    gx, gy = config.gripper.position
    if not (0.0 <= gx <= ws.depth_x and 0.0 <= gy <= ws.width_y):
        problems.append(f"gripper at ({gx}, {gy}) is outside the workspace")

    return problems


def is_feasible(config: Configuration, ws: Workspace) -> bool:
    """True iff no disks overlap, every disk is inside the shelf and the gripper is in the workspace."""
    return not feasibility_violations(config, ws)


def disk_rect_intersect(d: Disk, rect: Rect) -> bool:
    """Closed disk / closed rectangle intersection by the closest-point test."""
    cx = min(max(d.center.x, rect.x_min), rect.x_max)
    cy = min(max(d.center.y, rect.y_min), rect.y_max)
    dx = d.center.x - cx
    dy = d.center.y - cy
    return dx * dx + dy * dy <= d.radius * d.radius


def rotate_about(p: Sequence[float], pivot: Sequence[float], angle: float) -> Point:
    """Rotate ``p`` counter-clockwise about ``pivot`` by ``angle`` radians."""
    if angle == 0.0:
        return Point(float(p[0]), float(p[1]))
    c = math.cos(angle)
    s = math.sin(angle)
    dx = p[0] - pivot[0]
    dy = p[1] - pivot[1]
    return Point(pivot[0] + c * dx - s * dy, pivot[1] + s * dx + c * dy)
