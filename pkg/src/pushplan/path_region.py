# SPDX-License-Identifier: MIT

"""The path region the arm must clear, and the cluster of obstacles to push next."""

__all__ = [
    "INCIDENCE_STEP_DEG",
    "INCIDENCE_MAX_DEG",
    "PathRegion",
    "ClusterSelection",
    "incidence_angles",
    "compute_path_region",
    "obstacles_in_region",
    "closest_component",
    "count_components",
]

import logging
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Sequence

try:
    from .exceptions import EmptyRegion, NoValidRegion
    from .geometry import Configuration, Disk, Point, Rect, Workspace, disk_rect_intersect, rotate_about
    from .homology import components_at
except ImportError:
    from exceptions import EmptyRegion, NoValidRegion
    from geometry import Configuration, Disk, Point, Rect, Workspace, disk_rect_intersect, rotate_about
    from homology import components_at

logger = logging.getLogger(__name__)

INCIDENCE_STEP_DEG = 5
INCIDENCE_MAX_DEG = 45
_WALL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PathRegion:
    """Rectangle the arm sweeps through, expressed in a frame rotated by ``-phi`` about ``pivot``.

    Unrotated rectangles are clipped to the shelf; rotated ones are not.
    """

    rect: Rect
    phi: float
    pivot: Point

    def to_frame(self, p: Sequence[float]) -> Point:
        """World point -> region frame."""
        return rotate_about(p, self.pivot, -self.phi)

    def from_frame(self, p: Sequence[float]) -> Point:
        """Region-frame point -> world."""
        return rotate_about(p, self.pivot, self.phi)

    def disk_in_frame(self, d: Disk) -> Disk:
        if self.phi == 0.0:
            return d
        return d.moved_to(self.to_frame(d.center))

    def world_polygon(self) -> List[Point]:
        """Corners of ``rect`` mapped back to world coordinates."""
        return [self.from_frame(c) for c in self.rect.corners()]


@dataclass(frozen=True)
class ClusterSelection:
    """The closest in-region cluster at ``radius_used`` and its box (region frame)."""

    member_indices: FrozenSet[int]
    bounding_rect: Rect
    radius_used: float


def incidence_angles() -> Iterator[float]:
    """0, then +5°, -5°, +10°, -10°, ... up to ±45°, in radians."""
    yield 0.0
    for deg in range(INCIDENCE_STEP_DEG, INCIDENCE_MAX_DEG + 1, INCIDENCE_STEP_DEG):
        yield math.radians(deg)
        yield -math.radians(deg)


def _mouth_fits(mouth_x: float, band: Rect, phi: float, pivot: Point, ws: Workspace) -> bool:
    # The gripper-side edge of the band and its centreline point must sit between S and N.
    centre_y = (band.y_min + band.y_max) / 2.0
    for y in (band.y_min, centre_y, band.y_max):
        world = rotate_about((mouth_x, y), pivot, phi)
        if not -_WALL_TOLERANCE <= world.y <= ws.width_y + _WALL_TOLERANCE:
            return False
    return True


def compute_path_region(config: Configuration, ws: Workspace) -> PathRegion:
    """Band of half-width ``arm_width`` from the gripper to the target.

    The unrotated band is used when it fits between the walls; otherwise the
    smallest-magnitude incidence angle from the grid whose band mouth fits.

    Raises:
        NoValidRegion: no angle in the grid fits.
    """
    target = config.target.center
    gripper = config.gripper.position
    band_y = (target.y - ws.arm_width, target.y + ws.arm_width)

    for phi in incidence_angles():
        g = rotate_about(gripper, target, -phi)
        band = Rect(min(g.x, target.x), max(g.x, target.x), band_y[0], band_y[1])
        mouth_x = g.x
        if _mouth_fits(mouth_x, band, phi, target, ws):
            if phi == 0.0:
                return PathRegion(band.clipped(ws), phi, target)
            # Shelf walls are not axis-aligned in a rotated frame; the band stays whole.
            logger.debug(f"Path region rotated by {math.degrees(phi):.0f} degrees")
            return PathRegion(band, phi, target)

    raise NoValidRegion(
        f"target at ({target.x}, {target.y}) admits no band of half-width {ws.arm_width} "
        f"within ±{INCIDENCE_MAX_DEG} degrees"
    )


def obstacles_in_region(config: Configuration, region: PathRegion) -> FrozenSet[int]:
    """Indices of obstacles whose disks touch the region rectangle (target excluded)."""
    return frozenset(
        i for i, d in enumerate(config.obstacles) if disk_rect_intersect(region.disk_in_frame(d), region.rect)
    )


def closest_component(config: Configuration, region: PathRegion, r: float) -> ClusterSelection:
    """Cluster of in-region obstacles at radius ``r`` nearest to the gripper.

    Distance from the gripper to a cluster is the smallest gripper-to-centre
    distance over its members; ties go to the cluster with the smallest index.

    Raises:
        EmptyRegion: the region holds no obstacle.
    """
    inside = sorted(obstacles_in_region(config, region))
    if not inside:
        raise EmptyRegion()

    disks = [region.disk_in_frame(config.obstacles[i]) for i in inside]
    gripper = region.to_frame(config.gripper.position)
    partition = components_at([d.center for d in disks], r)

    def gripper_distance(block: FrozenSet[int]) -> float:
        return min(math.hypot(disks[k].center.x - gripper.x, disks[k].center.y - gripper.y) for k in block)

    best = min(partition.blocks, key=lambda block: (gripper_distance(block), min(inside[k] for k in block)))
    members = frozenset(inside[k] for k in best)
    box = Rect.around_disks(disks[k] for k in best)
    return ClusterSelection(members, box, r)


def count_components(config: Configuration, region: PathRegion, r: float) -> int:
    """Number of clusters at radius ``r`` among in-region obstacles (0 when none)."""
    inside = sorted(obstacles_in_region(config, region))
    centers = [region.disk_in_frame(config.obstacles[i]).center for i in inside]
    return len(components_at(centers, r))
