"""
Unit tests for the shelf geometry primitives.
"""
import math

import numpy as np
import pytest

from pushplan.exceptions import GeometryError
from pushplan.geometry import (
    Configuration,
    Disk,
    GripperPose,
    Point,
    Rect,
    Workspace,
    disk_rect_intersect,
    disk_within_walls,
    disks_overlap,
    feasibility_violations,
    is_feasible,
    rotate_about,
)

WS = Workspace(0.8, 0.7, 0.16, 0.05)


def _config(*obstacles, target=(0.65, 0.35, 0.035)):
    return Configuration(
        tuple(Disk(Point(x, y), r) for x, y, r in obstacles),
        Disk(Point(target[0], target[1]), target[2]),
        GripperPose(Point(0.0, 0.35)),
    )


class TestWorkspace:
    """Test workspace validation."""

    @pytest.mark.parametrize(
        "args",
        [
            (0.0, 0.7, 0.16, 0.05),
            (0.8, -0.1, 0.16, 0.05),
            (0.8, 0.7, 0.16, 0.7),
            (0.8, 0.7, 0.0, 0.05),
            (0.8, 0.7, 0.71, 0.05),
        ],
    )
    def test_invalid_dimensions_rejected(self, args):
        """Test that non-positive or oversized dimensions raise GeometryError."""
        with pytest.raises(GeometryError):
            Workspace(*args)

    def test_arm_width_may_equal_shelf_width(self):
        """Test that the band half-width may span the whole shelf."""
        assert Workspace(0.8, 0.3, 0.3, 0.05).arm_width == 0.3


class TestRect:
    """Test rectangle helpers."""

    def test_negative_extent_rejected(self):
        with pytest.raises(GeometryError):
            Rect(1.0, 0.0, 0.0, 1.0)

    def test_expanded_and_clipped(self):
        """Test growing a box and clipping it back to the shelf."""
        rect = Rect(0.0, 0.1, 0.65, 0.7).expanded(0.05)
        assert (rect.x_min, rect.x_max, rect.y_min, rect.y_max) == pytest.approx((-0.05, 0.15, 0.6, 0.75))
        clipped = rect.clipped(WS)
        assert clipped.x_min == 0.0
        assert clipped.y_max == 0.7

    def test_around_disks(self):
        box = Rect.around_disks([Disk(Point(0.2, 0.3), 0.05), Disk(Point(0.4, 0.35), 0.02)])
        assert box.x_min == pytest.approx(0.15)
        assert box.x_max == pytest.approx(0.42)
        assert box.y_min == pytest.approx(0.25)
        assert box.y_max == pytest.approx(0.37)

    def test_around_no_disks(self):
        with pytest.raises(GeometryError):
            Rect.around_disks([])

    def test_corners_counter_clockwise(self):
        corners = Rect(0.0, 1.0, 0.0, 2.0).corners()
        assert corners == (Point(0.0, 0.0), Point(1.0, 0.0), Point(1.0, 2.0), Point(0.0, 2.0))


class TestDiskPredicates:
    """Test overlap, wall and intersection predicates."""

    def test_touching_disks_do_not_overlap(self):
        """Test that tangent disks are allowed."""
        a = Disk(Point(0.0, 0.0), 0.05)
        b = Disk(Point(0.1, 0.0), 0.05)
        assert not disks_overlap(a, b)

    def test_interpenetrating_disks_overlap(self):
        a = Disk(Point(0.0, 0.0), 0.05)
        b = Disk(Point(0.09, 0.0), 0.05)
        assert disks_overlap(a, b)

    @pytest.mark.parametrize(
        "center,inside",
        [
            ((0.3, 0.035), True),
            ((0.3, 0.03), False),
            ((0.3, 0.665), True),
            ((0.3, 0.67), False),
            ((0.765, 0.35), True),
            ((0.78, 0.35), False),
            ((0.0, 0.35), True),
            ((-0.01, 0.35), False),
        ],
    )
    def test_within_walls(self, center, inside):
        """Test the S, N and back walls; the open face only bounds the centre."""
        assert disk_within_walls(Disk(Point(*center), 0.035), WS) is inside

    def test_disk_rect_intersect_is_closed(self):
        """Test that a disk tangent to a rectangle edge intersects it."""
        rect = Rect(0.0, 1.0, 0.0, 1.0)
        assert disk_rect_intersect(Disk(Point(0.5, 1.25), 0.25), rect)
        assert not disk_rect_intersect(Disk(Point(0.5, 1.26), 0.25), rect)

    def test_disk_rect_corner_distance(self):
        rect = Rect(0.0, 1.0, 0.0, 1.0)
        assert not disk_rect_intersect(Disk(Point(1.2, 1.2), 0.25), rect)
        assert disk_rect_intersect(Disk(Point(1.1, 1.1), 0.25), rect)

    def test_non_positive_radius_rejected(self):
        with pytest.raises(GeometryError):
            Disk(Point(0.0, 0.0), 0.0)


class TestFeasibility:
    """Test whole-configuration feasibility."""

    def test_feasible_scene(self):
        assert is_feasible(_config((0.3, 0.35, 0.035)), WS)

    def test_overlap_reported(self):
        problems = feasibility_violations(_config((0.3, 0.35, 0.035), (0.32, 0.35, 0.035)), WS)
        assert problems == ["obstacle 0 overlaps obstacle 1"]

    def test_obstacle_overlapping_target(self):
        assert not is_feasible(_config((0.62, 0.35, 0.035)), WS)

    def test_gripper_outside_workspace(self):
        config = Configuration((), Disk(Point(0.65, 0.35), 0.035), GripperPose(Point(-0.1, 0.35)))
        assert "gripper" in feasibility_violations(config, WS)[0]

    def test_with_obstacle_centers_keeps_radii(self):
        config = _config((0.3, 0.35, 0.035), (0.1, 0.1, 0.02))
        moved = config.with_obstacle_centers([(0.3, 0.5), (0.1, 0.2)])
        assert [d.radius for d in moved.obstacles] == [0.035, 0.02]
        assert moved.obstacles[1].center == Point(0.1, 0.2)
        assert moved.target == config.target

    def test_configurations_are_hashable(self):
        """Test that equal configurations hash equal so planners can deduplicate them."""
        assert hash(_config((0.3, 0.35, 0.035))) == hash(_config((0.3, 0.35, 0.035)))


class TestRotation:
    """Test rotations about a pivot."""

    def test_zero_angle_is_exact(self):
        assert rotate_about((0.123456789, 0.987654321), (0.5, 0.5), 0.0) == Point(0.123456789, 0.987654321)

    def test_quarter_turn(self):
        p = rotate_about((1.0, 0.0), (0.0, 0.0), math.pi / 2)
        assert p.x == pytest.approx(0.0, abs=1e-12)
        assert p.y == pytest.approx(1.0)

    def test_inverse_rotation(self):
        p = rotate_about(rotate_about((0.2, 0.3), (0.6, 0.06), 0.3), (0.6, 0.06), -0.3)
        assert p.x == pytest.approx(0.2)
        assert p.y == pytest.approx(0.3)

    @pytest.mark.parametrize("seed", range(4))
    def test_distance_to_pivot_preserved(self, seed):
        rng = np.random.default_rng(seed)
        for p, pivot, angle in zip(
            rng.uniform(-1, 1, size=(20, 2)), rng.uniform(-1, 1, size=(20, 2)), rng.uniform(-math.pi, math.pi, 20)
        ):
            q = rotate_about(p, pivot, float(angle))
            assert math.dist(q, pivot) == pytest.approx(math.dist(p, pivot), abs=1e-12)


class TestDiskRectSampling:
    """Test the disk/rectangle predicate against a grid of rectangle points."""

    STEPS = 41

    def _grid_distances(self, d, rect):
        xs = np.linspace(rect.x_min, rect.x_max, self.STEPS)
        ys = np.linspace(rect.y_min, rect.y_max, self.STEPS)
        gx, gy = np.meshgrid(xs, ys)
        return np.hypot(gx - d.center.x, gy - d.center.y)

    @pytest.mark.parametrize("seed", range(6))
    def test_agrees_with_grid(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(50):
            x0, y0 = rng.uniform(0, 0.5, 2)
            rect = Rect(x0, x0 + rng.uniform(0.01, 0.3), y0, y0 + rng.uniform(0.01, 0.3))
            d = Disk(Point(*rng.uniform(-0.1, 0.9, 2)), float(rng.uniform(0.01, 0.1)))
            distances = self._grid_distances(d, rect)
            half_step = math.hypot(rect.width, rect.height) / (self.STEPS - 1) / 2.0
            if (distances <= d.radius).any():
                assert disk_rect_intersect(d, rect)
            if disk_rect_intersect(d, rect):
                assert (distances <= d.radius + half_step + 1e-12).any()
