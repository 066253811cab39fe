# SPDX-License-Identifier: MIT

"""Parametrized tests for edge cases."""

import pytest

from pushplan.exceptions import (
    ConfigurationError,
    EmptyInput,
    EmptyRegion,
    GenerationFailed,
    InfeasibleScene,
    InvalidStart,
    NoisyInfeasible,
    NoPlanFound,
    NoValidRegion,
    ParseError,
    PushPlanError,
    TimeBudgetExceeded,
)
from pushplan.geometry import Configuration, Disk, GripperPose, Point, Workspace
from pushplan.homology import components_at, persistence_diagram
from pushplan.mcts import check_start
from pushplan.scene_loader import format_number, parse_scene


class TestExceptionEdgeCases:
    """Parametrized tests for error codes and records."""

    @pytest.mark.parametrize(
        "error,code",
        [
            (ParseError("bad", 3), 2),
            (InfeasibleScene("overlap"), 2),
            (EmptyInput("none"), 2),
            (InvalidStart("clear"), 2),
            (ConfigurationError("bad key"), 2),
            (NoPlanFound("stuck"), 1),
            (TimeBudgetExceeded("slow"), 1),
            (NoValidRegion("walls"), 1),
            (EmptyRegion(), 1),
            (NoisyInfeasible("packed"), 1),
            (GenerationFailed("dense"), 1),
        ],
    )
    def test_exit_codes(self, error, code):
        """Test every error carries the exit code the CLI reports."""
        assert isinstance(error, PushPlanError)
        assert error.code == code

    def test_to_dict(self):
        record = ParseError("not a number", 4).to_dict()
        assert record == {"error": "ParseError", "code": 2, "message": "Parse Error (line 4): not a number"}

    def test_time_budget_is_no_plan(self):
        """Test callers catching NoPlanFound also see time-outs with their plan."""
        with pytest.raises(NoPlanFound) as exc_info:
            raise TimeBudgetExceeded("500 s", plan="partial")
        assert exc_info.value.plan == "partial"


class TestNumberFormattingEdgeCases:
    """Parametrized tests for shortest round-trip numbers."""

    @pytest.mark.parametrize(
        "value,text",
        [
            (0.1, "0.1"),
            (0.035, "0.035"),
            (1.0, "1.0"),
            (0.30000000000000004, "0.30000000000000004"),
            (1e-05, "1e-05"),
            (-0.25, "-0.25"),
        ],
    )
    def test_format_number(self, value, text):
        assert format_number(value) == text
        assert float(format_number(value)) == value


class TestSceneEdgeCases:
    """Parametrized tests for scene boundaries."""

    @pytest.mark.parametrize(
        "obstacle,ok",
        [
            ("obstacle 0.0 0.35 0.035", True),
            ("obstacle 0.765 0.35 0.035", True),
            ("obstacle 0.3 0.035 0.035", True),
            ("obstacle 0.3 0.665 0.035", True),
            ("obstacle 0.3 0.35 0.0", False),
            ("obstacle 0.3 0.35 -0.01", False),
        ],
    )
    def test_obstacles_at_walls(self, obstacle, ok):
        text = f"workspace 0.8 0.7 0.16 0.05\n{obstacle}\ntarget 0.65 0.6 0.035\ngripper 0 0.6 0\n"
        if ok:
            _, config = parse_scene(text)
            assert len(config.obstacles) == 1
        else:
            with pytest.raises(InfeasibleScene):
                parse_scene(text)

    @pytest.mark.parametrize("keyword", ["Workspace", "OBSTACLE", "targets"])
    def test_keywords_are_case_sensitive(self, keyword):
        with pytest.raises(ParseError):
            parse_scene(f"{keyword} 0.8 0.7 0.16 0.05\n")

    def test_start_without_valid_region(self):
        ws = Workspace(0.8, 0.3, 0.3, 0.05)
        config = Configuration(
            (Disk(Point(0.3, 0.15), 0.035),), Disk(Point(0.6, 0.15), 0.035), GripperPose(Point(0.0, 0.15))
        )
        with pytest.raises(InvalidStart, match="No Valid Region"):
            check_start(config, ws)


class TestClusterEdgeCases:
    """Parametrized tests for degenerate point sets."""

    @pytest.mark.parametrize("count", [2, 3, 5])
    def test_coincident_points(self, count):
        points = [(0.4, 0.4)] * count
        diag = persistence_diagram(points)
        assert diag.deaths == [0.0] * (count - 1)
        assert len(components_at(points, 0.0)) == 1

    @pytest.mark.parametrize("r", [0.0, 1e-12])
    def test_zero_radius_separates_distinct_points(self, r):
        assert len(components_at([(0.0, 0.0), (0.1, 0.0)], r)) == 2
