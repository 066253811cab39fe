"""
Unit tests for planner lookup by name.
"""
from pathlib import Path

import pytest

from pushplan.exceptions import ConfigurationError
from pushplan.mcts import plan_phim
from pushplan.planner_factory import PLANNER_NAMES, PlannerFactory, get_planner, run_planner
from pushplan.scene_loader import load_scene

FIXTURES = Path(__file__).parent / "fixtures"


class TestPlannerFactory:
    """Test the name registry."""

    def test_canonical_names(self):
        assert PLANNER_NAMES == ("phim", "phia", "phis", "ooa", "grtc")
        assert PlannerFactory().names == PLANNER_NAMES

    def test_lookup(self):
        assert get_planner("phim") is plan_phim

    def test_unknown_name_suggests_close_match(self):
        with pytest.raises(ConfigurationError, match="Did you mean 'phia'"):
            get_planner("phiaa")

    def test_unknown_name_without_match(self):
        with pytest.raises(ConfigurationError) as exc_info:
            get_planner("astar")
        assert "Did you mean" not in exc_info.value.message
        assert exc_info.value.code == 2

    def test_register(self):
        factory = PlannerFactory()
        factory.register("mine", plan_phim)
        assert factory.get("mine") is plan_phim
        assert factory.names[-1] == "mine"

    @pytest.mark.parametrize("name", PLANNER_NAMES)
    def test_run_every_planner(self, name):
        ws, config = load_scene(FIXTURES / "single_blocker.scene")
        plan = run_planner(name, config, ws)
        assert plan.success
        assert plan.method == name
