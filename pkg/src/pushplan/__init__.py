# SPDX-License-Identifier: MIT

"""pushplan - persistent-homology-informed push planning for object retrieval on cluttered shelves."""

__version__ = "0.1.0"
__license__ = "MIT"

from pushplan.config import BenchConfig, PlannerConfig
from pushplan.exceptions import (
    ConfigurationError,
    EmptyInput,
    EmptyRegion,
    GenerationFailed,
    GeometryError,
    InfeasibleScene,
    InvalidStart,
    NoisyInfeasible,
    NoPlanFound,
    NoValidRegion,
    ParseError,
    PushPlanError,
    TimeBudgetExceeded,
)
from pushplan.geometry import Configuration, Disk, GripperPose, Point, Rect, Workspace, is_feasible
from pushplan.homology import components_at, persistence_diagram, persistent_radii
from pushplan.mcts import Plan, PlanStats, format_plan, parse_plan, plan_phim
from pushplan.path_region import PathRegion, closest_component, compute_path_region
from pushplan.planner_factory import PLANNER_NAMES, get_planner, run_planner
from pushplan.push_sim import PushAction, PushDirection, apply_noise, is_goal, simulate_push
from pushplan.scene_loader import load_scene, parse_scene, write_scene
from pushplan.records import BenchRow, PlanSummary, SummaryRow

__all__ = [
    "__version__",
    "__license__",
    "PlannerConfig",
    "BenchConfig",
    # Errors
    "PushPlanError",
    "ParseError",
    "InfeasibleScene",
    "GeometryError",
    "EmptyInput",
    "NoValidRegion",
    "EmptyRegion",
    "NoisyInfeasible",
    "NoPlanFound",
    "TimeBudgetExceeded",
    "InvalidStart",
    "GenerationFailed",
    "ConfigurationError",
    # Scene model
    "Point",
    "Rect",
    "Workspace",
    "Disk",
    "GripperPose",
    "Configuration",
    "is_feasible",
    "parse_scene",
    "write_scene",
    "load_scene",
    # Algorithms
    "persistence_diagram",
    "components_at",
    "persistent_radii",
    "PathRegion",
    "compute_path_region",
    "closest_component",
    "PushAction",
    "PushDirection",
    "simulate_push",
    "is_goal",
    "apply_noise",
    "Plan",
    "PlanStats",
    "plan_phim",
    "format_plan",
    "parse_plan",
    "PLANNER_NAMES",
    "get_planner",
    "run_planner",
    # Type definitions
    "BenchRow",
    "SummaryRow",
    "PlanSummary",
]
