# SPDX-License-Identifier: MIT

"""Record types for pushplan.

TypedDict records for the tabular and textual outputs (benchmark CSV rows,
summary rows, parsed plan summaries).
"""

__all__ = ["BenchRow", "SummaryRow", "PlanSummary", "PlannerParams"]

from typing import Optional

from typing_extensions import NotRequired, TypedDict


class BenchRow(TypedDict):
    """One row of the benchmark CSV."""

    scene_id: int
    method: str
    planning_success: str  # "true" | "false"
    execution_success: str
    actions: int
    seconds: str  # empty unless timing is enabled


class SummaryRow(TypedDict):
    """Per-method aggregate over benchmark records."""

    method: str
    runs: int
    mean_actions: Optional[float]  # None when no plan succeeded
    mean_seconds: float
    planning_success_rate: float
    execution_success_rate: float


class PlanSummary(TypedDict):
    """The trailing ``success=... actions=... iters=... seconds=...`` line of a plan."""

    success: bool
    actions: int
    iters: int
    seconds: NotRequired[Optional[float]]


class PlannerParams(TypedDict, total=False):
    """Keyword overrides accepted by ``PlannerConfig.with_overrides``; ``None`` keeps the current value."""

    nu: Optional[float]
    h: Optional[float]
    c: Optional[float]
    max_iterations: Optional[int]
    time_limit_s: Optional[float]
    max_depth: Optional[int]
    seed: Optional[int]
    timing: Optional[bool]
