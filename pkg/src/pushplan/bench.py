# SPDX-License-Identifier: MIT

"""Benchmark harness: scene generation, planner runs, noisy execution replay, statistics.

Each (scene, method) pair is one trial. A plan is made on the nominal scene,
then its recorded gripper motions are replayed open-loop on ``noise_trials``
perturbed copies of that scene; execution succeeds when every replay ends
with a clear path region.
"""

__all__ = [
    "MAX_PLACEMENT_TRIES",
    "CSV_COLUMNS",
    "SUMMARY_COLUMNS",
    "SceneSpec",
    "BenchRecord",
    "generate_scene",
    "make_specs",
    "run_benchmark",
    "summarize",
    "write_records_csv",
    "write_summary_csv",
    "save_scene_corpus",
]

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

try:
    from .config import BenchConfig, PlannerConfig
    from .exceptions import EmptyInput, GenerationFailed, GeometryError, InvalidStart, NoisyInfeasible, NoPlanFound
    from .geometry import Configuration, Disk, GripperPose, Point, Workspace, disk_rect_intersect, disks_overlap
    from .mcts import Plan
    from .path_region import compute_path_region
    from .planner_factory import PLANNER_NAMES, run_planner
    from .push_sim import apply_noise, is_goal, replay_motions
    from .scene_loader import format_number, save_scene
    from .records import BenchRow, SummaryRow
except ImportError:
    from config import BenchConfig, PlannerConfig
    from exceptions import EmptyInput, GenerationFailed, GeometryError, InvalidStart, NoisyInfeasible, NoPlanFound
    from geometry import Configuration, Disk, GripperPose, Point, Workspace, disk_rect_intersect, disks_overlap
    from mcts import Plan
    from path_region import compute_path_region
    from planner_factory import PLANNER_NAMES, run_planner
    from push_sim import apply_noise, is_goal, replay_motions
    from scene_loader import format_number, save_scene
    from records import BenchRow, SummaryRow

logger = logging.getLogger(__name__)

# Rejection-sampling budget per placed obstacle.
MAX_PLACEMENT_TRIES = 1000

CSV_COLUMNS = ("scene_id", "method", "planning_success", "execution_success", "actions", "seconds")
SUMMARY_COLUMNS = (
    "method",
    "runs",
    "mean_actions",
    "mean_seconds",
    "planning_success_rate",
    "execution_success_rate",
)


@dataclass(frozen=True)
class SceneSpec:
    """Parameters of one procedurally generated shelf scene."""

    obstacle_count: int = 7
    obstacle_radius_range: Tuple[float, float] = (0.035, 0.035)
    depth_x: float = 0.8
    width_y: float = 0.7
    arm_width: float = 0.16
    gripper_width: float = 0.05
    target_radius: float = 0.035
    target_placement: str = "back_wall_band"
    seed: int = 0

    def __post_init__(self):
        if self.obstacle_count < 0:
            raise GeometryError(f"obstacle_count must be non-negative, got {self.obstacle_count}")
        low, high = self.obstacle_radius_range
        if not 0 < low <= high:
            raise GeometryError(f"obstacle radius range must satisfy 0 < min <= max, got {self.obstacle_radius_range}")
        if not self.target_radius > 0:
            raise GeometryError(f"target_radius must be positive, got {self.target_radius}")
        if self.target_placement != "back_wall_band":
            raise GeometryError(f"unknown target placement {self.target_placement!r}")

    def workspace(self) -> Workspace:
        return Workspace(self.depth_x, self.width_y, self.arm_width, self.gripper_width)


@dataclass(frozen=True)
class BenchRecord:
    scene_id: int
    method: str
    planning_success: bool
    execution_success: bool
    action_count: int
    planning_seconds: float

    def to_row(self, timing: bool = False) -> BenchRow:
        return BenchRow(
            scene_id=self.scene_id,
            method=self.method,
            planning_success="true" if self.planning_success else "false",
            execution_success="true" if self.execution_success else "false",
            actions=self.action_count,
            seconds=f"{self.planning_seconds:.3f}" if timing else "",
        )


def _place(
    rng: np.random.Generator, x_range: Tuple[float, float], y_range: Tuple[float, float], radius: float
) -> Disk:
    return Disk(Point(rng.uniform(*x_range), rng.uniform(*y_range)), radius)


def generate_scene(spec: SceneSpec) -> Tuple[Workspace, Configuration]:
    """Random feasible scene with the target in the rear third of the shelf.

    The gripper faces the target from the open face. The first obstacle is
    placed inside the path region so the scene always needs at least one push.

    Raises:
        GenerationFailed: an obstacle could not be placed within ``MAX_PLACEMENT_TRIES``.
    """
    rng = np.random.default_rng(spec.seed)
    ws = spec.workspace()
    tr = spec.target_radius

    margin = max(spec.arm_width, tr)
    y_low, y_high = (margin, ws.width_y - margin) if 2 * margin <= ws.width_y else (ws.width_y / 2, ws.width_y / 2)
    target = _place(rng, (ws.depth_x * 2.0 / 3.0, ws.depth_x - tr), (y_low, y_high), tr)
    gripper = GripperPose(Point(0.0, target.center.y), 0.0)
    region = compute_path_region(Configuration((), target, gripper), ws)

    obstacles: List[Disk] = []
    for k in range(spec.obstacle_count):
        for _ in range(MAX_PLACEMENT_TRIES):
            r = rng.uniform(*spec.obstacle_radius_range)
            if k == 0:
                x_range = (r, max(r, target.center.x))
                band = (target.center.y - spec.arm_width, target.center.y + spec.arm_width)
                y_range = (max(r, band[0]), min(ws.width_y - r, band[1]))
            else:
                x_range = (r, ws.depth_x - r)
                y_range = (r, ws.width_y - r)
            candidate = _place(rng, x_range, y_range, r)
            if k == 0 and not disk_rect_intersect(region.disk_in_frame(candidate), region.rect):
                continue
            if any(disks_overlap(candidate, other) for other in obstacles + [target]):
                continue
            obstacles.append(candidate)
            break
        else:
            raise GenerationFailed(
                f"could not place obstacle {k} of {spec.obstacle_count} "
                f"in {MAX_PLACEMENT_TRIES} tries (seed {spec.seed})"
            )

    return ws, Configuration(tuple(obstacles), target, gripper)


def make_specs(cfg: BenchConfig) -> List[SceneSpec]:
    """``cfg.count`` scene specs; scene ``i`` uses seed ``cfg.seed + i``."""
    return [
        SceneSpec(
            obstacle_count=cfg.obstacle_count,
            obstacle_radius_range=cfg.obstacle_radius_range,
            depth_x=cfg.depth_x,
            width_y=cfg.width_y,
            arm_width=cfg.arm_width,
            gripper_width=cfg.gripper_width,
            target_radius=cfg.target_radius,
            seed=cfg.seed + i,
        )
        for i in range(cfg.count)
    ]


def _executes(
    config: Configuration, ws: Workspace, plan: Plan, noise_bound: float, seed: Sequence[int]
) -> bool:
    try:
        noisy = apply_noise(config, ws, noise_bound, seed)
    except NoisyInfeasible as e:
        logger.debug(e.message)
        return False
    trace = replay_motions(noisy, ws, plan.motions)
    return trace.ok and is_goal(trace.final(noisy), ws)


def _evaluate_scene(
    scene_id: int,
    spec: SceneSpec,
    methods: Sequence[str],
    params: PlannerConfig,
    noise_bound: float,
    noise_trials: int,
) -> List[BenchRecord]:
    try:
        ws, config = generate_scene(spec)
    except GenerationFailed as e:
        logger.warning(f"Scene {scene_id}: {e.message}")
        return [BenchRecord(scene_id, m, False, False, 0, 0.0) for m in methods]

    records = []
    for method in methods:
        started = time.perf_counter()
        plan: Optional[Plan] = None
        try:
            plan = run_planner(method, config, ws, params)
        except NoPlanFound as e:
            plan = e.plan
            logger.debug(f"Scene {scene_id} {method}: {e.message}")
        except InvalidStart as e:
            logger.warning(f"Scene {scene_id} {method}: {e.message}")
        seconds = time.perf_counter() - started

        planned = plan is not None and plan.success
        if planned and not _executes(config, ws, plan, 0.0, (spec.seed,)):
            logger.warning(f"Scene {scene_id} {method}: plan does not replay on the nominal scene")
            planned = False
        executed = planned and all(
            _executes(config, ws, plan, noise_bound, (spec.seed, trial)) for trial in range(noise_trials)
        )
        records.append(
            BenchRecord(scene_id, method, planned, executed, len(plan.actions) if plan is not None else 0, seconds)
        )
    return records


def run_benchmark(
    specs: Sequence[SceneSpec],
    methods: Sequence[str],
    params: Optional[PlannerConfig] = None,
    noise_bound: float = 0.03,
    noise_trials: int = 5,
    workers: int = 1,
) -> List[BenchRecord]:
    """Plan every scene with every method and replay each plan under noise.

    Records are ordered by scene id, then by the order of ``methods``,
    whatever the number of workers.

    Raises:
        EmptyInput: ``specs`` or ``methods`` is empty.
    """
    if not specs:
        raise EmptyInput("no scenes to benchmark")
    if not methods:
        raise EmptyInput("no methods to benchmark")
    params = params or PlannerConfig()
    logger.info(f"Benchmarking {len(specs)} scenes x {len(methods)} methods with {workers} worker(s)")

    args = [(i, spec, tuple(methods), params, noise_bound, noise_trials) for i, spec in enumerate(specs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_evaluate_scene, *zip(*args)))
    else:
        batches = [_evaluate_scene(*a) for a in args]

    order = {m: k for k, m in enumerate(methods)}
    return sorted((r for batch in batches for r in batch), key=lambda r: (r.scene_id, order[r.method]))


def _method_order(methods: Sequence[str]) -> List[str]:
    known = [m for m in PLANNER_NAMES if m in methods]
    return known + sorted(set(methods) - set(known))


def summarize(records: Sequence[BenchRecord]) -> List[SummaryRow]:
    """Per-method means and success rates.

    ``mean_actions`` averages successful plans only (``None`` when there are
    none). Sums are exactly rounded, so the result does not depend on record
    order.

    Raises:
        EmptyInput: no records.
    """
    if not records:
        raise EmptyInput("no benchmark records to summarize")

    grouped: Dict[str, List[BenchRecord]] = {}
    for r in records:
        grouped.setdefault(r.method, []).append(r)

    rows = []
    for method in _method_order(list(grouped)):
        group = grouped[method]
        solved = [r.action_count for r in group if r.planning_success]
        rows.append(
            SummaryRow(
                method=method,
                runs=len(group),
                mean_actions=math.fsum(solved) / len(solved) if solved else None,
                mean_seconds=math.fsum(r.planning_seconds for r in group) / len(group),
                planning_success_rate=sum(r.planning_success for r in group) / len(group),
                execution_success_rate=sum(r.execution_success for r in group) / len(group),
            )
        )
    return rows


def write_records_csv(records: Sequence[BenchRecord], stream: TextIO, timing: bool = False) -> None:
    """Write ``CSV_COLUMNS`` rows; the seconds cell stays empty unless ``timing``."""
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.to_row(timing))


def write_summary_csv(rows: Sequence[SummaryRow], stream: TextIO, timing: bool = False) -> None:
    """Write one row per method; empty cells for undefined means (and seconds without ``timing``)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        mean_actions = row["mean_actions"]
        writer.writerow(
            [
                row["method"],
                row["runs"],
                "" if mean_actions is None else format_number(mean_actions),
                format_number(row["mean_seconds"]) if timing else "",
                format_number(row["planning_success_rate"]),
                format_number(row["execution_success_rate"]),
            ]
        )


def save_scene_corpus(specs: Sequence[SceneSpec], directory: Union[str, Path]) -> List[Path]:
    """Write each generated scene to ``<directory>/<scene_id>.scene``; unplaceable scenes are skipped."""
    directory = Path(directory)
    paths = []
    for scene_id, spec in enumerate(specs):
        try:
            ws, config = generate_scene(spec)
        except GenerationFailed as e:
            logger.warning(f"Scene {scene_id} not saved: {e.message}")
            continue
        paths.append(save_scene(directory / f"{scene_id}.scene", ws, config))
    return paths
