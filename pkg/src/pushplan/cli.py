# SPDX-License-Identifier: MIT

"""``pushplan`` command line: plan, bench, diagram, render.

stdout carries plan text and CSV only; diagnostics go to stderr. Exit codes:
0 success, 1 planner failure, 2 usage, parse or configuration errors.
"""

__all__ = ["cli", "main"]

import io
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click

try:
    from .bench import make_specs, run_benchmark, save_scene_corpus, summarize, write_records_csv, write_summary_csv
    from .config import BenchConfig, PlannerConfig
    from .exceptions import EXIT_USAGE, NoPlanFound, PushPlanError
    from .geometry import Configuration, Workspace
    from .homology import persistence_diagram
    from .mcts import Plan, PlanStats, format_plan, parse_plan
    from .path_region import compute_path_region, obstacles_in_region
    from .planner_factory import PLANNER_NAMES, get_planner, run_planner
    from .push_sim import is_goal, replay_actions
    from .render import render_svg
    from .scene_loader import load_scene
    from .records import PlannerParams
except ImportError:
    from bench import make_specs, run_benchmark, save_scene_corpus, summarize, write_records_csv, write_summary_csv
    from config import BenchConfig, PlannerConfig
    from exceptions import EXIT_USAGE, NoPlanFound, PushPlanError
    from geometry import Configuration, Workspace
    from homology import persistence_diagram
    from mcts import Plan, PlanStats, format_plan, parse_plan
    from path_region import compute_path_region, obstacles_in_region
    from planner_factory import PLANNER_NAMES, get_planner, run_planner
    from push_sim import is_goal, replay_actions
    from render import render_svg
    from scene_loader import load_scene
    from records import PlannerParams

logger = logging.getLogger(__name__)


def _setup_logging(debug: bool) -> None:
    log_level = logging.DEBUG if debug else logging.INFO
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s" if debug else "%(levelname)s - %(message)s"
    logging.basicConfig(level=log_level, format=log_format, stream=sys.stderr)
    logging.getLogger("pushplan").setLevel(log_level)
    if debug:
        logger.debug("Debug mode enabled - verbose logging active")


def _planner_config(ctx: click.Context) -> PlannerConfig:
    path = ctx.obj.get("config_path")
    return PlannerConfig.from_file(path) if path else PlannerConfig()


def _bench_config(ctx: click.Context) -> BenchConfig:
    path = ctx.obj.get("config_path")
    return BenchConfig.from_file(path) if path else BenchConfig()


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {target}")


@click.group()
@click.option("--debug", is_flag=True, default=False, help="Verbose logging on stderr.")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="YAML or JSON file with planner and bench settings.",
)
@click.pass_context
def cli(ctx: click.Context, debug: bool, config_path: Optional[str]):
    """Plan push sequences that clear a path to a target on a cluttered shelf."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    _setup_logging(debug or _planner_config(ctx).debug)


@cli.command()
@click.option("--scene", "scene_path", required=True, type=click.Path(dir_okay=False), help="Scene file.")
@click.option("--method", type=click.Choice(PLANNER_NAMES), default="phim", show_default=True)
@click.option("--nu", type=float, default=None, help="Persistence gap (m). [default: 0.015]")
@click.option("--h", "h", type=float, default=None, help="Smallest usable cluster radius (m). [default: 0.05]")
@click.option("--c", "c", type=float, default=None, help="UCB exploration constant. [default: 1.4142135]")
@click.option("--iters", type=int, default=None, help="MCTS iteration cap. [default: 400]")
@click.option("--time-limit", type=float, default=None, help="Planning time cap (s). [default: 500]")
@click.option("--max-depth", type=int, default=None, help="Longest plan considered. [default: 12]")
@click.option("--seed", type=int, default=None, help="Seed for randomized planners. [default: 0]")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also write the plan to this file.")
@click.option("--timing/--no-timing", default=None, help="Report wall-clock seconds (breaks byte reproducibility).")
@click.pass_context
def plan(ctx: click.Context, scene_path, method, nu, h, c, iters, time_limit, max_depth, seed, out, timing) -> int:
    """Plan on one scene and print the plan."""
    overrides = PlannerParams(
        nu=nu, h=h, c=c, max_iterations=iters, time_limit_s=time_limit, max_depth=max_depth, seed=seed, timing=timing
    )
    params = _planner_config(ctx).with_overrides(**overrides)
    ws, config = load_scene(scene_path)

    code = 0
    try:
        result = run_planner(method, config, ws, params)
    except NoPlanFound as e:
        logger.error(e.message)
        result = e.plan
        code = e.code

    text = format_plan(result, params.timing)
    click.echo(text, nl=False)
    _write_text(out, text)
    return code


@cli.command()
@click.option("--count", type=int, default=None, help="Number of generated scenes. [default: 50]")
@click.option(
    "--methods",
    default=",".join(PLANNER_NAMES),
    show_default=True,
    help="Comma-separated planner names.",
)
@click.option("--noise", type=float, default=None, help="Execution noise radius (m). [default: 0.03]")
@click.option("--trials", type=int, default=None, help="Noisy replays per plan. [default: 5]")
@click.option("--seed", type=int, default=None, help="Base scene seed. [default: 0]")
@click.option("--csv", "csv_path", required=True, type=click.Path(dir_okay=False), help="Per-trial CSV output.")
@click.option("--scenes-dir", type=click.Path(file_okay=False), default=None, help="Save generated scenes here.")
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False), default=None, help="Summary CSV output.")
@click.option("--workers", type=int, default=None, help="Worker processes. [default: 1]")
@click.option("--timing/--no-timing", default=None, help="Fill the seconds columns.")
@click.pass_context
def bench(ctx: click.Context, count, methods, noise, trials, seed, csv_path, scenes_dir, summary_path, workers, timing):
    """Generate scenes, run the planners, replay plans under noise."""
    names: List[str] = [m.strip() for m in methods.split(",") if m.strip()]
    for name in names:
        get_planner(name)

    cfg = _bench_config(ctx).with_overrides(
        count=count, noise_bound=noise, noise_trials=trials, seed=seed, workers=workers
    )
    params = _planner_config(ctx).with_overrides(timing=timing)
    specs = make_specs(cfg)
    if scenes_dir:
        save_scene_corpus(specs, scenes_dir)

    records = run_benchmark(specs, names, params, cfg.noise_bound, cfg.noise_trials, cfg.workers)

    target = Path(csv_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        write_records_csv(records, f, params.timing)
    logger.info(f"Wrote {len(records)} records to {target}")

    rows = summarize(records)
    if summary_path:
        summary_target = Path(summary_path)
        summary_target.parent.mkdir(parents=True, exist_ok=True)
        with open(summary_target, "w", encoding="utf-8", newline="") as f:
            write_summary_csv(rows, f, params.timing)
    else:
        buffer = io.StringIO()
        write_summary_csv(rows, buffer, params.timing)
        click.echo(buffer.getvalue(), nl=False)
    return 0


def _diagram_points(ws: Workspace, config: Configuration, in_region: bool):
    if not in_region:
        return [d.center for d in config.obstacles]
    region = compute_path_region(config, ws)
    return [region.disk_in_frame(config.obstacles[i]).center for i in sorted(obstacles_in_region(config, region))]


@cli.command()
@click.option("--scene", "scene_path", required=True, type=click.Path(dir_okay=False), help="Scene file.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Also write the CSV here.")
@click.option("--in-region", is_flag=True, default=False, help="Only obstacles inside the path region.")
def diagram(scene_path, csv_path, in_region) -> int:
    """Print the persistence diagram of the obstacle centres."""
    ws, config = load_scene(scene_path)
    text = persistence_diagram(_diagram_points(ws, config, in_region)).to_csv()
    click.echo(text, nl=False)
    _write_text(csv_path, text)
    return 0


def _replayed_plan(ws: Workspace, config: Configuration, plan_path: str) -> Plan:
    actions, _ = parse_plan(Path(plan_path).read_text(encoding="utf-8"))
    trace = replay_actions(config, ws, actions)
    if not trace.ok:
        logger.warning(
            f"Plan step {trace.failed_at + 1} fails on this scene ({trace.failure.kind.value}); "
            f"drawing the first {trace.failed_at} step(s)"
        )
    done = len(trace.states)
    success = trace.ok and is_goal(trace.final(config), ws)
    return Plan(tuple(actions[:done]), trace.states, success, PlanStats(), trace.motions)


@cli.command()
@click.option("--scene", "scene_path", required=True, type=click.Path(dir_okay=False), help="Scene file.")
@click.option("--plan", "plan_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Plan text file.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="SVG output file.")
def render(scene_path, plan_path, out) -> int:
    """Draw the scene (and a plan's pushes) as SVG."""
    ws, config = load_scene(scene_path)
    plan_obj = _replayed_plan(ws, config, plan_path) if plan_path else None
    _write_text(out, render_svg(ws, config, plan_obj))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit code."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="pushplan", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except PushPlanError as e:
        logger.error(e.message)
        return e.code
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
