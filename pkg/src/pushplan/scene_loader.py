# SPDX-License-Identifier: MIT

"""Reading and writing the line-oriented scene format.

::

    workspace <depth_x> <width_y> <arm_width> <gripper_width>
    obstacle <x> <y> <radius>
    target <x> <y> <radius>
    gripper <x> <y> <heading>

``#`` starts a comment. Fields are separated by single spaces when written and
by any whitespace when read.
"""

__all__ = ["parse_scene", "write_scene", "load_scene", "save_scene", "format_number"]

import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

try:
    from .exceptions import GeometryError, InfeasibleScene, ParseError
    from .geometry import Configuration, Disk, GripperPose, Point, Workspace, feasibility_violations
except ImportError:
    from exceptions import GeometryError, InfeasibleScene, ParseError
    from geometry import Configuration, Disk, GripperPose, Point, Workspace, feasibility_violations

logger = logging.getLogger(__name__)

# keyword -> number of numeric fields
_FIELD_COUNTS: Dict[str, int] = {"workspace": 4, "obstacle": 3, "target": 3, "gripper": 3}

# Scene files larger than this are rejected before parsing.
MAX_SCENE_BYTES = 1024 * 1024


def format_number(value: float) -> str:
    """Shortest round-trip decimal form of ``value``, locale independent."""
    return repr(float(value))


def _parse_numbers(fields: List[str], line_no: int) -> List[float]:
    values = []
    for field in fields:
        try:
            value = float(field)
        except ValueError:
            raise ParseError(f"not a number: {field!r}", line_no)
        if not math.isfinite(value):
            raise ParseError(f"non-finite number: {field!r}", line_no)
        values.append(value)
    return values


def parse_scene(text: str) -> Tuple[Workspace, Configuration]:
    """Parse a scene document into a validated workspace and configuration.

    Raises:
        ParseError: malformed line, unknown keyword, wrong field count, missing or
            repeated workspace/target/gripper line.
        InfeasibleScene: the document is well formed but the scene violates a
            geometry invariant.
    """
    workspace_values: Optional[List[float]] = None
    target_values: Optional[List[float]] = None
    gripper_values: Optional[List[float]] = None
    obstacle_values: List[List[float]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        keyword, *fields = line.split()
        expected = _FIELD_COUNTS.get(keyword)
        if expected is None:
            raise ParseError(f"unknown keyword {keyword!r}", line_no)
        if len(fields) != expected:
            raise ParseError(f"'{keyword}' expects {expected} fields, got {len(fields)}", line_no)
        values = _parse_numbers(fields, line_no)

        if workspace_values is None and keyword != "workspace":
            raise ParseError("the first entry must be the workspace line", line_no)

        if keyword == "workspace":
            if workspace_values is not None:
                raise ParseError("duplicate workspace line", line_no)
            workspace_values = values
        elif keyword == "obstacle":
            obstacle_values.append(values)
        elif keyword == "target":
            if target_values is not None:
                raise ParseError("duplicate target line", line_no)
            target_values = values
        else:
            if gripper_values is not None:
                raise ParseError("duplicate gripper line", line_no)
            gripper_values = values

    if workspace_values is None:
        raise ParseError("missing workspace line")
    if target_values is None:
        raise ParseError("missing target line")
    if gripper_values is None:
        raise ParseError("missing gripper line")

    try:
        ws = Workspace(*workspace_values)
        obstacles = tuple(Disk(Point(x, y), r) for x, y, r in obstacle_values)
        target = Disk(Point(target_values[0], target_values[1]), target_values[2])
        gripper = GripperPose(Point(gripper_values[0], gripper_values[1]), gripper_values[2])
    except GeometryError as e:
        raise InfeasibleScene(e.message) from e

    config = Configuration(obstacles, target, gripper)
    problems = feasibility_violations(config, ws)
    if problems:
        raise InfeasibleScene("; ".join(problems))

    logger.debug(f"Parsed scene with {len(obstacles)} obstacles")
    return ws, config


def write_scene(ws: Workspace, config: Configuration) -> str:
    """Serialise a scene; ``parse_scene(write_scene(ws, c))`` reproduces it exactly."""
    f = format_number
    lines = [f"workspace {f(ws.depth_x)} {f(ws.width_y)} {f(ws.arm_width)} {f(ws.gripper_width)}"]
    for d in config.obstacles:
        lines.append(f"obstacle {f(d.center.x)} {f(d.center.y)} {f(d.radius)}")
    t = config.target
    lines.append(f"target {f(t.center.x)} {f(t.center.y)} {f(t.radius)}")
    g = config.gripper
    lines.append(f"gripper {f(g.position.x)} {f(g.position.y)} {f(g.heading)}")
    return "\n".join(lines) + "\n"


def load_scene(path: Union[str, Path]) -> Tuple[Workspace, Configuration]:
    """Load and validate a scene file.

    Raises:
        ParseError: the file cannot be read or is malformed.
        InfeasibleScene: see :func:`parse_scene`.
    """
    path = Path(path)
    try:
        if not path.is_file():
            raise ParseError(f"scene file not found: {path}")
        if path.stat().st_size > MAX_SCENE_BYTES:
            raise ParseError(f"scene file too large (>1MB): {path}")
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"failed to read scene file {path}: {e}") from e

    ws, config = parse_scene(text)
    logger.info(f"Loaded scene from: {path}")
    return ws, config


def save_scene(path: Union[str, Path], ws: Workspace, config: Configuration) -> Path:
    """Write a scene file, creating parent directories as needed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_scene(ws, config), encoding="utf-8")
    return path
