# SPDX-License-Identifier: MIT

"""SVG drawings of a shelf scene, its path region and a plan's pushes."""

__all__ = ["PIXELS_PER_METRE", "MARGIN_PX", "render_svg"]

import logging
import math
from typing import List, Optional, Sequence, Tuple

import svgwrite

try:
    from .exceptions import NoValidRegion
    from .geometry import Configuration, Point, Workspace
    from .mcts import Plan
    from .path_region import compute_path_region
    from .push_sim import StraightPush, Sweep
except ImportError:
    from exceptions import NoValidRegion
    from geometry import Configuration, Point, Workspace
    from mcts import Plan
    from path_region import compute_path_region
    from push_sim import StraightPush, Sweep

logger = logging.getLogger(__name__)

PIXELS_PER_METRE = 500.0
MARGIN_PX = 10.0
_ARROW_HEAD_PX = 8.0

_WALL = {"stroke": "black", "stroke_width": 3, "fill": "none"}
_OBSTACLE = {"fill": "#b0b0b0", "stroke": "#404040", "stroke_width": 1}
_TARGET = {"fill": "#e4572e", "stroke": "#8c1c13", "stroke_width": 2}
_REGION = {"fill": "#4c9be8", "fill_opacity": 0.2, "stroke": "#1f5f9e", "stroke_width": 1, "stroke_dasharray": "4,3"}
_GRIPPER = {"fill": "#2e2e2e"}
_ARROW = {"stroke": "#1b7f3b", "stroke_width": 2}


class _Canvas:
    """World metres to SVG pixels; the north wall is drawn at the top."""

    def __init__(self, ws: Workspace):
        self.ws = ws

    def point(self, p: Sequence[float]) -> Tuple[float, float]:
        return (
            round(MARGIN_PX + p[0] * PIXELS_PER_METRE, 2),
            round(MARGIN_PX + (self.ws.width_y - p[1]) * PIXELS_PER_METRE, 2),
        )

    def length(self, metres: float) -> float:
        return round(metres * PIXELS_PER_METRE, 2)

    @property
    def size(self) -> Tuple[float, float]:
        return (
            round(2 * MARGIN_PX + self.ws.depth_x * PIXELS_PER_METRE, 2),
            round(2 * MARGIN_PX + self.ws.width_y * PIXELS_PER_METRE, 2),
        )


def _walls(dwg: svgwrite.Drawing, canvas: _Canvas) -> None:
    ws = canvas.ws
    # South, back and north walls; the open face (x = 0) is left undrawn.
    corners = [(0.0, 0.0), (ws.depth_x, 0.0), (ws.depth_x, ws.width_y), (0.0, ws.width_y)]
    dwg.add(dwg.polyline([canvas.point(c) for c in corners], class_="walls", **_WALL))


def _arrow(dwg: svgwrite.Drawing, canvas: _Canvas, start: Point, end: Point):
    a, b = canvas.point(start), canvas.point(end)
    group = dwg.g(class_="push-action")
    group.add(dwg.line(a, b, **_ARROW))
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dx, dy)
    if norm > 0:
        ux, uy = dx / norm, dy / norm
        base = (b[0] - ux * _ARROW_HEAD_PX, b[1] - uy * _ARROW_HEAD_PX)
        half = _ARROW_HEAD_PX / 2
        head = [
            b,
            (round(base[0] - uy * half, 2), round(base[1] + ux * half, 2)),
            (round(base[0] + uy * half, 2), round(base[1] - ux * half, 2)),
        ]
        group.add(dwg.polygon(head, fill=_ARROW["stroke"]))
    return group


def _motion_segments(config: Configuration, plan: Plan) -> List[Tuple[Point, Point]]:
    segments = []
    before = config
    for motion, after in zip(plan.motions, plan.states):
        if isinstance(motion, Sweep):
            mid = (motion.corridor[0] + motion.corridor[1]) / 2.0
            segments.append((motion.from_frame((mid, motion.start_y)), motion.from_frame((mid, motion.end_front))))
        elif isinstance(motion, StraightPush):
            origin = before.obstacles[motion.obstacle].center
            segments.append((origin, Point(origin.x + motion.dx, origin.y + motion.dy)))
        before = after
    return segments


def render_svg(
    ws: Workspace,
    config: Optional[Configuration] = None,
    plan: Optional[Plan] = None,
    region_overlay: bool = True,
) -> str:
    """SVG 1.1 document of the scene.

    Draws the walls, then (when a configuration is given) the path region,
    obstacles, target and gripper, then one ``push-action`` arrow per plan
    step. Identical input gives identical bytes.
    """
    canvas = _Canvas(ws)
    width, height = canvas.size
    dwg = svgwrite.Drawing(size=(width, height), profile="full", debug=False)
    dwg.viewbox(0, 0, width, height)
    _walls(dwg, canvas)

    if config is None:
        return dwg.tostring()

    if region_overlay:
        try:
            region = compute_path_region(config, ws)
            dwg.add(dwg.polygon([canvas.point(c) for c in region.world_polygon()], class_="path-region", **_REGION))
        except NoValidRegion as e:
            logger.warning(f"Path region not drawn: {e.message}")

    for d in config.obstacles:
        dwg.add(dwg.circle(canvas.point(d.center), canvas.length(d.radius), class_="obstacle", **_OBSTACLE))
    t = config.target
    dwg.add(dwg.circle(canvas.point(t.center), canvas.length(t.radius), class_="target", **_TARGET))
    g = canvas.point(config.gripper.position)
    dwg.add(dwg.rect((g[0] - 4, g[1] - 4), (8, 8), class_="gripper", **_GRIPPER))

    if plan is not None:
        for start, end in _motion_segments(config, plan):
            dwg.add(_arrow(dwg, canvas, start, end))

    return dwg.tostring()
