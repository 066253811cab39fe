# SPDX-License-Identifier: MIT

__all__ = ["PLANNER_NAMES", "PlannerFactory", "get_planner", "run_planner"]

import difflib
import logging
from typing import Callable, Dict, Optional, Tuple

try:
    from .baselines import plan_grtc, plan_ooa, plan_phia, plan_phis
    from .config import PlannerConfig
    from .exceptions import ConfigurationError
    from .geometry import Configuration, Workspace
    from .mcts import Plan, plan_phim
except ImportError:
    from baselines import plan_grtc, plan_ooa, plan_phia, plan_phis
    from config import PlannerConfig
    from exceptions import ConfigurationError
    from geometry import Configuration, Workspace
    from mcts import Plan, plan_phim

logger = logging.getLogger(__name__)

PlannerFunction = Callable[[Configuration, Workspace, PlannerConfig], Plan]

# Canonical method order: CSV rows, summaries and the CLI choice list follow it.
PLANNER_NAMES: Tuple[str, ...] = ("phim", "phia", "phis", "ooa", "grtc")


class PlannerFactory:
    """Maps method names to planner functions with a uniform signature."""

    def __init__(self):
        self._planners: Dict[str, PlannerFunction] = {
            "phim": plan_phim,
            "phia": plan_phia,
            "phis": plan_phis,
            "ooa": plan_ooa,
            "grtc": plan_grtc,
        }

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self._planners)

    def register(self, name: str, planner: PlannerFunction) -> None:
        """Add or replace a planner."""
        self._planners[name] = planner

    def get(self, name: str) -> PlannerFunction:
        """Look up a planner by name.

        Raises:
            ConfigurationError: unknown name (with the closest known name, if any).
        """
        try:
            return self._planners[name]
        except KeyError:
            message = f"Planner '{name}' not found"
            close = difflib.get_close_matches(name, self._planners, n=1)
            if close:
                message += f". Did you mean '{close[0]}'?"
            raise ConfigurationError(message) from None


_default_factory = PlannerFactory()


def get_planner(name: str) -> PlannerFunction:
    return _default_factory.get(name)


def run_planner(name: str, config: Configuration, ws: Workspace, params: Optional[PlannerConfig] = None) -> Plan:
    """Run the named planner; exceptions from the planner propagate unchanged."""
    planner = get_planner(name)
    logger.debug(f"Running planner {name}")
    return planner(config, ws, params or PlannerConfig())
