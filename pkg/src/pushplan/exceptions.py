# SPDX-License-Identifier: MIT

__all__ = [
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
]

from typing import Any, Optional

# Exit codes shared with the CLI.
EXIT_PLANNER_FAILURE = 1
EXIT_USAGE = 2


class PushPlanError(Exception):
    """Base exception for pushplan errors."""

    def __init__(self, message: str, code: int = EXIT_PLANNER_FAILURE):
        super().__init__(message)
        self.message = message
        self.code = code

    def to_dict(self) -> dict:
        """Convert to a plain error record."""
        return {"error": type(self).__name__, "code": self.code, "message": self.message}


class ParseError(PushPlanError):
    """Raised when a scene or plan document is malformed."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"Parse Error{where}: {message}", EXIT_USAGE)


class InfeasibleScene(PushPlanError):
    """Raised when a well-formed scene violates a geometry invariant."""

    def __init__(self, message: str):
        super().__init__(f"Infeasible Scene: {message}", EXIT_USAGE)


class GeometryError(PushPlanError):
    """Raised when a geometry value is constructed with invalid extents."""

    def __init__(self, message: str):
        super().__init__(f"Geometry Error: {message}", EXIT_USAGE)


class EmptyInput(PushPlanError):
    """Raised when an operation needs at least one input element."""

    def __init__(self, message: str):
        super().__init__(f"Empty Input: {message}", EXIT_USAGE)


class NoValidRegion(PushPlanError):
    """Raised when no incidence angle yields a path region between the walls."""

    def __init__(self, message: str):
        super().__init__(f"No Valid Region: {message}")


class EmptyRegion(PushPlanError):
    """Raised when the path region holds no obstacle to push."""

    def __init__(self, message: str = "no obstacle inside the path region"):
        super().__init__(f"Empty Region: {message}")


class NoisyInfeasible(PushPlanError):
    """Raised when noise injection cannot find a feasible perturbation."""

    def __init__(self, message: str):
        super().__init__(f"Noisy Infeasible: {message}")


class NoPlanFound(PushPlanError):
    """Raised when a planner ends without reaching the goal.

    The best-effort plan (with its statistics) is kept on ``plan``.
    """

    def __init__(self, message: str, plan: Any = None):
        super().__init__(f"No Plan Found: {message}")
        self.plan = plan


class TimeBudgetExceeded(NoPlanFound):
    """Raised when a planner runs out of its wall-clock budget."""

    def __init__(self, message: str, plan: Any = None):
        super().__init__(f"time budget exceeded: {message}", plan)


class InvalidStart(PushPlanError):
    """Raised when a planner is started on an infeasible or already solved scene."""

    def __init__(self, message: str):
        super().__init__(f"Invalid Start: {message}", EXIT_USAGE)


class GenerationFailed(PushPlanError):
    """Raised when the scene generator exhausts its rejection budget."""

    def __init__(self, message: str):
        super().__init__(f"Generation Failed: {message}")


class ConfigurationError(PushPlanError):
    """Raised when configuration is invalid or missing."""

    def __init__(self, message: str):
        super().__init__(f"Configuration Error: {message}", EXIT_USAGE)
