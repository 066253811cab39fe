# SPDX-License-Identifier: MIT

"""Configuration management using pydantic-settings for validation."""

__all__ = ["PlannerConfig", "BenchConfig", "load_config_from_file"]

import json
import math
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import yaml
from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

try:
    from .exceptions import ConfigurationError
except ImportError:
    from exceptions import ConfigurationError


def load_config_from_file(config_path: Union[str, Path]) -> Dict[str, Any]:
    """Load configuration from YAML or JSON file.

    Args:
        config_path: Path to configuration file (.yaml, .yml, or .json)

    Returns:
        Dictionary of configuration values

    Raises:
        ConfigurationError: If file cannot be loaded or parsed
    """
    path = Path(config_path)

    if not path.exists():
        raise ConfigurationError(f"Configuration file not found: {config_path}")

    suffix = path.suffix.lower()
    if suffix not in (".yaml", ".yml", ".json"):
        raise ConfigurationError(f"Unsupported config file format: {path.suffix}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) if suffix in (".yaml", ".yml") else json.load(f)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Failed to parse config file: {e}") from e
    except OSError as e:
        raise ConfigurationError(f"Failed to read config file: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file must contain a mapping, got {type(data).__name__}")
    return data


class _FileSettings(BaseSettings):
    @classmethod
    def from_file(cls, config_path: Union[str, Path]):
        """Load settings from a YAML or JSON file.

        File values are passed as init values, so they take precedence over
        environment variables. Keys may be field names or ``PUSHPLAN_*`` names.
        """
        file_config = load_config_from_file(config_path)
        try:
            return cls(**file_config)
        except ValueError as e:
            raise ConfigurationError(f"Invalid configuration in {config_path}: {e}") from e

    def with_overrides(self, **overrides: Any):
        """Copy with the given non-``None`` fields replaced (and re-validated)."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return type(self)(**values)
        except ValueError as e:
            raise ConfigurationError(f"Invalid parameters: {e}") from e


class PlannerConfig(_FileSettings):
    """Planner parameters shared by all five methods.

    Configuration can be loaded from:
    1. Environment variables (e.g., PUSHPLAN_NU, PUSHPLAN_MAX_ITERATIONS)
    2. .env file in the current directory
    3. YAML/JSON config file (via from_file())

    Example:
        >>> config = PlannerConfig(nu=0.02, seed=7)
        >>> config.max_depth
        12
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
        frozen=True,
    )

    nu: float = Field(default=0.015, gt=0, description="Persistence gap (m)", alias="PUSHPLAN_NU")
    h: float = Field(default=0.05, ge=0, description="Smallest usable cluster radius (m)", alias="PUSHPLAN_H")
    c: float = Field(default=math.sqrt(2.0), ge=0, description="UCB exploration constant", alias="PUSHPLAN_C")
    max_iterations: int = Field(default=400, ge=1, description="MCTS iteration cap", alias="PUSHPLAN_MAX_ITERATIONS")
    time_limit_s: float = Field(default=500.0, gt=0, description="Planning time cap (s)", alias="PUSHPLAN_TIME_LIMIT")
    max_depth: int = Field(default=12, ge=1, description="Longest plan considered", alias="PUSHPLAN_MAX_DEPTH")
    stabilization_window: int = Field(
        default=25,
        ge=1,
        description="Iterations the best plan must stay unchanged before MCTS stops early",
        alias="PUSHPLAN_STABILIZATION_WINDOW",
    )
    seed: int = Field(default=0, description="Seed for randomized planners", alias="PUSHPLAN_SEED")
    debug: bool = Field(default=False, description="Enable debug logging", alias="PUSHPLAN_DEBUG")
    timing: bool = Field(
        default=False, description="Report wall-clock seconds in plan and CSV output", alias="PUSHPLAN_TIMING"
    )


class BenchConfig(_FileSettings):
    """Scene-generation and robustness-evaluation settings for ``bench``."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
        frozen=True,
    )

    count: int = Field(default=50, ge=1, alias="PUSHPLAN_BENCH_COUNT")
    noise_bound: float = Field(default=0.03, ge=0, description="Execution noise radius (m)", alias="PUSHPLAN_NOISE")
    noise_trials: int = Field(default=5, ge=0, alias="PUSHPLAN_NOISE_TRIALS")
    obstacle_count: int = Field(default=7, ge=0, alias="PUSHPLAN_OBSTACLE_COUNT")
    obstacle_radius_min: float = Field(default=0.035, gt=0, alias="PUSHPLAN_OBSTACLE_RADIUS_MIN")
    obstacle_radius_max: float = Field(default=0.035, gt=0, alias="PUSHPLAN_OBSTACLE_RADIUS_MAX")
    depth_x: float = Field(default=0.8, gt=0, alias="PUSHPLAN_DEPTH_X")
    width_y: float = Field(default=0.7, gt=0, alias="PUSHPLAN_WIDTH_Y")
    arm_width: float = Field(default=0.16, gt=0, alias="PUSHPLAN_ARM_WIDTH")
    gripper_width: float = Field(default=0.05, gt=0, alias="PUSHPLAN_GRIPPER_WIDTH")
    target_radius: float = Field(default=0.035, gt=0, alias="PUSHPLAN_TARGET_RADIUS")
    workers: int = Field(default=1, ge=1, description="Worker processes for scene evaluation", alias="PUSHPLAN_WORKERS")
    seed: int = Field(default=0, alias="PUSHPLAN_BENCH_SEED")

    @model_validator(mode="after")
    def check_radius_range(self) -> "BenchConfig":
        if self.obstacle_radius_min > self.obstacle_radius_max:
            raise ValueError(
                f"obstacle_radius_min ({self.obstacle_radius_min}) exceeds "
                f"obstacle_radius_max ({self.obstacle_radius_max})"
            )
        return self

    @property
    def obstacle_radius_range(self) -> Tuple[float, float]:
        return (self.obstacle_radius_min, self.obstacle_radius_max)
