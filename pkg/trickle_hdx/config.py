"""Configuration management for Trickle HDX

This module provides platform-aware configuration management using platformdirs
so that the configuration file and run logs land in the appropriate locations
across operating systems. Numerical tolerances live here too; library functions
take them as explicit arguments and default to the module constants below.
"""

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

import platformdirs
import yaml

from trickle_hdx.errors import BadParams

APP_NAME = "trickle_hdx"

# Dependency-graph edges need eps > ZERO_TOL.
ZERO_TOL = 1e-9
EIG_TOL = 1e-10
PSD_TOL = 1e-8
MARGIN_TOL = 1e-12
DELTA_PRECISION = 1e-9
DENSE_LIMIT = 2000
MAX_SWEEP_TYPES = 17
ENUMERATION_BUDGET = 10**7


@dataclass
class AnalysisConfig:
    """Configuration for analysis runs and the CLI."""

    name: str = "Trickle HDX"

    # Logging configuration
    log_level: str = "INFO"
    log_retention_days: int = 30
    log_to_file: bool = True

    # Numerical tolerances
    zero_tolerance: float = ZERO_TOL
    eig_tolerance: float = EIG_TOL
    psd_tolerance: float = PSD_TOL
    margin_tolerance: float = MARGIN_TOL
    delta_precision: float = DELTA_PRECISION

    # Size guards
    dense_limit: int = DENSE_LIMIT
    max_sweep_types: int = MAX_SWEEP_TYPES
    enumeration_budget: int = ENUMERATION_BUDGET

    # Execution
    workers: int = 1
    memoize_links: bool = False

    # Platform-aware paths
    config_dir: Optional[Path] = None
    log_dir: Optional[Path] = None

    # File paths (computed from directories)
    config_file_path: Optional[Path] = None
    log_file_path: Optional[Path] = None

    def __post_init__(self) -> None:
        """Initialize platform-aware paths after dataclass creation."""
        if self.config_dir is None:
            self.config_dir = Path(platformdirs.user_config_dir(APP_NAME))
        if self.log_dir is None:
            self.log_dir = Path(platformdirs.user_log_dir(APP_NAME))

        if self.config_file_path is None:
            self.config_file_path = self.config_dir / "config.yaml"
        if self.log_file_path is None:
            self.log_file_path = self.log_dir / "trickle_hdx.log"

        env_level = os.getenv("LOG_LEVEL")
        if env_level:
            self.log_level = env_level.upper()

    def validate(self) -> "AnalysisConfig":
        """Reject nonpositive tolerances, worker counts and sweep caps."""
        for name in (
            "zero_tolerance",
            "eig_tolerance",
            "psd_tolerance",
            "margin_tolerance",
            "delta_precision",
        ):
            if not getattr(self, name) > 0:
                raise BadParams(f"{name} must be positive, got {getattr(self, name)}")
        if self.workers < 1:
            raise BadParams(f"workers must be at least 1, got {self.workers}")
        if self.dense_limit < 1 or self.enumeration_budget < 1:
            raise BadParams("dense_limit and enumeration_budget must be positive")
        if self.max_sweep_types < 2:
            raise BadParams(
                f"max_sweep_types must be at least 2, got {self.max_sweep_types}"
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary for serialization."""
        skip = {"config_dir", "log_dir", "config_file_path", "log_file_path"}
        return {
            f.name: getattr(self, f.name) for f in fields(self) if f.name not in skip
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnalysisConfig":
        """Create configuration from dictionary; unknown keys are ignored."""
        known = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in data.items() if k in known}
        for key in ("config_dir", "log_dir", "config_file_path", "log_file_path"):
            if kwargs.get(key) is not None:
                kwargs[key] = Path(kwargs[key])
        return cls(**kwargs)

    def save(self, path: Optional[Path] = None) -> Path:
        """Save configuration to file."""
        target = Path(path) if path is not None else self.config_file_path
        assert target is not None
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w") as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, sort_keys=True)
        return target

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "AnalysisConfig":
        """Load configuration from file, falling back to defaults if absent."""
        config = cls()
        source = Path(path) if path is not None else config.config_file_path
        assert source is not None

        if source.exists():
            with open(source, "r") as f:
                data = yaml.safe_load(f)
            if data:
                loaded = cls.from_dict(data)
                loaded.config_dir = config.config_dir
                loaded.log_dir = loaded.log_dir or config.log_dir
                loaded.config_file_path = source
                return loaded.validate()
        elif path is not None:
            raise BadParams(f"configuration file not found: {source}")

        return config

    def __str__(self) -> str:
        """String representation of configuration."""
        return (
            f"AnalysisConfig(log_level='{self.log_level}', workers={self.workers}, "
            f"zero_tolerance={self.zero_tolerance:g})"
        )


def get_platform_info() -> Dict[str, str]:
    """Get platform-specific directory information."""
    return {
        "config_dir": str(platformdirs.user_config_dir(APP_NAME)),
        "log_dir": str(platformdirs.user_log_dir(APP_NAME)),
        "cache_dir": str(platformdirs.user_cache_dir(APP_NAME)),
    }
