#!/usr/bin/env python3
"""
Configuration loader for petalknot settings
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

OUTPUT_FORMATS = ("text", "json", "csv", "svg")


@dataclass
class ResolveConfig:
    """Perturbation schedule settings"""

    offset_step: float = 1e-3
    tolerance: float = 1e-9
    max_retries: int = 5
    jitter_span: float = 0.05  # seeded offsets are drawn from (-span, span)

    def __post_init__(self):
        """Validate schedule settings"""
        if not 0 < self.offset_step < 0.1:
            raise ValueError(f"Offset step must be in (0, 0.1), got {self.offset_step}")
        if self.tolerance <= 0:
            raise ValueError(f"Tolerance must be positive, got {self.tolerance}")
        if self.max_retries < 0:
            raise ValueError(f"Max retries cannot be negative, got {self.max_retries}")
        if not 0 < self.jitter_span < 0.1:
            raise ValueError(f"Jitter span must be in (0, 0.1), got {self.jitter_span}")


@dataclass
class InvariantsConfig:
    """Invariant computation limits"""

    bracket_budget: int = 24
    cache_size: int = 4096

    def __post_init__(self):
        if self.bracket_budget < 0:
            raise ValueError(f"Bracket budget cannot be negative, got {self.bracket_budget}")
        if self.cache_size < 0:
            raise ValueError(f"Cache size cannot be negative, got {self.cache_size}")


@dataclass
class CensusConfig:
    """Classification settings"""

    p_cap: int = 7
    p_max: int = 9
    workers: int = 1
    checkpoint_dir: str = ".petalknot/checkpoints"

    def __post_init__(self):
        """Validate census limits"""
        for name in ("p_cap", "p_max"):
            value = getattr(self, name)
            if value < 3 or value % 2 == 0:
                raise ValueError(f"{name} must be odd and at least 3, got {value}")
        if self.p_max > 9:
            raise ValueError(f"p_max above 9 is not supported, got {self.p_max}")
        if self.p_cap > self.p_max:
            raise ValueError(f"p_cap {self.p_cap} exceeds p_max {self.p_max}")
        if self.workers < 1:
            raise ValueError(f"Workers must be at least 1, got {self.workers}")


@dataclass
class OutputConfig:
    """Report settings"""

    format: str = "text"
    svg_canvas: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.format not in OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {OUTPUT_FORMATS}, got {self.format!r}")
        if self.svg_canvas < 100:
            raise ValueError(f"SVG canvas must be at least 100 pixels, got {self.svg_canvas}")


@dataclass
class TableConfig:
    """Knot table location; empty means the bundled table"""

    path: Optional[str] = None


@dataclass
class Config:
    """Complete configuration"""

    resolve: ResolveConfig = field(default_factory=ResolveConfig)
    invariants: InvariantsConfig = field(default_factory=InvariantsConfig)
    census: CensusConfig = field(default_factory=CensusConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    table: TableConfig = field(default_factory=TableConfig)


class ConfigLoader:
    """Loads and validates configuration from YAML"""

    ENV_MAPPINGS = {
        "PETALKNOT_BRACKET_BUDGET": ["invariants", "bracket_budget"],
        "PETALKNOT_P_CAP": ["census", "p_cap"],
        "PETALKNOT_P_MAX": ["census", "p_max"],
        "PETALKNOT_WORKERS": ["census", "workers"],
        "PETALKNOT_OUTPUT_FORMAT": ["output", "format"],
        "PETALKNOT_SEED": ["output", "seed"],
        "PETALKNOT_TABLE": ["table", "path"],
    }

    FALLBACK_PATHS = [
        Path.home() / ".petalknot" / "config.yaml",
        Path("/etc/petalknot/config.yaml"),
        Path("config/config.yaml"),
    ]

    def __init__(self):
        self.config_cache: Dict[str, Config] = {}

    def load_config(self, config_path: Optional[str] = None) -> Config:
        """Load configuration from YAML file with environment variable support"""
        env_config_path = os.environ.get("PETALKNOT_CONFIG_PATH")
        if env_config_path:
            path = Path(env_config_path)
        elif config_path:
            path = Path(config_path)
        else:
            path = next((p for p in self.FALLBACK_PATHS if p.exists()), None)
            if path is None:
                return self._parse_config(self._apply_env_overrides({}))

        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {path}")

        cache_key = f"{path}:{path.stat().st_mtime}"
        if cache_key in self.config_cache:
            return self.config_cache[cache_key]

        try:
            with open(path, "r") as f:
                raw_config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in config file: {e}")
        except Exception as e:
            raise IOError(f"Error reading config file {path}: {e}")
        if not isinstance(raw_config, dict):
            raise ValueError(f"Config file {path} must contain a mapping")

        config = self._parse_config(self._apply_env_overrides(raw_config))
        self.config_cache.clear()
        self.config_cache[cache_key] = config
        return config

    def _apply_env_overrides(self, config: dict) -> dict:
        """Apply environment variable overrides to configuration"""
        for env_var, config_path in self.ENV_MAPPINGS.items():
            env_value: Any = os.environ.get(env_var)
            if env_value is None or env_value == "":
                continue
            if env_value.lstrip("-").isdigit():
                env_value = int(env_value)

            current = config
            for key in config_path[:-1]:
                current = current.setdefault(key, {})
            current[config_path[-1]] = env_value
        return config

    def _parse_config(self, raw_config: Dict[str, Any]) -> Config:
        """Parse raw configuration into typed dataclasses"""
        try:
            table = dict(raw_config.get("table") or {})
            if table.get("path") is not None:
                table["path"] = str(table["path"]) or None
            return Config(
                resolve=ResolveConfig(**(raw_config.get("resolve") or {})),
                invariants=InvariantsConfig(**(raw_config.get("invariants") or {})),
                census=CensusConfig(**(raw_config.get("census") or {})),
                output=OutputConfig(**(raw_config.get("output") or {})),
                table=TableConfig(**table),
            )
        except TypeError as e:
            raise ValueError(f"Unknown configuration key: {e}")

    def validate_config(self, config: Config) -> List[str]:
        """Validate configuration and return list of warnings"""
        warnings = []
        if config.census.p_cap == 9:
            warnings.append("p_cap 9 classifies 40,320 permutations; expect a long run")
        if config.census.workers > (os.cpu_count() or 1):
            warnings.append(f"{config.census.workers} workers exceeds the CPU count")
        if config.invariants.bracket_budget > 30:
            warnings.append("Bracket budgets above 30 crossings can exhaust memory")
        if config.table.path and not Path(config.table.path).exists():
            warnings.append(f"Knot table not found: {config.table.path}")
        return warnings


def load_config(config_path: Optional[str] = None) -> Config:
    """Load configuration - convenience function"""
    return ConfigLoader().load_config(config_path)


def get_default_config() -> Config:
    """Configuration with every default and no environment overrides"""
    default_yaml = """
resolve:
  offset_step: 0.001
  tolerance: 1.0e-9
  max_retries: 5
  jitter_span: 0.05
invariants:
  bracket_budget: 24
  cache_size: 4096
census:
  p_cap: 7
  p_max: 9
  workers: 1
  checkpoint_dir: ".petalknot/checkpoints"
output:
  format: "text"
  svg_canvas: 1000
  seed: 0
table:
  path: null
"""
    return ConfigLoader()._parse_config(yaml.safe_load(default_yaml))
