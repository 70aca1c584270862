"""Configuration loading tests."""

import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from petalknot.config_loader import (
    CensusConfig,
    ConfigLoader,
    OutputConfig,
    ResolveConfig,
    get_default_config,
    load_config,
)


def test_default_config_loads():
    """Default config.yaml loads without errors."""
    config = load_config("config/config.yaml")
    assert config is not None
    assert hasattr(config, "resolve")
    assert hasattr(config, "census")
    assert hasattr(config, "table")


def test_config_structure():
    """Config has expected values."""
    config = get_default_config()
    assert config.invariants.bracket_budget == 24
    assert config.census.p_cap == 7
    assert config.output.format == "text"
    assert config.table.path is None


class TestValidation:
    """Dataclass validation rejects bad settings."""

    def test_even_p_cap(self):
        with pytest.raises(ValueError, match="p_cap must be odd"):
            CensusConfig(p_cap=6)

    def test_p_max_limit(self):
        with pytest.raises(ValueError, match="p_max above 9"):
            CensusConfig(p_max=11)

    def test_cap_above_max(self):
        with pytest.raises(ValueError, match="exceeds p_max"):
            CensusConfig(p_cap=9, p_max=7)

    def test_workers(self):
        with pytest.raises(ValueError, match="Workers"):
            CensusConfig(workers=0)

    def test_output_format(self):
        with pytest.raises(ValueError, match="Output format"):
            OutputConfig(format="yaml")

    def test_offset_step(self):
        with pytest.raises(ValueError, match="Offset step"):
            ResolveConfig(offset_step=0.5)


class TestLoader:
    def test_yaml_file(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "config.yaml"
            path.write_text("census:\n  p_cap: 5\n  workers: 2\noutput:\n  format: json\n")
            config = ConfigLoader().load_config(str(path))
            assert config.census.p_cap == 5
            assert config.census.workers == 2
            assert config.output.format == "json"
            assert config.invariants.bracket_budget == 24

    def test_environment_overrides(self):
        env = {"PETALKNOT_BRACKET_BUDGET": "30", "PETALKNOT_OUTPUT_FORMAT": "csv"}
        with patch.dict(os.environ, env):
            config = load_config("config/config.yaml")
        assert config.invariants.bracket_budget == 30
        assert config.output.format == "csv"

    def test_config_path_variable_wins(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "other.yaml"
            path.write_text("output:\n  seed: 11\n")
            with patch.dict(os.environ, {"PETALKNOT_CONFIG_PATH": str(path)}):
                assert load_config("config/config.yaml").output.seed == 11

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            load_config("/nonexistent/config.yaml")

    def test_invalid_yaml(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "bad.yaml"
            path.write_text("census: [unclosed\n")
            with pytest.raises(ValueError, match="Invalid YAML"):
                load_config(str(path))

    def test_unknown_key(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "extra.yaml"
            path.write_text("census:\n  colour: red\n")
            with pytest.raises(ValueError, match="Unknown configuration key"):
                load_config(str(path))

    def test_validate_config_warnings(self):
        config = get_default_config()
        config.census.workers = 10_000
        config.invariants.bracket_budget = 40
        warnings = ConfigLoader().validate_config(config)
        assert any("CPU count" in w for w in warnings)
        assert any("exhaust memory" in w for w in warnings)
