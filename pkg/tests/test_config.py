"""Tests for settings sources and validation."""

from pathlib import Path

import pytest

from lentparticle.config import Settings, load_settings, read_config_file
from lentparticle.core.errors import ConfigurationError


def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


class TestDefaults:
    """Tests for built-in defaults."""

    def test_defaults(self, monkeypatch):
        """Test the default run."""
        monkeypatch.delenv("LENTPARTICLE_EXPERIMENT__SEED", raising=False)
        settings = load_settings()
        assert settings.measure.name == "stable"
        assert settings.experiment.T == 1.0
        assert settings.experiment.seed == 42
        assert settings.experiment.z_max == 4.0
        assert settings.output.formats == ["table", "jsonl", "csv"]
        assert settings.log_level == "INFO"


class TestPrecedence:
    """Tests for flags > file > environment > defaults."""

    def test_environment_over_defaults(self, monkeypatch):
        """Test LENTPARTICLE_* variables apply to nested sections."""
        monkeypatch.setenv("LENTPARTICLE_EXPERIMENT__SEED", "7")
        assert load_settings().experiment.seed == 7

    def test_file_over_environment(self, monkeypatch, tmp_path):
        """Test the config file beats the environment and keeps other env values."""
        monkeypatch.setenv("LENTPARTICLE_EXPERIMENT__SEED", "7")
        monkeypatch.setenv("LENTPARTICLE_EXPERIMENT__N_MARKS", "123")
        path = _write(tmp_path, "[experiment]\nseed = 11\nT = 2.0\n")
        settings = load_settings(path)
        assert settings.experiment.seed == 11
        assert settings.experiment.T == 2.0
        assert settings.experiment.n_marks == 123

    def test_flags_over_file(self, tmp_path):
        """Test command-line overrides win."""
        path = _write(tmp_path, "[experiment]\nseed = 11\n\n[measure]\nname = 'uniform'\n")
        settings = load_settings(path, {"experiment": {"seed": 13}})
        assert settings.experiment.seed == 13
        assert settings.measure.name == "uniform"

    def test_log_level_normalised(self):
        """Test log levels are case-insensitive."""
        assert load_settings(overrides={"log_level": "debug"}).log_level == "DEBUG"


class TestValidation:
    """Tests for rejected configurations."""

    def test_missing_file(self, tmp_path):
        """Test a missing config file."""
        with pytest.raises(ConfigurationError, match="not found"):
            read_config_file(tmp_path / "absent.toml")

    def test_malformed_file(self, tmp_path):
        """Test invalid TOML."""
        path = _write(tmp_path, "[experiment\nseed = 1\n")
        with pytest.raises(ConfigurationError, match="Malformed"):
            load_settings(path)

    def test_unknown_section(self, tmp_path):
        """Test sections outside the schema."""
        path = _write(tmp_path, "[server]\nport = 8000\n")
        with pytest.raises(ConfigurationError, match="Unknown config sections"):
            load_settings(path)

    def test_unknown_key(self, tmp_path):
        """Test keys outside a section's schema."""
        path = _write(tmp_path, "[experiment]\nsamples = 10\n")
        with pytest.raises(ConfigurationError, match="Invalid settings"):
            load_settings(path)

    @pytest.mark.parametrize(
        "overrides",
        [
            {"log_level": "LOUD"},
            {"measure": {"trunc_a": 1.0, "trunc_b": 0.5}},
            {"measure": {"alpha": 2.0}},
            {"experiment": {"T": -1.0}},
            {"experiment": {"n_paths": 0}},
            {"experiment": {"bins": 0}},
            {"output": {"formats": ["xml"]}},
        ],
    )
    def test_invalid_values(self, overrides):
        """Test out-of-range values."""
        with pytest.raises(ConfigurationError):
            load_settings(overrides=overrides)

    def test_zero_horizon_allowed(self):
        """Test T = 0 is a valid horizon."""
        assert Settings(experiment={"T": 0.0}).experiment.T == 0.0
