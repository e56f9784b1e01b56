"""Application configuration using Pydantic Settings.

Sources, highest precedence first: command-line overrides, the TOML config
file, ``LENTPARTICLE_*`` environment variables (and ``.env``), built-in defaults.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
from pydantic_settings import BaseSettings, SettingsConfigDict, TomlConfigSettingsSource

from lentparticle.core.errors import ConfigurationError

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class MeasureSettings(BaseModel):
    """``[measure]``: the truncated Lévy measure σ."""

    model_config = ConfigDict(extra="forbid")

    name: Literal["stable", "uniform"] = Field(
        "stable", description="Built-in measure: symmetric stable-like or uniform"
    )
    alpha: float = Field(
        1.0, gt=0.0, lt=2.0, description="Stability index of the stable-like density"
    )
    trunc_a: float = Field(0.1, gt=0.0, description="Truncation radius a > 0")
    trunc_b: float = Field(1.0, gt=0.0, description="Largest jump size b")
    intensity: float = Field(5.0, gt=0.0, description="Total mass λ of σ")

    @model_validator(mode="after")
    def _check_truncation(self) -> "MeasureSettings":
        if self.trunc_a >= self.trunc_b:
            raise ValueError(f"trunc_a={self.trunc_a} must be smaller than trunc_b={self.trunc_b}")
        return self


class ExperimentSettings(BaseModel):
    """``[experiment]``: sizes, seed and thresholds."""

    model_config = ConfigDict(extra="forbid")

    T: float = Field(1.0, ge=0.0, description="Time horizon")
    n_paths: int = Field(100_000, ge=1, description="Configurations per Monte Carlo check")
    n_marks: int = Field(100_000, ge=1, description="Mark draws per configuration")
    n_mark_configs: int = Field(50, ge=1, description="Configurations for mark-resampling checks")
    n_inner: int = Field(8, ge=1, description="Lent particles per path for the creation identity")
    n_pathwise: int = Field(1000, ge=1, description="Configurations for pathwise checks")
    seed: int = Field(42, ge=0, description="Master seed")
    z_max: float = Field(4.0, gt=0.0, description="Pass threshold on z-scores")
    jobs: int | None = Field(None, ge=1, description="Worker processes; default all cores")
    bins: int = Field(50, gt=0, description="Histogram bins for the density report")


class FunctionalSettings(BaseModel):
    """``[functional]``: which functional ``simulate`` and ``density`` evaluate."""

    model_config = ConfigDict(extra="forbid")

    family: Literal["stochastic_integral", "linear", "exponential"] = "stochastic_integral"
    phi_name: str = Field("identity", description="Name in the function catalog")
    phi_coeffs: list[float] | None = Field(
        None, description="Polynomial coefficients, lowest degree first; overrides phi_name"
    )


class OutputSettings(BaseModel):
    """``[output]``: where and how results are written."""

    model_config = ConfigDict(extra="forbid")

    dir: Path = Field(Path("results"), description="Output directory")
    formats: list[Literal["table", "jsonl", "csv"]] = Field(
        default_factory=lambda: ["table", "jsonl", "csv"]
    )


class Settings(BaseSettings):
    """Run settings assembled from file, environment and flags."""

    measure: MeasureSettings = Field(default_factory=MeasureSettings)
    experiment: ExperimentSettings = Field(default_factory=ExperimentSettings)
    functional: FunctionalSettings = Field(default_factory=FunctionalSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    # Logging Configuration
    log_level: str = "INFO"
    json_logs: bool = False

    @field_validator("log_level")
    @classmethod
    def _check_log_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}, got '{value}'")
        return level

    model_config = SettingsConfigDict(
        env_prefix="LENTPARTICLE_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


def _deep_merge(base: dict[str, Any], updates: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def read_config_file(config_path: str | Path) -> dict[str, Any]:
    """
    Read a TOML config file into a nested dict.

    Args:
        config_path: Path to the file

    Returns:
        Section dictionaries keyed by section name

    Raises:
        ConfigurationError: If the file is missing, malformed or has unknown sections
    """
    path = Path(config_path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}")

    try:
        data = TomlConfigSettingsSource(Settings, toml_file=path)()
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"Malformed config file {path}: {e}") from e

    unknown = set(data) - set(Settings.model_fields)
    if unknown:
        raise ConfigurationError(f"Unknown config sections in {path}: {', '.join(sorted(unknown))}")
    return data


def load_settings(
    config_path: str | Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> Settings:
    """
    Build settings with precedence flags > file > environment > defaults.

    Args:
        config_path: Optional TOML config file
        overrides: Nested dict of command-line values, e.g. ``{"experiment": {"seed": 7}}``

    Returns:
        Validated settings

    Raises:
        ConfigurationError: On any invalid source
    """
    data = read_config_file(config_path) if config_path is not None else {}
    merged = _deep_merge(data, overrides or {})
    try:
        return Settings(**merged)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid settings: {e}") from e
