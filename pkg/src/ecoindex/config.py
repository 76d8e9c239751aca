"""Run-configuration schema for the batch CLI.

A run is described by one JSON document. Unknown keys are rejected
everywhere so a typo cannot silently drop a parameter. Relative paths in
the document resolve against the directory containing the config file.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

INDEX_KINDS = ("EI", "H", "H_expanded", "EH")


class ConfigError(ValueError):
    """Raised for unreadable, unparseable, or schema-violating configs."""


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class WeightsConfig(StrictModel):
    matrices: list[str] = Field(default_factory=list)
    ri_table: dict[int, float] | None = None


class WeatherSourceConfig(StrictModel):
    path: str
    label: str = "station"
    columns: dict[str, str] | None = Field(default=None, alias="schema")


class FeatureParamsConfig(StrictModel):
    u_s: float = 5.0
    epsilon: float = 0.02
    bedding_factor: float = 1.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    x4: float = 0.0
    dewp_window_days: int = 1
    visibility_mode: Literal["log_extinction", "mor"] = "log_extinction"
    absolute_deltas: bool = False


class FeaturesConfig(StrictModel):
    weather: WeatherSourceConfig
    params: FeatureParamsConfig = Field(default_factory=FeatureParamsConfig)


class IndexConfig(StrictModel):
    which: Literal["EI", "H", "H_expanded", "EH"]
    label: str = ""
    inputs: dict[str, float] | None = None
    weights: list[float] | None = None
    from_features: str | None = None
    period: Literal["annual", "monthly"] = "annual"
    months: list[int] | None = None
    extras: dict[str, float] | None = None
    threshold: float | None = None
    direction: Literal["higher_is_worse", "higher_is_better"] | None = None

    @field_validator("months")
    @classmethod
    def _months_in_range(cls, v: list[int] | None) -> list[int] | None:
        if v is not None:
            for m in v:
                if not 1 <= m <= 12:
                    raise ValueError(f"month out of range: {m}")
        return v


class CarbonParamsConfig(StrictModel):
    gamma: float = 0.5
    root_ratio: float = 0.42
    cf_economic: float = 0.47
    cf_bamboo: float = 0.5
    cf_shrub: float = 0.50
    w_economic: float = 23.70
    w_shrub: float = 19.76
    carbon_price: float | None = None
    valuation_basis: Literal["stock", "co2"] = "stock"


class CarbonConfig(StrictModel):
    inventory: str | None = None
    stocks: dict[str, float] | None = None
    quantities: dict[str, float] | None = None
    params: CarbonParamsConfig = Field(default_factory=CarbonParamsConfig)


class RegionConfig(StrictModel):
    region: str = ""
    region_area: float
    reserve_area: float
    index_before: float
    index_after: float
    horizon_years: float = 1.0
    area_unit: str | None = None


class SizingConfig(StrictModel):
    current_index: float
    target_index: float
    region_area: float
    horizon_years: float
    form: Literal["direct", "unit_effect"] = "direct"


class PlanConfig(StrictModel):
    region: RegionConfig | None = None
    sizing: SizingConfig | None = None


class SensitivityConfig(StrictModel):
    features: dict[str, float]
    variable: str
    relative_delta: float = 0.1


class RunConfig(StrictModel):
    output_dir: str | None = None
    formats: list[Literal["json", "csv"]] = Field(default_factory=lambda: ["json", "csv"])
    weights: WeightsConfig | None = None
    features: list[FeaturesConfig] = Field(default_factory=list)
    indices: list[IndexConfig] = Field(default_factory=list)
    carbon: CarbonConfig | None = None
    plan: PlanConfig | None = None
    sensitivity: SensitivityConfig | None = None

    @field_validator("formats")
    @classmethod
    def _formats_nonempty(cls, v: list[str]) -> list[str]:
        if not v:
            raise ValueError("formats must name at least one of json, csv")
        return v


def load_config(path: str | Path) -> tuple[RunConfig, Path]:
    """Parse a JSON run config; returns the model and its base directory.

    Raises:
        ConfigError: missing file, invalid JSON, or schema violation
            (including unknown keys).
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    try:
        cfg = RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"{p}: {exc}") from exc
    return cfg, p.parent.resolve()


def referenced_paths(cfg: RunConfig, base_dir: Path) -> list[Path]:
    """Every input file the run will read, resolved against base_dir."""
    paths: list[Path] = []
    if cfg.weights is not None:
        paths.extend(base_dir / m for m in cfg.weights.matrices)
    for feat in cfg.features:
        paths.append(base_dir / feat.weather.path)
    if cfg.carbon is not None and cfg.carbon.inventory is not None:
        paths.append(base_dir / cfg.carbon.inventory)
    return paths
