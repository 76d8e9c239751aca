"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class StrictRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HealthResponse(BaseModel):
    status: str
    version: str


class MatrixRequest(StrictRequest):
    entries: list[list[float]]
    kind: Literal["raw", "column_normalized"] = "raw"
    labels: list[str] | None = None
    ri_table: dict[int, float] | None = None


class WeightResponse(BaseModel):
    weights: list[float]
    lambda_max: float
    ci: float
    ri: float
    cr: float
    consistent: bool
    labels: list[str] | None = None


class ValidationResponse(BaseModel):
    valid: bool
    violations: list[str]


class EigenvalueResponse(BaseModel):
    lambda_max: float


class ClassifiedScore(BaseModel):
    index_name: str
    score: float
    band: str
    threshold: float
    direction: str


class EiRequest(StrictRequest):
    fc: float
    fr: float
    s: float
    d: float
    df: float
    rf: float
    threshold: float | None = None
    direction: Literal["higher_is_worse", "higher_is_better"] | None = None


class HRequest(StrictRequest):
    dv: float
    u: float
    delta_t: float
    tr: float
    p: float
    weights: list[float] | None = None
    threshold: float | None = None
    direction: Literal["higher_is_worse", "higher_is_better"] | None = None


class HExpandedRequest(StrictRequest):
    u: float
    p: float
    delta_p3: float
    t: float
    delta_t: float
    dv: float
    delta_t24: float
    tr: float
    u_cubed: float | None = None
    threshold: float | None = None
    direction: Literal["higher_is_worse", "higher_is_better"] | None = None


class EhRequest(StrictRequest):
    u: float
    p: float
    delta_p3: float
    t: float
    delta_t: float
    dv: float
    delta_t24: float
    tr: float
    u_cubed: float
    pm25: float
    nox: float
    na: float
    nm: float
    np: float
    threshold: float | None = None
    direction: Literal["higher_is_worse", "higher_is_better"] | None = None


class CarbonParamsBody(StrictRequest):
    gamma: float = 0.5
    root_ratio: float = 0.42
    cf_economic: float = 0.47
    cf_bamboo: float = 0.5
    cf_shrub: float = 0.50
    w_economic: float = 23.70
    w_shrub: float = 19.76
    carbon_price: float | None = None
    valuation_basis: Literal["stock", "co2"] = "stock"


class LedgerRequest(StrictRequest):
    stocks: dict[str, float]
    quantities: dict[str, float] | None = None
    params: CarbonParamsBody = Field(default_factory=CarbonParamsBody)


class LedgerRowBody(BaseModel):
    label: str
    stock_t: float
    share: float | None
    co2_t: float
    quantity: float | None = None
    value: float | None = None


class LedgerResponse(BaseModel):
    rows: list[LedgerRowBody]
    total: LedgerRowBody
    co2_factor: float
    valuation_basis: str
    carbon_price: float | None
    note: str | None


class UnitEffectRequest(StrictRequest):
    region_area: float
    index_change: float
    reserve_area: float


class UnitEffectResponse(BaseModel):
    unit_area_effect: float


class ReserveAreaRequest(StrictRequest):
    current_index: float
    target_index: float
    region_area: float
    horizon_years: float
    unit_effect: float | None = None
    form: Literal["direct", "unit_effect"] = "direct"


class ReserveAreaResponse(BaseModel):
    area: float
    form: str
    note: str | None


class SensitivityRequest(StrictRequest):
    features: dict[str, float]
    variable: str
    relative_delta: float = 0.1


class SensitivityResponse(BaseModel):
    variable: str
    base_value: float
    analytic_slope: float
    fd_slope: float
    delta_h_at_10pct: float
    dominant_term: str
    relative_delta: float
    delta_h_exact: float
    first_order_delta_h: float
    base_index: float


class CorrelationRequest(StrictRequest):
    x: list[float]
    y: list[float]
    method: Literal["pearson", "spearman"] = "pearson"


class CorrelationResponse(BaseModel):
    method: str
    value: float


class TrendRequest(StrictRequest):
    times: list[float]
    values: list[float]
    horizon: int = 1
    label: str = ""


class TrendPointBody(BaseModel):
    time: float
    value: float
    predicted: bool


class TrendResponse(BaseModel):
    points: list[TrendPointBody]
    slope: float
    intercept: float
    residual_std: float
    label: str
