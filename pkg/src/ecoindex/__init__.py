"""Environmental-quality assessment toolkit.

Core pieces: pairwise-comparison weight derivation with consistency
screening, weather-record feature extraction, composite quality and
hazard indices, forest carbon-stock accounting, reserve sizing,
index sensitivity reports, and series statistics. A batch CLI
(`ecoindex`) and an HTTP service wrap the same functions.
"""

from __future__ import annotations

from .ahp import (
    JudgmentMatrix,
    MatrixKind,
    WeightReport,
    consistency_ratio,
    derive_weights,
    embed_weights,
    exact_max_eigenvalue,
    load_matrix_file,
    validate_matrix,
)
from .carbon import (
    CarbonLedger,
    CarbonParams,
    build_ledger,
    carbon_arbor,
    carbon_bamboo,
    carbon_economic,
    carbon_shrub,
    read_inventory_csv,
    stocks_from_inventory,
)
from .indices import (
    Band,
    Classification,
    Direction,
    EhInputs,
    EiInputs,
    HExpandedInputs,
    HInputs,
    classify,
    compute_eh,
    compute_ei,
    compute_h,
    compute_h_expanded,
    speciate_area_score,
)
from .planning import (
    Area,
    RegionProfile,
    ReserveSizing,
    SizingForm,
    required_reserve_area,
    unit_area_effect,
)
from .sensitivity import SensitivityReport, dh_du, finite_difference, perturb_h
from .stats import TrendForecast, pearson, spearman, trend_forecast
from .weather import (
    AggregatedSeries,
    DerivedFeatures,
    FeatureParams,
    WeatherRecord,
    aggregate,
    derive_features,
    parse_weather_csv,
    threshold_normalize,
    visibility_subindex,
)

__version__ = "0.1.0"

__all__ = [
    "AggregatedSeries",
    "Area",
    "Band",
    "CarbonLedger",
    "CarbonParams",
    "Classification",
    "DerivedFeatures",
    "Direction",
    "EhInputs",
    "EiInputs",
    "FeatureParams",
    "HExpandedInputs",
    "HInputs",
    "JudgmentMatrix",
    "MatrixKind",
    "RegionProfile",
    "ReserveSizing",
    "SensitivityReport",
    "SizingForm",
    "TrendForecast",
    "WeatherRecord",
    "WeightReport",
    "aggregate",
    "build_ledger",
    "carbon_arbor",
    "carbon_bamboo",
    "carbon_economic",
    "carbon_shrub",
    "classify",
    "compute_eh",
    "compute_ei",
    "compute_h",
    "compute_h_expanded",
    "consistency_ratio",
    "derive_features",
    "derive_weights",
    "dh_du",
    "embed_weights",
    "exact_max_eigenvalue",
    "finite_difference",
    "load_matrix_file",
    "parse_weather_csv",
    "pearson",
    "perturb_h",
    "read_inventory_csv",
    "required_reserve_area",
    "speciate_area_score",
    "spearman",
    "stocks_from_inventory",
    "threshold_normalize",
    "trend_forecast",
    "unit_area_effect",
    "validate_matrix",
    "visibility_subindex",
    "__version__",
]
