"""Weighted composite environmental indices and threshold classification.

Three index families share this module: the ecological quality index EI
over forestry metrics, the five-indicator sandstorm risk degree H, and
the expanded nine-term hazard form with its pollution/biota extension EH.
All are linear in their inputs except the cubic wind term of the expanded
forms. Scores classify against a warning or excellence threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Mapping

DEFAULT_H_WEIGHTS = (0.159, 0.403, 0.088, 0.077, 0.274)  # order: dv, u, delta_t, tr, p

# Coefficients of the nine-term expanded hazard form.
EXPANDED_COEFFS = {
    "u": 0.246,
    "p": 0.2,
    "delta_p3": 0.04,
    "t": 0.051,
    "delta_t": 0.148,
    "dv": 0.208,
    "delta_t24": 0.019,
    "tr": 0.072,
    "u_cubed": 0.017,
}

# EH adds pollution and biota terms on top of the expanded form.
EH_EXTRA_COEFFS = {"pm25": 0.003, "nox": 0.003, "na": 0.12, "nm": 0.03, "np": 0.14}

EI_THRESHOLD_OUTSTANDING = 48.0
HAZARD_WARNING_LINE = 20.0


class Direction(Enum):
    HIGHER_IS_WORSE = "higher_is_worse"
    HIGHER_IS_BETTER = "higher_is_better"


class Band(Enum):
    BELOW_WARNING = "BelowWarning"
    ABOVE_WARNING = "AboveWarning"
    OUTSTANDING = "Outstanding"
    NOT_OUTSTANDING = "NotOutstanding"


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")


@dataclass
class EiInputs:
    """Inputs of the ecological quality index.

    fc: mechanical-forestry area score; fr: forest cover ratio; s: total
    accumulation; d: average annual high-wind days; df: frost-free period
    days; rf: average annual precipitation.
    """

    fc: float
    fr: float
    s: float
    d: float
    df: float
    rf: float

    def __post_init__(self) -> None:
        for f in fields(self):
            _require_finite(f.name, getattr(self, f.name))
        for name in ("d", "df"):
            value = getattr(self, name)
            if not 0.0 <= value <= 366.0:
                raise ValueError(f"{name} must lie in [0, 366] days, got {value}")


def compute_ei(inputs: EiInputs) -> float:
    return (
        62.42 * inputs.fc
        + 15.12 * inputs.fr
        + 4.51 * inputs.s
        + 5.24 * inputs.d / 365
        + 3.04 * inputs.df / 365
        + 3.02 * inputs.rf
    )


def speciate_area_score(aio: float, weight: float, area: float, base_area: float) -> float:
    """Scale an all-in-one score by species weight and area share of the base area."""
    if base_area <= 0.0:
        raise ValueError(f"invalid base area {base_area}")
    return aio * weight * area / base_area


@dataclass
class HInputs:
    """Sub-indicator values for the five-indicator risk degree.

    Weight order matches the indicator order (dv, u, delta_t, tr, p).
    """

    dv: float
    u: float
    delta_t: float
    tr: float
    p: float
    weights: tuple[float, float, float, float, float] = DEFAULT_H_WEIGHTS

    def __post_init__(self) -> None:
        for name in ("dv", "u", "delta_t", "tr", "p"):
            _require_finite(name, getattr(self, name))
        self.weights = tuple(float(w) for w in self.weights)
        if len(self.weights) != 5:
            raise ValueError(f"expected 5 weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        total = sum(self.weights)
        if abs(total - 1.0) > 0.01:
            raise ValueError(f"weights sum to {total:.4f}, expected 1 within 0.01")


def compute_h(inputs: HInputs) -> float:
    values = (inputs.dv, inputs.u, inputs.delta_t, inputs.tr, inputs.p)
    return sum(w * v for w, v in zip(inputs.weights, values))


@dataclass
class HExpandedInputs:
    """Feature bundle for the nine-term expanded form.

    u_cubed defaults to u**3; pass it explicitly only to override the
    derived value.
    """

    u: float
    p: float
    delta_p3: float
    t: float
    delta_t: float
    dv: float
    delta_t24: float
    tr: float
    u_cubed: float | None = None

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                _require_finite(f.name, value)

    def resolved_u_cubed(self) -> float:
        return self.u**3 if self.u_cubed is None else self.u_cubed


_EXPANDED_REQUIRED = ("u", "p", "delta_p3", "t", "delta_t", "dv", "delta_t24", "tr")


def expanded_inputs_from_mapping(bundle: Mapping[str, float | None]) -> HExpandedInputs:
    """Build expanded-form inputs from a feature mapping.

    Raises:
        ValueError: "incomplete feature bundle" when a required term is
            absent or missing (None).
    """
    missing = [k for k in _EXPANDED_REQUIRED if bundle.get(k) is None]
    if missing:
        raise ValueError(f"incomplete feature bundle: missing {', '.join(missing)}")
    kwargs = {k: float(bundle[k]) for k in _EXPANDED_REQUIRED}
    if bundle.get("u_cubed") is not None:
        kwargs["u_cubed"] = float(bundle["u_cubed"])
    return HExpandedInputs(**kwargs)


def compute_h_expanded(features: HExpandedInputs | Mapping[str, float | None]) -> float:
    """Evaluate the nine-term linear-plus-cubic hazard form."""
    if not isinstance(features, HExpandedInputs):
        features = expanded_inputs_from_mapping(features)
    c = EXPANDED_COEFFS
    return (
        c["u"] * features.u
        + c["p"] * features.p
        + c["delta_p3"] * features.delta_p3
        + c["t"] * features.t
        + c["delta_t"] * features.delta_t
        + c["dv"] * features.dv
        + c["delta_t24"] * features.delta_t24
        + c["tr"] * features.tr
        + c["u_cubed"] * features.resolved_u_cubed()
    )


@dataclass
class EhInputs:
    """Full hazard-index inputs: the nine expanded terms plus pollution
    (pm2.5, NOx) and biota counts (NA, NM, NP). u_cubed is an independent
    input here, taken as given."""

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

    def __post_init__(self) -> None:
        for f in fields(self):
            _require_finite(f.name, getattr(self, f.name))
        for name in ("na", "nm", "np"):
            if getattr(self, name) < 0:
                raise ValueError(f"count {name} must be nonnegative")


def compute_eh(inputs: EhInputs) -> float:
    c = EXPANDED_COEFFS
    x = EH_EXTRA_COEFFS
    return (
        c["u"] * inputs.u
        + c["p"] * inputs.p
        + c["delta_p3"] * inputs.delta_p3
        + c["t"] * inputs.t
        + c["delta_t"] * inputs.delta_t
        + c["dv"] * inputs.dv
        + c["delta_t24"] * inputs.delta_t24
        + c["tr"] * inputs.tr
        + c["u_cubed"] * inputs.u_cubed
        + x["pm25"] * (inputs.pm25 + inputs.nox)
        + x["na"] * inputs.na
        + x["nm"] * inputs.nm
        + x["np"] * inputs.np
    )


@dataclass
class Classification:
    score: float
    band: Band
    threshold: float
    direction: Direction


def classify(score: float, threshold: float, direction: Direction) -> Classification:
    """Band a score against a threshold; a tie counts as not exceeding."""
    _require_finite("threshold", threshold)
    exceeds = score > threshold
    if direction is Direction.HIGHER_IS_WORSE:
        band = Band.ABOVE_WARNING if exceeds else Band.BELOW_WARNING
    else:
        band = Band.OUTSTANDING if exceeds else Band.NOT_OUTSTANDING
    return Classification(score=score, band=band, threshold=threshold, direction=direction)
