"""Nature-reserve sizing arithmetic.

Two quantities: the index improvement attributable to one unit of reserve
area, and the reserve area required to move a region's index to a target
within a planning horizon. The sizing comes in two labeled forms because
the published expression divides by years only; the unit_effect form also
divides by the per-unit-area effect and is the dimensionally closed
variant (establishing its output area for the horizon closes the index
gap exactly).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class Area:
    """An area with an optional unit tag such as "km2" or "hm2"."""

    value: float
    unit: str | None = None


def _as_area(a: "Area | float") -> Area:
    return a if isinstance(a, Area) else Area(float(a))


@dataclass
class RegionProfile:
    region_area: Area | float
    reserve_area: Area | float
    index_before: float
    index_after: float
    horizon_years: float
    region: str = ""

    def __post_init__(self) -> None:
        if _as_area(self.region_area).value <= 0 or _as_area(self.reserve_area).value <= 0:
            raise ValueError("areas must be positive")
        if self.horizon_years <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon_years}")


def unit_area_effect(region_area: Area | float, index_change: float, reserve_area: Area | float) -> float:
    """Index change scaled to one unit of reserve area:
    region_area * index_change / reserve_area.

    Both areas must be in the same unit; mismatched unit tags are an
    error rather than a silent conversion.
    """
    region = _as_area(region_area)
    reserve = _as_area(reserve_area)
    if region.unit is not None and reserve.unit is not None and region.unit != reserve.unit:
        raise ValueError(f"area unit mismatch: {region.unit} vs {reserve.unit}")
    if reserve.value <= 0:
        raise ValueError(f"reserve area must be positive, got {reserve.value}")
    return region.value * index_change / reserve.value


class SizingForm(Enum):
    DIRECT = "direct"
    UNIT_EFFECT = "unit_effect"


@dataclass
class ReserveSizing:
    area: float
    form: SizingForm
    note: str | None = None


def required_reserve_area(
    current_index: float,
    target_index: float,
    region_area: Area | float,
    horizon_years: float,
    unit_effect: float | None = None,
    form: SizingForm | str = SizingForm.DIRECT,
) -> ReserveSizing:
    """Reserve area needed to close the gap from current to target index.

    DIRECT mirrors the published arithmetic,
    (current - target) * region_area / horizon_years. UNIT_EFFECT divides
    additionally by the per-unit-area effect, which makes the identity
    unit_effect * horizon * area / region_area = current - target hold.
    A target at or above the current index needs no reserve.
    """
    form = SizingForm(form) if isinstance(form, str) else form
    if horizon_years <= 0:
        raise ValueError(f"horizon must be positive, got {horizon_years}")
    region = _as_area(region_area)
    if target_index >= current_index:
        return ReserveSizing(area=0.0, form=form, note="target already met")
    gap = current_index - target_index
    if form is SizingForm.DIRECT:
        return ReserveSizing(area=gap * region.value / horizon_years, form=form)
    if unit_effect is None or unit_effect <= 0:
        raise ValueError(f"unit_effect must be positive for the {form.value} form")
    return ReserveSizing(area=gap * region.value / (unit_effect * horizon_years), form=form)
