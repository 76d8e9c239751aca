"""Forest carbon stock accounting across four forest types.

Arbor stands use the stock-expansion method over per-species stumpage
volumes; economic forest, bamboo, and shrubland use per-unit biomass
coefficients. Stocks aggregate into a ledger with shares, CO2-equivalent
conversion at the molecular-mass ratio 44/12, and optional valuation at a
market carbon price.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping, Sequence

CO2_PER_CARBON = 44.0 / 12.0


@dataclass
class ArborSpeciesEntry:
    """One species line of an arbor inventory.

    volume_m3 is stumpage volume, wood_density t/m3, bef the biomass
    expansion factor (IPCC default 1.3).
    """

    volume_m3: float
    wood_density: float
    bef: float = 1.3
    label: str = ""

    def __post_init__(self) -> None:
        if self.volume_m3 < 0:
            raise ValueError(f"volume must be nonnegative, got {self.volume_m3}")
        if self.wood_density <= 0:
            raise ValueError(f"wood density must be positive, got {self.wood_density}")
        if self.bef <= 0:
            raise ValueError(f"biomass expansion factor must be positive, got {self.bef}")


@dataclass
class CarbonParams:
    """Model constants. gamma is the biomass-to-carbon factor, root_ratio
    the belowground expansion, cf_* the carbon fractions, w_* per-unit
    biomass in t/hm2. carbon_price has no default: valuation is computed
    only when a price is supplied."""

    gamma: float = 0.5
    root_ratio: float = 0.42
    cf_economic: float = 0.47
    cf_bamboo: float = 0.5
    cf_shrub: float = 0.50
    w_economic: float = 23.70
    w_shrub: float = 19.76
    co2_factor: float = CO2_PER_CARBON
    carbon_price: float | None = None
    valuation_basis: str = "stock"  # "stock" or "co2"

    def __post_init__(self) -> None:
        for name in ("gamma", "root_ratio", "cf_economic", "cf_bamboo", "cf_shrub",
                     "w_economic", "w_shrub", "co2_factor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.valuation_basis not in ("stock", "co2"):
            raise ValueError(f"valuation basis must be 'stock' or 'co2', got {self.valuation_basis!r}")


def carbon_arbor(entries: Sequence[ArborSpeciesEntry], params: CarbonParams | None = None) -> float:
    """gamma * sum_i V_i * WD_i * BEF_i * (1 + R), in tonnes of carbon."""
    params = params or CarbonParams()
    biomass = sum(e.volume_m3 * e.wood_density * e.bef * (1.0 + params.root_ratio) for e in entries)
    return params.gamma * biomass


def carbon_economic(area_hm2: float, params: CarbonParams | None = None) -> float:
    if area_hm2 < 0:
        raise ValueError(f"area must be nonnegative, got {area_hm2}")
    params = params or CarbonParams()
    return params.w_economic * area_hm2 * params.cf_economic


def carbon_bamboo(count: float, w_per_plant_kg: float, params: CarbonParams | None = None) -> float:
    """Per-plant biomass is in kg; the single kg-to-t conversion happens here."""
    if count < 0 or w_per_plant_kg < 0:
        raise ValueError("count and per-plant biomass must be nonnegative")
    params = params or CarbonParams()
    return w_per_plant_kg * count * params.cf_bamboo / 1000.0


def carbon_shrub(area_hm2: float, params: CarbonParams | None = None) -> float:
    if area_hm2 < 0:
        raise ValueError(f"area must be nonnegative, got {area_hm2}")
    params = params or CarbonParams()
    return params.w_shrub * area_hm2 * params.cf_shrub


@dataclass
class LedgerRow:
    label: str
    stock_t: float
    share: float | None
    co2_t: float
    quantity: float | None = None
    value: float | None = None


@dataclass
class CarbonLedger:
    rows: list[LedgerRow]
    total: LedgerRow
    co2_factor: float
    valuation_basis: str
    carbon_price: float | None
    note: str | None = None


def build_ledger(
    stocks: Mapping[str, float],
    params: CarbonParams | None = None,
    quantities: Mapping[str, float] | None = None,
) -> CarbonLedger:
    """Aggregate per-type carbon stocks (tonnes) into a ledger.

    Shares are stock/total; every row's CO2 equals stock times the CO2
    factor. When all stocks are zero the shares are undefined and the
    ledger is flagged instead of erroring. Valuation rows appear only if
    the params carry a price; the basis (stock or co2) is recorded.
    """
    params = params or CarbonParams()
    quantities = quantities or {}
    for label, stock in stocks.items():
        if stock < 0:
            raise ValueError(f"stock for {label!r} must be nonnegative, got {stock}")
    total_stock = float(sum(stocks.values()))
    degenerate = total_stock == 0.0

    def value_of(stock: float, co2: float) -> float | None:
        if params.carbon_price is None:
            return None
        basis = stock if params.valuation_basis == "stock" else co2
        return basis * params.carbon_price

    rows = []
    for label, stock in stocks.items():
        co2 = stock * params.co2_factor
        rows.append(
            LedgerRow(
                label=label,
                stock_t=float(stock),
                share=None if degenerate else stock / total_stock,
                co2_t=co2,
                quantity=quantities.get(label),
                value=value_of(stock, co2),
            )
        )
    total_co2 = total_stock * params.co2_factor
    total = LedgerRow(
        label="total",
        stock_t=total_stock,
        share=None if degenerate else 1.0,
        co2_t=total_co2,
        quantity=None,
        value=value_of(total_stock, total_co2),
    )
    return CarbonLedger(
        rows=rows,
        total=total,
        co2_factor=params.co2_factor,
        valuation_basis=params.valuation_basis,
        carbon_price=params.carbon_price,
        note="all stocks zero; shares undefined" if degenerate else None,
    )


@dataclass
class Inventory:
    """Parsed inventory file: arbor species entries plus per-type extents."""

    arbor_entries: list[ArborSpeciesEntry] = field(default_factory=list)
    economic_area_hm2: float = 0.0
    bamboo_count: float = 0.0
    bamboo_w_per_plant_kg: float = 0.0
    shrub_area_hm2: float = 0.0
    arbor_area_hm2: float | None = None


def read_inventory_csv(source: str | Path | IO) -> Inventory:
    """Inventory CSV columns: type, label, area_hm2, count, volume_m3,
    wood_density, bef, w_per_plant. Rows sum per type; blank cells fall
    back to defaults."""
    if isinstance(source, (str, Path)):
        handle = open(source, newline="")
        owned = True
    else:
        handle, owned = source, False
    inv = Inventory()
    try:
        for rowno, row in enumerate(csv.DictReader(handle), start=2):
            kind = (row.get("type") or "").strip().lower()
            cell = lambda key: (row.get(key) or "").strip()
            num = lambda key, default=0.0: float(cell(key)) if cell(key) else default
            if kind == "arbor":
                inv.arbor_entries.append(
                    ArborSpeciesEntry(
                        volume_m3=num("volume_m3"),
                        wood_density=num("wood_density"),
                        bef=num("bef", 1.3),
                        label=cell("label"),
                    )
                )
                if cell("area_hm2"):
                    inv.arbor_area_hm2 = (inv.arbor_area_hm2 or 0.0) + num("area_hm2")
            elif kind == "economic":
                inv.economic_area_hm2 += num("area_hm2")
            elif kind == "bamboo":
                inv.bamboo_count += num("count")
                if cell("w_per_plant"):
                    inv.bamboo_w_per_plant_kg = num("w_per_plant")
            elif kind == "shrub":
                inv.shrub_area_hm2 += num("area_hm2")
            else:
                raise ValueError(f"row {rowno}: unknown forest type {row.get('type')!r}")
    finally:
        if owned:
            handle.close()
    return inv


def stocks_from_inventory(
    inv: Inventory, params: CarbonParams | None = None
) -> tuple[dict[str, float], dict[str, float]]:
    """Compute per-type stocks and the quantity column from an inventory."""
    params = params or CarbonParams()
    stocks: dict[str, float] = {}
    quantities: dict[str, float] = {}
    if inv.arbor_entries:
        stocks["arbor"] = carbon_arbor(inv.arbor_entries, params)
        if inv.arbor_area_hm2 is not None:
            quantities["arbor"] = inv.arbor_area_hm2
    if inv.economic_area_hm2:
        stocks["economic"] = carbon_economic(inv.economic_area_hm2, params)
        quantities["economic"] = inv.economic_area_hm2
    if inv.bamboo_count:
        stocks["bamboo"] = carbon_bamboo(inv.bamboo_count, inv.bamboo_w_per_plant_kg, params)
        quantities["bamboo"] = inv.bamboo_count
    if inv.shrub_area_hm2:
        stocks["shrub"] = carbon_shrub(inv.shrub_area_hm2, params)
        quantities["shrub"] = inv.shrub_area_hm2
    return stocks, quantities
