"""Station weather ingestion and meteorological feature derivation.

Reads GSOD-style daily CSVs (sentinel-coded missing values), derives the
features the composite indices consume (wind, sand transport, visibility
sub-index, day-over-day deltas), normalizes columns by the threshold
method, and aggregates by calendar period.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

# Missing-value sentinels by field, GSOD convention.
SENTINELS = {
    "dewp": 9999.9,
    "visib": 999.9,
    "wdsp": 999.9,
    "mxspd": 999.9,
    "gust": 999.9,
    "slp": 9999.9,
    "stp": 9999.9,
    "prcp": 99.99,
    "sndp": 999.9,
    "temp": 9999.9,
}

DEFAULT_SCHEMA = {
    "date": "DATE",
    "dewp": "DEWP",
    "visib": "VISIB",
    "wdsp": "WDSP",
    "mxspd": "MXSPD",
    "gust": "GUST",
    "slp": "SLP",
    "stp": "STP",
    "prcp": "PRCP",
    "sndp": "SNDP",
    "temp": "TEMP",
    "frshtt": "FRSHTT",
}

MOR_CONSTANT = 3.912  # ln(1/0.02) rounded as conventionally printed


class VisibilityMode(Enum):
    LOG_EXTINCTION = "log_extinction"
    MOR = "mor"


@dataclass
class WeatherRecord:
    date: dt.date
    dewp: float | None = None
    visib: float | None = None
    wdsp: float | None = None
    mxspd: float | None = None
    gust: float | None = None
    slp: float | None = None
    stp: float | None = None
    prcp: float | None = None
    sndp: float | None = None
    temp: float | None = None
    frshtt: str | None = None


@dataclass
class FeatureParams:
    """Constants for feature derivation.

    u_s is the sand-initiation wind speed in the source's speed unit.
    dewp_window_days is the record lag for the dew-point delta; with daily
    data one record is one day. bedding_factor scales the cubic
    sand-transport term; x4 is an additive uncertainty constant on it.
    absolute_deltas switches the day-over-day differences from signed to
    magnitude.
    """

    u_s: float = 5.0
    dewp_window_days: int = 1
    bedding_factor: float = 1.0
    x4: float = 0.0
    epsilon: float = 0.02
    visibility_mode: VisibilityMode = VisibilityMode.LOG_EXTINCTION
    absolute_deltas: bool = False


@dataclass
class DerivedFeatures:
    date: dt.date
    delta_t24: float | None = None
    delta_dewp: float | None = None
    tr: float | None = None
    u_cubed: float | None = None
    dv: float | None = None
    u: float | None = None
    p: float | None = None


@dataclass
class AggregatedSeries:
    period: str
    months: tuple[int, ...] | None
    values: dict[str, float]
    counts: dict[str, int]


def _open_source(source: str | Path | IO) -> tuple[IO, bool, str]:
    if isinstance(source, (str, Path)):
        return open(source, newline=""), True, str(source)
    if isinstance(source, (io.RawIOBase, io.BufferedIOBase)) or (
        hasattr(source, "mode") and "b" in getattr(source, "mode", "")
    ):
        return io.TextIOWrapper(source, newline=""), False, getattr(source, "name", "<stream>")
    return source, False, getattr(source, "name", "<stream>")


def _parse_date(token: str) -> dt.date:
    parts = token.strip().split("-")
    if len(parts) != 3:
        raise ValueError(token)
    year, month, day = (int(p) for p in parts)
    return dt.date(year, month, day)


def parse_weather_csv(
    source: str | Path | IO,
    schema: Mapping[str, str] | None = None,
) -> list[WeatherRecord]:
    """Parse a daily weather CSV into records, decoding sentinels as missing.

    The schema maps record fields to CSV column names and must cover at
    least the date. Malformed numeric cells and unparseable dates never
    abort the run: cells become missing, bad rows are dropped, both with a
    logged warning carrying the row position. Columns not named in the
    schema are ignored.

    Raises:
        ValueError: if the date column is absent from the header, or the
            schema names an unknown record field.
    """
    schema = dict(DEFAULT_SCHEMA if schema is None else schema)
    unknown = set(schema) - set(DEFAULT_SCHEMA)
    if unknown:
        raise ValueError(f"unknown field(s) in schema: {', '.join(sorted(unknown))}")
    if "date" not in schema:
        raise ValueError("undated data: schema does not map a date column")

    handle, owned, name = _open_source(source)
    try:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"undated data: {name} has no header row") from None
        header = [h.strip() for h in header]
        if schema["date"] not in header:
            raise ValueError(f"undated data: column {schema['date']!r} not in header")
        positions: dict[str, int] = {}
        for fld, column in schema.items():
            if column in header:
                positions[fld] = header.index(column)
            elif fld != "date":
                logger.warning("%s: column %r absent; %s treated as missing", name, column, fld)

        records: list[WeatherRecord] = []
        for rowno, row in enumerate(reader, start=2):
            if not any(cell.strip() for cell in row):
                continue
            raw_date = row[positions["date"]].strip() if positions["date"] < len(row) else ""
            try:
                date = _parse_date(raw_date)
            except (ValueError, TypeError):
                logger.warning("%s:row %d: unparseable date %r; row dropped", name, rowno, raw_date)
                continue
            record = WeatherRecord(date=date)
            for fld, pos in positions.items():
                if fld == "date":
                    continue
                cell = row[pos].strip() if pos < len(row) else ""
                if not cell:
                    continue
                if fld == "frshtt":
                    digits = cell.lstrip("+")
                    if digits.isdigit():
                        record.frshtt = digits.zfill(6)
                    else:
                        logger.warning("%s:row %d: unreadable FRSHTT %r; treated as missing", name, rowno, cell)
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    logger.warning(
                        "%s:row %d: unreadable %s value %r; treated as missing", name, rowno, fld.upper(), cell
                    )
                    continue
                if not math.isfinite(value) or value == SENTINELS[fld]:
                    continue
                setattr(record, fld, value)
            records.append(record)
        return records
    finally:
        if owned:
            handle.close()


def visibility_subindex(
    v: float,
    epsilon: float = 0.02,
    mode: VisibilityMode = VisibilityMode.LOG_EXTINCTION,
) -> float:
    """Visibility sub-index from an observed range.

    The extinction coefficient is a = ln(1/epsilon)/V. LOG_EXTINCTION
    returns ln a; MOR returns 3.912/a, the meteorological-optical-range
    formulation with the conventional 2% contrast constant.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("contrast threshold out of range")
    if v <= 0.0:
        raise ValueError(f"visibility must be positive, got {v}")
    a = math.log(1.0 / epsilon) / v
    if mode is VisibilityMode.MOR:
        return MOR_CONSTANT / a
    return math.log(a)


def _delta(curr: float | None, prev: float | None, absolute: bool) -> float | None:
    if curr is None or prev is None:
        return None
    d = curr - prev
    return abs(d) if absolute else d


def derive_features(
    records: Sequence[WeatherRecord],
    params: FeatureParams | None = None,
) -> list[DerivedFeatures]:
    """Derive index features from date-ordered records.

    Per record: u = wind speed, u_cubed = u**3, tr = u - u_s,
    p = bedding_factor * u**3 + x4, dv = visibility sub-index, plus
    previous-record deltas for temperature and dew point. A feature whose
    source observation is missing is itself missing; the first record has
    no 24 h deltas.

    Raises:
        ValueError: if records are not sorted by date ascending.
    """
    params = params or FeatureParams()
    for earlier, later in zip(records, records[1:]):
        if later.date < earlier.date:
            raise ValueError(f"time order: {later.date} follows {earlier.date}")
    out: list[DerivedFeatures] = []
    lag = max(int(params.dewp_window_days), 1)
    for i, rec in enumerate(records):
        f = DerivedFeatures(date=rec.date)
        if rec.wdsp is not None:
            f.u = rec.wdsp
            f.u_cubed = rec.wdsp**3
            f.tr = rec.wdsp - params.u_s
            f.p = params.bedding_factor * f.u_cubed + params.x4
        if rec.visib is not None:
            f.dv = visibility_subindex(rec.visib, params.epsilon, params.visibility_mode)
        if i >= 1:
            f.delta_t24 = _delta(rec.temp, records[i - 1].temp, params.absolute_deltas)
        if i >= lag:
            f.delta_dewp = _delta(rec.dewp, records[i - lag].dewp, params.absolute_deltas)
        out.append(f)
    return out


def threshold_normalize(column: Sequence[float | None]) -> list[float | None]:
    """Map each value a to (max + min - a)/max over the column's present values.

    The map is affine with negative slope, so larger raw values come out
    smaller. Missing entries (None or NaN) are excluded from max/min and
    passed through unchanged.
    """
    present = [v for v in column if v is not None and not math.isnan(v)]
    if not present:
        raise ValueError("column has no present values")
    hi = max(present)
    lo = min(present)
    if hi == 0.0:
        raise ValueError("zero threshold denominator")
    return [v if v is None or math.isnan(v) else (hi + lo - v) / hi for v in column]


def aggregate(
    series: Iterable[tuple[dt.date, float | None]],
    period: str = "annual",
    months: Iterable[int] | None = None,
) -> AggregatedSeries:
    """Arithmetic means per calendar period over present values.

    period is "annual" or "monthly"; an optional month set restricts an
    annual aggregation to those months (e.g. the spring dust season).
    Periods with no present values are simply absent.
    """
    if period not in ("annual", "monthly"):
        raise ValueError(f"unknown aggregation period {period!r}")
    month_set = None if months is None else tuple(sorted(set(months)))
    if month_set is not None and period != "annual":
        raise ValueError("month filter applies to annual aggregation only")
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for date, value in series:
        if value is None or math.isnan(value):
            continue
        if month_set is not None and date.month not in month_set:
            continue
        key = f"{date.year:04d}" if period == "annual" else f"{date.year:04d}-{date.month:02d}"
        sums[key] = sums.get(key, 0.0) + value
        counts[key] = counts.get(key, 0) + 1
    keys = sorted(sums)
    return AggregatedSeries(
        period=period,
        months=month_set,
        values={k: sums[k] / counts[k] for k in keys},
        counts={k: counts[k] for k in keys},
    )


_FEATURE_COLUMNS = ("delta_t24", "delta_dewp", "tr", "u_cubed", "dv", "u", "p")


def write_features_csv(features: Sequence[DerivedFeatures], dest: str | Path | IO) -> None:
    """Canonical feature CSV: ISO dates, empty cell = missing."""
    handle, owned, _ = _open_source_for_write(dest)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("date",) + _FEATURE_COLUMNS)
        for f in features:
            row = [f.date.isoformat()]
            for col in _FEATURE_COLUMNS:
                value = getattr(f, col)
                row.append("" if value is None else repr(value))
            writer.writerow(row)
    finally:
        if owned:
            handle.close()


def read_features_csv(source: str | Path | IO) -> list[DerivedFeatures]:
    handle, owned, name = _open_source(source)
    try:
        reader = csv.DictReader(handle)
        out = []
        for row in reader:
            f = DerivedFeatures(date=dt.date.fromisoformat(row["date"]))
            for col in _FEATURE_COLUMNS:
                cell = (row.get(col) or "").strip()
                if cell:
                    setattr(f, col, float(cell))
            out.append(f)
        return out
    finally:
        if owned:
            handle.close()


def _open_source_for_write(dest: str | Path | IO) -> tuple[IO, bool, str]:
    if isinstance(dest, (str, Path)):
        return open(dest, "w", newline=""), True, str(dest)
    return dest, False, getattr(dest, "name", "<stream>")
