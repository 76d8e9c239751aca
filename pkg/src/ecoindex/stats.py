"""Correlation and short-series trend utilities for annual index tracks.

Forecasts come from an ordinary least-squares line over observation index
(0, 1, 2, ...), which matches evenly spaced annual series; forecast dates
beyond the sample continue at the mean observed spacing. Residual spread
uses ddof=2 because the line consumes two degrees of freedom.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient, clamped to [-1, 1].

    Raises:
        ValueError: on length mismatch, fewer than two points, or a
            zero-variance input ("undefined correlation").
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1:
        raise ValueError("correlation inputs must be one-dimensional")
    if xs.size != ys.size:
        raise ValueError(f"length mismatch: {xs.size} vs {ys.size}")
    if xs.size < 2:
        raise ValueError("need at least two points for correlation")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValueError("correlation inputs must be finite")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("undefined correlation: zero variance input")
    r = float(np.sum(dx * dy) / (sx * sy))
    return max(-1.0, min(1.0, r))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    # ties share the average of the rank positions they span
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(values.size, dtype=float)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.size != ys.size:
        raise ValueError(f"length mismatch: {xs.size} vs {ys.size}")
    return pearson(_average_ranks(xs), _average_ranks(ys))


@dataclass
class SeriesPoint:
    time: float
    value: float
    predicted: bool = False


@dataclass
class TrendForecast:
    points: list[SeriesPoint]
    slope: float
    intercept: float
    residual_std: float
    horizon: int = 0
    label: str = ""
    fitted: list[float] = field(default_factory=list)

    def predicted_values(self) -> list[float]:
        return [p.value for p in self.points if p.predicted]


def trend_forecast(
    times: Sequence[float],
    values: Sequence[float],
    horizon: int = 1,
    label: str = "",
) -> TrendForecast:
    """Fit value = slope*i + intercept over observation index and extend.

    Raises:
        ValueError: for fewer than three observations ("insufficient
            history"), non-increasing times, or a nonpositive horizon.
    """
    ts = np.asarray(times, dtype=float)
    vs = np.asarray(values, dtype=float)
    if ts.size != vs.size:
        raise ValueError(f"length mismatch: {ts.size} vs {vs.size}")
    if ts.size < 3:
        raise ValueError(f"insufficient history: need at least 3 points, got {ts.size}")
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vs))):
        raise ValueError("series must be finite")
    for i in range(1, ts.size):
        if ts[i] <= ts[i - 1]:
            raise ValueError(f"time order: {ts[i]} follows {ts[i - 1]}")

    idx = np.arange(ts.size, dtype=float)
    slope, intercept = np.polyfit(idx, vs, 1)
    fitted = slope * idx + intercept
    resid = vs - fitted
    dof = ts.size - 2
    residual_std = float(np.sqrt(np.sum(resid * resid) / dof)) if dof > 0 else 0.0

    spacing = float(np.mean(np.diff(ts))) if ts.size > 1 else 1.0
    points = [SeriesPoint(float(t), float(v)) for t, v in zip(ts, vs)]
    for k in range(1, horizon + 1):
        i = ts.size - 1 + k
        points.append(
            SeriesPoint(float(ts[-1] + k * spacing), float(slope * i + intercept), predicted=True)
        )
    return TrendForecast(
        points=points,
        slope=float(slope),
        intercept=float(intercept),
        residual_std=residual_std,
        horizon=horizon,
        label=label,
        fitted=[float(v) for v in fitted],
    )


def read_series_csv(source: str | Path | io.TextIOBase) -> tuple[list[float], list[float]]:
    """Read a two-column time,value CSV (header required)."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_series_csv(fh)
    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        raise ValueError("empty series file")
    names = [n.strip().lower() for n in reader.fieldnames]
    if "time" not in names or "value" not in names:
        raise ValueError(f"series file needs time,value columns, got {reader.fieldnames}")
    tkey = reader.fieldnames[names.index("time")]
    vkey = reader.fieldnames[names.index("value")]
    times: list[float] = []
    values: list[float] = []
    for rowno, row in enumerate(reader, start=2):
        t = (row.get(tkey) or "").strip()
        v = (row.get(vkey) or "").strip()
        if not t and not v:
            continue
        try:
            times.append(float(t))
            values.append(float(v))
        except ValueError as exc:
            raise ValueError(f"row {rowno}: bad series entry {t!r},{v!r}") from exc
    return times, values


def write_forecast_csv(forecast: TrendForecast, target: str | Path | io.TextIOBase) -> None:
    """Write time,value,predicted rows; predicted is 0 or 1."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            write_forecast_csv(forecast, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(["time", "value", "predicted"])
    for p in forecast.points:
        writer.writerow([repr(p.time), repr(p.value), int(p.predicted)])
