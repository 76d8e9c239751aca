"""Batch execution: config-driven runs producing deterministic artifacts.

Each command resolves an output directory (flag, then ECOINDEX_OUT, then
the config's output_dir, then ./ecoindex-out), executes its section(s),
and writes JSON always plus CSV when requested. All numeric output goes
through repr/json so reruns on identical inputs are byte-identical; the
report manifest's created_at stamp is deliberately the only field that
varies between reruns.

Exit codes: 0 success, 1 input or config error, 2 consistency-gate
failure, 3 partial section failure in a report run.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .ahp import derive_weights, load_matrix_file
from .carbon import CarbonParams, build_ledger, read_inventory_csv, stocks_from_inventory
from .config import (
    ConfigError,
    FeatureParamsConfig,
    FeaturesConfig,
    IndexConfig,
    RunConfig,
    load_config,
    referenced_paths,
)
from .indices import (
    EXPANDED_COEFFS,
    EI_THRESHOLD_OUTSTANDING,
    HAZARD_WARNING_LINE,
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
)
from .planning import required_reserve_area, unit_area_effect
from .sensitivity import perturb_h
from .weather import (
    FeatureParams,
    VisibilityMode,
    aggregate,
    derive_features,
    parse_weather_csv,
    write_features_csv,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONSISTENCY = 2
EXIT_PARTIAL = 3

# config keys -> symbols used in user-facing diagnostics
_SYMBOLS = {
    "fc": "FC",
    "fr": "FR",
    "s": "S",
    "d": "D",
    "df": "DF",
    "rf": "RF",
    "dv": "DV",
    "u": "U",
    "delta_t": "DELTA_T",
    "tr": "TR",
    "p": "P",
    "delta_p3": "DELTA_P3",
    "t": "T",
    "delta_t24": "DELTA_T24",
    "u_cubed": "U_CUBED",
    "pm25": "PM25",
    "nox": "NOX",
    "na": "NA",
    "nm": "NM",
    "np": "NP",
}

_REQUIRED_KEYS = {
    "EI": ("fc", "fr", "s", "d", "df", "rf"),
    "H": ("dv", "u", "delta_t", "tr", "p"),
    "H_expanded": ("u", "p", "delta_p3", "t", "delta_t", "dv", "delta_t24", "tr"),
    "EH": (
        "u",
        "p",
        "delta_p3",
        "t",
        "delta_t",
        "dv",
        "delta_t24",
        "tr",
        "u_cubed",
        "pm25",
        "nox",
        "na",
        "nm",
        "np",
    ),
}


class RunnerError(Exception):
    """A run failure carrying its CLI exit code."""

    def __init__(self, message: str, exit_code: int = EXIT_INPUT):
        super().__init__(message)
        self.exit_code = exit_code


def resolve_out_dir(cfg: RunConfig, base_dir: Path, flag_out: str | None) -> Path:
    if flag_out:
        return Path(flag_out)
    env = os.environ.get("ECOINDEX_OUT")
    if env:
        return Path(env)
    if cfg.output_dir:
        return base_dir / cfg.output_dir
    return Path("ecoindex-out")


def resolve_formats(cfg: RunConfig, flag_format: str | None) -> list[str]:
    if flag_format:
        return [flag_format]
    return list(cfg.formats)


def write_json(payload: Any, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _feature_params(cfg: FeatureParamsConfig) -> FeatureParams:
    return FeatureParams(
        u_s=cfg.u_s,
        dewp_window_days=cfg.dewp_window_days,
        bedding_factor=cfg.bedding_factor,
        x4=cfg.x4,
        epsilon=cfg.epsilon,
        visibility_mode=VisibilityMode(cfg.visibility_mode),
        absolute_deltas=cfg.absolute_deltas,
    )


# ---------------------------------------------------------------- sections


def run_weights_section(
    cfg: RunConfig, base_dir: Path, out_dir: Path, formats: Sequence[str]
) -> tuple[dict[str, Any], list[str], bool]:
    """Derive weights for every configured matrix file.

    Returns (payload, artifact names, all_consistent).
    """
    if cfg.weights is None or not cfg.weights.matrices:
        raise RunnerError("no matrices configured")
    ri_table = cfg.weights.ri_table
    artifacts: list[str] = []
    reports = []
    failing: list[str] = []
    for rel in cfg.weights.matrices:
        path = base_dir / rel
        matrix = load_matrix_file(path)
        report = derive_weights(matrix, ri_table=ri_table)
        name = Path(rel).stem
        payload = {
            "matrix": name,
            "source": rel,
            "order": matrix.order,
            "labels": list(matrix.labels) if matrix.labels else None,
            "weights": [float(w) for w in report.weights],
            "lambda_max": report.lambda_max,
            "ci": report.ci,
            "ri": report.ri,
            "cr": report.cr,
            "consistent": report.consistent,
        }
        reports.append(payload)
        if not report.consistent:
            failing.append(name)
        if "json" in formats:
            rel_out = f"weights/{name}.json"
            write_json(payload, out_dir / rel_out)
            artifacts.append(rel_out)
    if "csv" in formats:
        rows = [
            [r["matrix"], r["order"], r["lambda_max"], r["ci"], r["ri"], r["cr"], r["consistent"]]
            for r in reports
        ]
        rel_out = "weights/summary.csv"
        write_csv(["matrix", "order", "lambda_max", "ci", "ri", "cr", "consistent"], rows, out_dir / rel_out)
        artifacts.append(rel_out)
    section = {"reports": reports, "failing": failing, "all_consistent": not failing}
    return section, artifacts, not failing


def run_features_section(
    feat_cfg: FeaturesConfig, base_dir: Path, out_dir: Path, formats: Sequence[str]
) -> tuple[dict[str, Any], list[str], tuple]:
    """Parse one weather source and derive its feature table."""
    params = _feature_params(feat_cfg.params)
    records = parse_weather_csv(base_dir / feat_cfg.weather.path, schema=feat_cfg.weather.columns)
    features = derive_features(records, params)
    artifacts: list[str] = []
    label = feat_cfg.weather.label
    if "csv" in formats:
        rel_out = f"features/{label}.csv"
        target = out_dir / rel_out
        target.parent.mkdir(parents=True, exist_ok=True)
        write_features_csv(features, target)
        artifacts.append(rel_out)
    payload = {
        "label": label,
        "source": feat_cfg.weather.path,
        "records": len(records),
        "feature_rows": len(features),
    }
    return payload, artifacts, (records, features, feat_cfg.params)


def _period_inputs(
    records, features, params_cfg: FeatureParamsConfig, period: str, months
) -> dict[str, dict[str, float]]:
    """Aggregate derived features into per-period index inputs.

    Periodised values are arithmetic means over present observations.
    delta_t applies the run-wide minimum 24 h change as its floor; dv and
    u carry the x1/x2 offsets; delta_p3 is the mean absolute day-over-day
    station-pressure change; t is the mean temperature.
    """

    def agg(pairs):
        if not pairs:
            return {}
        return aggregate(pairs, period=period, months=months).values

    cols: dict[str, dict[str, float]] = {}
    for name in ("dv", "u", "delta_t24", "tr", "p", "u_cubed"):
        pairs = [(f.date, getattr(f, name)) for f in features if getattr(f, name) is not None]
        cols[name] = agg(pairs)

    slp_pairs = []
    for prev, cur in zip(records, records[1:]):
        if prev.slp is not None and cur.slp is not None:
            slp_pairs.append((cur.date, abs(cur.slp - prev.slp)))
    cols["delta_p3"] = agg(slp_pairs)
    cols["t"] = agg([(r.date, r.temp) for r in records if r.temp is not None])

    dt24_values = [f.delta_t24 for f in features if f.delta_t24 is not None]
    dt24_min = min(dt24_values) if dt24_values else 0.0

    periods = sorted({p for col in cols.values() for p in col})
    assembled: dict[str, dict[str, float]] = {}
    for p in periods:
        row: dict[str, float] = {}
        for name, col in cols.items():
            if p in col:
                row[name] = col[p]
        if "dv" in row:
            row["dv"] = row["dv"] + params_cfg.x1
        if "u" in row:
            row["u"] = row["u"] + params_cfg.x2
        if "delta_t24" in row:
            row["delta_t"] = row["delta_t24"] - dt24_min + params_cfg.x3
        assembled[p] = row
    return assembled


def _default_threshold(which: str) -> tuple[float, Direction]:
    if which == "EI":
        return EI_THRESHOLD_OUTSTANDING, Direction.HIGHER_IS_BETTER
    return HAZARD_WARNING_LINE, Direction.HIGHER_IS_WORSE


def _score_once(which: str, values: dict[str, float], weights) -> float:
    if which == "EI":
        return compute_ei(EiInputs(**{k: values[k] for k in _REQUIRED_KEYS["EI"]}))
    if which == "H":
        kwargs = {k: values[k] for k in _REQUIRED_KEYS["H"]}
        if weights is not None:
            kwargs["weights"] = tuple(weights)
        return compute_h(HInputs(**kwargs))
    if which == "H_expanded":
        return compute_h_expanded(
            HExpandedInputs(
                **{k: values[k] for k in _REQUIRED_KEYS["H_expanded"]},
                u_cubed=values.get("u_cubed"),
            )
        )
    if which == "EH":
        return compute_eh(EhInputs(**{k: values[k] for k in _REQUIRED_KEYS["EH"]}))
    raise RunnerError(f"unknown index kind {which!r}")


def _require(which: str, values: dict[str, float], context: str = "") -> None:
    for key in _REQUIRED_KEYS[which]:
        if key == "u_cubed" and which == "H_expanded":
            continue
        if key not in values or values[key] is None:
            where = f" in {context}" if context else ""
            raise RunnerError(f"{_SYMBOLS[key]} missing for {which}{where}")


def run_index_section(
    idx_cfg: IndexConfig,
    label: str,
    features_by_label: dict[str, tuple],
    out_dir: Path,
    formats: Sequence[str],
) -> tuple[dict[str, Any], list[str]]:
    which = idx_cfg.which
    threshold = idx_cfg.threshold
    direction = Direction(idx_cfg.direction) if idx_cfg.direction else None
    if threshold is None:
        default_thr, default_dir = _default_threshold(which)
        threshold = default_thr
        direction = direction or default_dir
    elif direction is None:
        _, direction = _default_threshold(which)

    provenance = {
        "index_name": which,
        "threshold": threshold,
        "direction": direction.value,
        "weights_used": list(idx_cfg.weights) if idx_cfg.weights else None,
        "coefficients": dict(EXPANDED_COEFFS) if which in ("H_expanded", "EH") else None,
    }

    artifacts: list[str] = []
    if idx_cfg.from_features is not None:
        if which == "EI":
            raise RunnerError("EI requires direct inputs, not a weather series")
        if idx_cfg.from_features not in features_by_label:
            raise RunnerError(f"unknown features label {idx_cfg.from_features!r}")
        records, features, params_cfg = features_by_label[idx_cfg.from_features]
        assembled = _period_inputs(records, features, params_cfg, idx_cfg.period, idx_cfg.months)
        series = []
        for period_key in sorted(assembled):
            values = dict(assembled[period_key])
            if idx_cfg.extras:
                values.update(idx_cfg.extras)
            _require(which, values, context=f"period {period_key}")
            score = _score_once(which, values, idx_cfg.weights)
            band = classify(score, threshold, direction).band.value
            series.append({"period": period_key, "score": score, "band": band})
        payload = {
            **provenance,
            "label": label,
            "source_features": idx_cfg.from_features,
            "period": idx_cfg.period,
            "months": idx_cfg.months,
            "series": series,
        }
        if "json" in formats:
            rel_out = f"indices/{label}.json"
            write_json(payload, out_dir / rel_out)
            artifacts.append(rel_out)
        if "csv" in formats:
            rel_out = f"indices/{label}.csv"
            write_csv(
                ["period", "score", "band"],
                [[s["period"], s["score"], s["band"]] for s in series],
                out_dir / rel_out,
            )
            artifacts.append(rel_out)
            time_col = "year" if idx_cfg.period == "annual" else "period"
            rel_plot = f"plots/{label}.csv"
            write_csv(
                [time_col, "score"],
                [[s["period"], s["score"]] for s in series],
                out_dir / rel_plot,
            )
            artifacts.append(rel_plot)
        return payload, artifacts

    values = dict(idx_cfg.inputs or {})
    if idx_cfg.extras:
        values.update(idx_cfg.extras)
    _require(which, values)
    unknown = set(values) - set(_REQUIRED_KEYS[which]) - {"u_cubed"}
    if unknown:
        raise RunnerError(f"unknown inputs for {which}: {', '.join(sorted(unknown))}")
    score = _score_once(which, values, idx_cfg.weights)
    band = classify(score, threshold, direction).band.value
    payload = {
        **provenance,
        "label": label,
        "score": score,
        "band": band,
        "inputs_echo": {k: values[k] for k in sorted(values)},
    }
    if "json" in formats:
        rel_out = f"indices/{label}.json"
        write_json(payload, out_dir / rel_out)
        artifacts.append(rel_out)
    return payload, artifacts


def run_carbon_section(
    cfg: RunConfig, base_dir: Path, out_dir: Path, formats: Sequence[str]
) -> tuple[dict[str, Any], list[str]]:
    if cfg.carbon is None:
        raise RunnerError("no carbon section configured")
    c = cfg.carbon
    params = CarbonParams(
        gamma=c.params.gamma,
        root_ratio=c.params.root_ratio,
        cf_economic=c.params.cf_economic,
        cf_bamboo=c.params.cf_bamboo,
        cf_shrub=c.params.cf_shrub,
        w_economic=c.params.w_economic,
        w_shrub=c.params.w_shrub,
        carbon_price=c.params.carbon_price,
        valuation_basis=c.params.valuation_basis,
    )
    quantities = dict(c.quantities or {})
    if c.inventory is not None:
        inventory = read_inventory_csv(base_dir / c.inventory)
        stocks, inv_quantities = stocks_from_inventory(inventory, params)
        quantities = {**inv_quantities, **quantities}
    elif c.stocks:
        stocks = dict(c.stocks)
    else:
        raise RunnerError("carbon section needs an inventory file or direct stocks")
    ledger = build_ledger(stocks, params, quantities=quantities or None)

    def row_dict(r) -> dict[str, Any]:
        return {
            "label": r.label,
            "stock_t": r.stock_t,
            "share": r.share,
            "co2_t": r.co2_t,
            "quantity": r.quantity,
            "value": r.value,
        }

    rows = [row_dict(r) for r in ledger.rows]
    payload = {
        "rows": rows,
        "total": row_dict(ledger.total),
        "co2_factor": ledger.co2_factor,
        "valuation_basis": ledger.valuation_basis,
        "carbon_price": ledger.carbon_price,
        "note": ledger.note,
    }
    artifacts: list[str] = []
    if "json" in formats:
        rel_out = "carbon/ledger.json"
        write_json(payload, out_dir / rel_out)
        artifacts.append(rel_out)
    if "csv" in formats:
        rel_out = "carbon/ledger.csv"
        write_csv(
            ["label", "quantity", "stock_t", "share", "co2_t", "value"],
            [
                [r["label"], r["quantity"], r["stock_t"], r["share"], r["co2_t"], r["value"]]
                for r in rows + [payload["total"]]
            ],
            out_dir / rel_out,
        )
        artifacts.append(rel_out)
    return payload, artifacts


def run_plan_section(
    cfg: RunConfig, out_dir: Path, formats: Sequence[str]
) -> tuple[dict[str, Any], list[str]]:
    if cfg.plan is None:
        raise RunnerError("no plan section configured")
    plan = cfg.plan
    payload: dict[str, Any] = {}
    effect = None
    if plan.region is not None:
        r = plan.region
        change = r.index_after - r.index_before
        effect = unit_area_effect(r.region_area, change, r.reserve_area)
        payload["region"] = {
            "region": r.region,
            "region_area": r.region_area,
            "reserve_area": r.reserve_area,
            "area_unit": r.area_unit,
            "index_before": r.index_before,
            "index_after": r.index_after,
            "index_change": change,
            "horizon_years": r.horizon_years,
            "unit_area_effect": effect,
        }
    if plan.sizing is not None:
        s = plan.sizing
        unit_effect = None
        if s.form == "unit_effect":
            if effect is None:
                raise RunnerError("unit_effect sizing form needs a region section")
            unit_effect = effect
        sizing = required_reserve_area(
            s.current_index,
            s.target_index,
            s.region_area,
            s.horizon_years,
            unit_effect=unit_effect,
            form=s.form,
        )
        payload["sizing"] = {
            "current_index": s.current_index,
            "target_index": s.target_index,
            "region_area": s.region_area,
            "horizon_years": s.horizon_years,
            "form": sizing.form.value,
            "required_area": sizing.area,
            "note": sizing.note,
        }
    if not payload:
        raise RunnerError("plan section is empty")
    artifacts: list[str] = []
    if "json" in formats:
        rel_out = "plan/plan.json"
        write_json(payload, out_dir / rel_out)
        artifacts.append(rel_out)
    if "csv" in formats:
        rows = []
        for group, body in sorted(payload.items()):
            for key, value in sorted(body.items()):
                rows.append([f"{group}.{key}", value])
        rel_out = "plan/plan.csv"
        write_csv(["field", "value"], rows, out_dir / rel_out)
        artifacts.append(rel_out)
    return payload, artifacts


def run_sensitivity_section(
    cfg: RunConfig, out_dir: Path, formats: Sequence[str]
) -> tuple[dict[str, Any], list[str]]:
    if cfg.sensitivity is None:
        raise RunnerError("no sensitivity section configured")
    s = cfg.sensitivity
    report = perturb_h(s.features, s.variable, s.relative_delta)
    payload = asdict(report)
    artifacts: list[str] = []
    if "json" in formats:
        rel_out = "sensitivity/report.json"
        write_json(payload, out_dir / rel_out)
        artifacts.append(rel_out)
    if "csv" in formats:
        rows = [[k, payload[k]] for k in sorted(payload)]
        rel_out = "sensitivity/report.csv"
        write_csv(["field", "value"], rows, out_dir / rel_out)
        artifacts.append(rel_out)
    return payload, artifacts


# ---------------------------------------------------------------- commands


def _load(config_path: str) -> tuple[RunConfig, Path]:
    try:
        return load_config(config_path)
    except ConfigError as exc:
        raise RunnerError(str(exc)) from exc


def _index_label(idx_cfg: IndexConfig, position: int) -> str:
    return idx_cfg.label or f"{idx_cfg.which.lower()}_{position}"


def _build_features(
    cfg: RunConfig, base_dir: Path, out_dir: Path, formats: Sequence[str]
) -> tuple[dict[str, tuple], list[dict[str, Any]], list[str]]:
    features_by_label: dict[str, tuple] = {}
    payloads = []
    artifacts: list[str] = []
    for feat_cfg in cfg.features:
        payload, arts, bundle = run_features_section(feat_cfg, base_dir, out_dir, formats)
        features_by_label[feat_cfg.weather.label] = bundle
        payloads.append(payload)
        artifacts.extend(arts)
    return features_by_label, payloads, artifacts


def cmd_weights(config_path: str, out: str | None = None, fmt: str | None = None) -> int:
    try:
        cfg, base_dir = _load(config_path)
        out_dir = resolve_out_dir(cfg, base_dir, out)
        formats = resolve_formats(cfg, fmt)
        section, _, all_ok = run_weights_section(cfg, base_dir, out_dir, formats)
    except (RunnerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_INPUT)
    for report in section["reports"]:
        flag = "pass" if report["consistent"] else "FAIL"
        print(
            f"{report['matrix']}: lambda_max={report['lambda_max']:.4f} "
            f"cr={report['cr']:.4f} [{flag}]"
        )
    if section["failing"]:
        print(f"consistency failure: {', '.join(section['failing'])}", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


def cmd_index(config_path: str, out: str | None = None, fmt: str | None = None) -> int:
    try:
        cfg, base_dir = _load(config_path)
        if not cfg.indices:
            raise RunnerError("no indices configured")
        out_dir = resolve_out_dir(cfg, base_dir, out)
        formats = resolve_formats(cfg, fmt)
        features_by_label, _, _ = _build_features(cfg, base_dir, out_dir, formats)
        for position, idx_cfg in enumerate(cfg.indices):
            label = _index_label(idx_cfg, position)
            payload, _ = run_index_section(idx_cfg, label, features_by_label, out_dir, formats)
            if "score" in payload:
                print(f"{label}: {payload['index_name']} = {payload['score']:.4f} ({payload['band']})")
            else:
                print(f"{label}: {payload['index_name']} series, {len(payload['series'])} periods")
    except (RunnerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_INPUT)
    return EXIT_OK


def cmd_carbon(config_path: str, out: str | None = None, fmt: str | None = None) -> int:
    try:
        cfg, base_dir = _load(config_path)
        out_dir = resolve_out_dir(cfg, base_dir, out)
        formats = resolve_formats(cfg, fmt)
        payload, _ = run_carbon_section(cfg, base_dir, out_dir, formats)
    except (RunnerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_INPUT)
    for row in payload["rows"] + [payload["total"]]:
        share = f"{row['share'] * 100:.2f}%" if row["share"] is not None else "-"
        print(f"{row['label']}: stock={row['stock_t']:.2f} t share={share} co2={row['co2_t']:.2f} t")
    return EXIT_OK


def cmd_plan(config_path: str, out: str | None = None, fmt: str | None = None) -> int:
    try:
        cfg, base_dir = _load(config_path)
        out_dir = resolve_out_dir(cfg, base_dir, out)
        formats = resolve_formats(cfg, fmt)
        payload, _ = run_plan_section(cfg, out_dir, formats)
    except (RunnerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_INPUT)
    if "region" in payload:
        print(f"unit_area_effect: {payload['region']['unit_area_effect']:.4f}")
    if "sizing" in payload:
        print(f"required_area ({payload['sizing']['form']}): {payload['sizing']['required_area']:.2f}")
    return EXIT_OK


def cmd_sensitivity(config_path: str, out: str | None = None, fmt: str | None = None) -> int:
    try:
        cfg, base_dir = _load(config_path)
        out_dir = resolve_out_dir(cfg, base_dir, out)
        formats = resolve_formats(cfg, fmt)
        payload, _ = run_sensitivity_section(cfg, out_dir, formats)
    except (RunnerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_INPUT)
    print(
        f"{payload['variable']}: exact dH={payload['delta_h_exact']:.6f} "
        f"first-order dH={payload['first_order_delta_h']:.6f}"
    )
    return EXIT_OK


_SECTION_ORDER = ("weights", "features", "indices", "carbon", "plan", "sensitivity")


def cmd_report(config_path: str, out: str | None = None, fmt: str | None = None) -> int:
    try:
        cfg, base_dir = _load(config_path)
    except RunnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    missing = [p for p in referenced_paths(cfg, base_dir) if not p.is_file()]
    if missing:
        for p in missing:
            print(f"error: missing input file: {p}", file=sys.stderr)
        return EXIT_INPUT

    out_dir = resolve_out_dir(cfg, base_dir, out)
    formats = resolve_formats(cfg, fmt)
    sections: dict[str, dict[str, Any]] = {}
    consistency_failed = False

    def record(name: str, status: str, artifacts: list[str], error: str | None = None) -> None:
        sections[name] = {"status": status, "artifacts": sorted(artifacts)}
        if error is not None:
            sections[name]["error"] = error

    features_by_label: dict[str, tuple] = {}

    if cfg.weights is not None:
        try:
            _, arts, all_ok = run_weights_section(cfg, base_dir, out_dir, formats)
            consistency_failed = consistency_failed or not all_ok
            record("weights", "ok", arts)
        except (RunnerError, ValueError) as exc:
            record("weights", "error", [], str(exc))

    if cfg.features:
        try:
            features_by_label, _, arts = _build_features(cfg, base_dir, out_dir, formats)
            record("features", "ok", arts)
        except (RunnerError, ValueError) as exc:
            record("features", "error", [], str(exc))

    if cfg.indices:
        arts_all: list[str] = []
        errors: list[str] = []
        for position, idx_cfg in enumerate(cfg.indices):
            label = _index_label(idx_cfg, position)
            try:
                _, arts = run_index_section(idx_cfg, label, features_by_label, out_dir, formats)
                arts_all.extend(arts)
            except (RunnerError, ValueError) as exc:
                errors.append(f"{label}: {exc}")
        if errors:
            record("indices", "error", arts_all, "; ".join(errors))
        else:
            record("indices", "ok", arts_all)

    if cfg.carbon is not None:
        try:
            _, arts = run_carbon_section(cfg, base_dir, out_dir, formats)
            record("carbon", "ok", arts)
        except (RunnerError, ValueError) as exc:
            record("carbon", "error", [], str(exc))

    if cfg.plan is not None:
        try:
            _, arts = run_plan_section(cfg, out_dir, formats)
            record("plan", "ok", arts)
        except (RunnerError, ValueError) as exc:
            record("plan", "error", [], str(exc))

    if cfg.sensitivity is not None:
        try:
            _, arts = run_sensitivity_section(cfg, out_dir, formats)
            record("sensitivity", "ok", arts)
        except (RunnerError, ValueError) as exc:
            record("sensitivity", "error", [], str(exc))

    config_file = Path(config_path)
    manifest = {
        "created_at": datetime.now(timezone.utc).isoformat(),
        "tool": {"name": "ecoindex", "version": __version__},
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "config": {"path": config_file.name, "sha256": sha256_file(config_file)},
        "inputs": {
            str(rel): sha256_file(base_dir / rel)
            for rel in _referenced_relative(cfg)
        },
        "parameters": cfg.model_dump(mode="json", by_alias=True),
        "sections": {name: sections[name] for name in _SECTION_ORDER if name in sections},
    }
    write_json(manifest, out_dir / "manifest.json")

    for name in _SECTION_ORDER:
        if name in sections:
            status = sections[name]["status"]
            suffix = f" ({sections[name].get('error', '')})" if status == "error" else ""
            print(f"{name}: {status}{suffix}")

    if any(s["status"] == "error" for s in sections.values()):
        return EXIT_PARTIAL
    if consistency_failed:
        return EXIT_CONSISTENCY
    return EXIT_OK


def _referenced_relative(cfg: RunConfig) -> list[str]:
    rels: list[str] = []
    if cfg.weights is not None:
        rels.extend(cfg.weights.matrices)
    for feat in cfg.features:
        rels.append(feat.weather.path)
    if cfg.carbon is not None and cfg.carbon.inventory is not None:
        rels.append(cfg.carbon.inventory)
    return rels
