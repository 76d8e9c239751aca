"""FastAPI application wrapping the core assessment functions.

Every endpoint is a thin adapter: validate the body, call the pure core
function, shape the response. Domain errors (ValueError) map to HTTP 422
with the original message.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..ahp import JudgmentMatrix, MatrixKind, derive_weights, exact_max_eigenvalue, validate_matrix
from ..carbon import CarbonParams, build_ledger
from ..indices import (
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
from ..planning import required_reserve_area, unit_area_effect
from ..sensitivity import perturb_h
from ..stats import pearson, spearman, trend_forecast
from . import schemas

_KIND = {"raw": MatrixKind.RAW_SAATY, "column_normalized": MatrixKind.COLUMN_NORMALIZED}


def _matrix(body: schemas.MatrixRequest) -> JudgmentMatrix:
    return JudgmentMatrix(
        entries=np.asarray(body.entries, dtype=float),
        kind=_KIND[body.kind],
        labels=tuple(body.labels) if body.labels else None,
    )


def _classified(
    name: str,
    score: float,
    threshold: float | None,
    direction: str | None,
    default_threshold: float,
    default_direction: Direction,
) -> schemas.ClassifiedScore:
    thr = default_threshold if threshold is None else threshold
    direc = default_direction if direction is None else Direction(direction)
    result = classify(score, thr, direc)
    return schemas.ClassifiedScore(
        index_name=name,
        score=score,
        band=result.band.value,
        threshold=thr,
        direction=direc.value,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="ecoindex", version=__version__)

    @app.exception_handler(ValueError)
    async def _domain_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/weights/validate", response_model=schemas.ValidationResponse)
    def weights_validate(body: schemas.MatrixRequest) -> schemas.ValidationResponse:
        report = validate_matrix(_matrix(body))
        return schemas.ValidationResponse(valid=report.valid, violations=list(report.violations))

    @app.post("/weights/derive", response_model=schemas.WeightResponse)
    def weights_derive(body: schemas.MatrixRequest) -> schemas.WeightResponse:
        report = derive_weights(_matrix(body), ri_table=body.ri_table)
        return schemas.WeightResponse(
            weights=[float(w) for w in report.weights],
            lambda_max=report.lambda_max,
            ci=report.ci,
            ri=report.ri,
            cr=report.cr,
            consistent=report.consistent,
            labels=list(report.labels) if report.labels else None,
        )

    @app.post("/weights/eigenvalue", response_model=schemas.EigenvalueResponse)
    def weights_eigenvalue(body: schemas.MatrixRequest) -> schemas.EigenvalueResponse:
        return schemas.EigenvalueResponse(lambda_max=exact_max_eigenvalue(_matrix(body)))

    @app.post("/indices/ei", response_model=schemas.ClassifiedScore)
    def indices_ei(body: schemas.EiRequest) -> schemas.ClassifiedScore:
        score = compute_ei(EiInputs(fc=body.fc, fr=body.fr, s=body.s, d=body.d, df=body.df, rf=body.rf))
        return _classified(
            "EI", score, body.threshold, body.direction,
            EI_THRESHOLD_OUTSTANDING, Direction.HIGHER_IS_BETTER,
        )

    @app.post("/indices/h", response_model=schemas.ClassifiedScore)
    def indices_h(body: schemas.HRequest) -> schemas.ClassifiedScore:
        kwargs = dict(dv=body.dv, u=body.u, delta_t=body.delta_t, tr=body.tr, p=body.p)
        if body.weights is not None:
            kwargs["weights"] = tuple(body.weights)
        score = compute_h(HInputs(**kwargs))
        return _classified(
            "H", score, body.threshold, body.direction,
            HAZARD_WARNING_LINE, Direction.HIGHER_IS_WORSE,
        )

    @app.post("/indices/h-expanded", response_model=schemas.ClassifiedScore)
    def indices_h_expanded(body: schemas.HExpandedRequest) -> schemas.ClassifiedScore:
        score = compute_h_expanded(
            HExpandedInputs(
                u=body.u, p=body.p, delta_p3=body.delta_p3, t=body.t, delta_t=body.delta_t,
                dv=body.dv, delta_t24=body.delta_t24, tr=body.tr, u_cubed=body.u_cubed,
            )
        )
        return _classified(
            "H_expanded", score, body.threshold, body.direction,
            HAZARD_WARNING_LINE, Direction.HIGHER_IS_WORSE,
        )

    @app.post("/indices/eh", response_model=schemas.ClassifiedScore)
    def indices_eh(body: schemas.EhRequest) -> schemas.ClassifiedScore:
        score = compute_eh(
            EhInputs(
                u=body.u, p=body.p, delta_p3=body.delta_p3, t=body.t, delta_t=body.delta_t,
                dv=body.dv, delta_t24=body.delta_t24, tr=body.tr, u_cubed=body.u_cubed,
                pm25=body.pm25, nox=body.nox, na=body.na, nm=body.nm, np=body.np,
            )
        )
        return _classified(
            "EH", score, body.threshold, body.direction,
            HAZARD_WARNING_LINE, Direction.HIGHER_IS_WORSE,
        )

    @app.post("/carbon/ledger", response_model=schemas.LedgerResponse)
    def carbon_ledger(body: schemas.LedgerRequest) -> schemas.LedgerResponse:
        params = CarbonParams(
            gamma=body.params.gamma,
            root_ratio=body.params.root_ratio,
            cf_economic=body.params.cf_economic,
            cf_bamboo=body.params.cf_bamboo,
            cf_shrub=body.params.cf_shrub,
            w_economic=body.params.w_economic,
            w_shrub=body.params.w_shrub,
            carbon_price=body.params.carbon_price,
            valuation_basis=body.params.valuation_basis,
        )
        ledger = build_ledger(body.stocks, params, quantities=body.quantities)

        def row_body(r) -> schemas.LedgerRowBody:
            return schemas.LedgerRowBody(
                label=r.label, stock_t=r.stock_t, share=r.share,
                co2_t=r.co2_t, quantity=r.quantity, value=r.value,
            )

        return schemas.LedgerResponse(
            rows=[row_body(r) for r in ledger.rows],
            total=row_body(ledger.total),
            co2_factor=ledger.co2_factor,
            valuation_basis=ledger.valuation_basis,
            carbon_price=ledger.carbon_price,
            note=ledger.note,
        )

    @app.post("/planning/unit-effect", response_model=schemas.UnitEffectResponse)
    def planning_unit_effect(body: schemas.UnitEffectRequest) -> schemas.UnitEffectResponse:
        value = unit_area_effect(body.region_area, body.index_change, body.reserve_area)
        return schemas.UnitEffectResponse(unit_area_effect=value)

    @app.post("/planning/reserve-area", response_model=schemas.ReserveAreaResponse)
    def planning_reserve_area(body: schemas.ReserveAreaRequest) -> schemas.ReserveAreaResponse:
        sizing = required_reserve_area(
            body.current_index,
            body.target_index,
            body.region_area,
            body.horizon_years,
            unit_effect=body.unit_effect,
            form=body.form,
        )
        return schemas.ReserveAreaResponse(area=sizing.area, form=sizing.form.value, note=sizing.note)

    @app.post("/sensitivity/perturb", response_model=schemas.SensitivityResponse)
    def sensitivity_perturb(body: schemas.SensitivityRequest) -> schemas.SensitivityResponse:
        report = perturb_h(body.features, body.variable, body.relative_delta)
        return schemas.SensitivityResponse(
            variable=report.variable,
            base_value=report.base_value,
            analytic_slope=report.analytic_slope,
            fd_slope=report.fd_slope,
            delta_h_at_10pct=report.delta_h_at_10pct,
            dominant_term=report.dominant_term,
            relative_delta=report.relative_delta,
            delta_h_exact=report.delta_h_exact,
            first_order_delta_h=report.first_order_delta_h,
            base_index=report.base_index,
        )

    @app.post("/stats/correlation", response_model=schemas.CorrelationResponse)
    def stats_correlation(body: schemas.CorrelationRequest) -> schemas.CorrelationResponse:
        fn = pearson if body.method == "pearson" else spearman
        return schemas.CorrelationResponse(method=body.method, value=fn(body.x, body.y))

    @app.post("/stats/trend", response_model=schemas.TrendResponse)
    def stats_trend(body: schemas.TrendRequest) -> schemas.TrendResponse:
        forecast = trend_forecast(body.times, body.values, horizon=body.horizon, label=body.label)
        return schemas.TrendResponse(
            points=[
                schemas.TrendPointBody(time=p.time, value=p.value, predicted=p.predicted)
                for p in forecast.points
            ],
            slope=forecast.slope,
            intercept=forecast.intercept,
            residual_std=forecast.residual_std,
            label=forecast.label,
        )

    return app
