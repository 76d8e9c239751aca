"""Sensitivity of the expanded hazard form to its inputs.

The analytic wind-speed slope is d/du (0.246u + 0.017u^3) = 0.246 +
0.051u^2; every other term is linear with its printed coefficient.
Perturbation reports recompute the index exactly at the shifted input and
show the first-order approximation alongside, so the dropped cubic
contribution is visible. Inside a perturbation u^3 always tracks u; it is
not an independent variable here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Mapping

from .indices import EXPANDED_COEFFS, HExpandedInputs, compute_h_expanded, expanded_inputs_from_mapping

VALID_VARIABLES = ("u", "p", "delta_p3", "t", "delta_t", "dv", "delta_t24", "tr")


def dh_du(u: float) -> float:
    """Analytic slope of the expanded form in wind speed."""
    return 0.246 + 0.051 * u * u


def finite_difference(f: Callable[[float], float], x: float, step: float) -> float:
    """Central difference (f(x+step) - f(x-step)) / (2 step)."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    hi = f(x + step)
    lo = f(x - step)
    if not (math.isfinite(hi) and math.isfinite(lo)):
        raise ValueError("function not evaluable at stencil")
    return (hi - lo) / (2.0 * step)


@dataclass
class SensitivityReport:
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


def _index_as_function_of(base: HExpandedInputs, variable: str) -> Callable[[float], float]:
    def f(x: float) -> float:
        return compute_h_expanded(replace(base, **{variable: x}, u_cubed=None))

    return f


def perturb_h(
    features: HExpandedInputs | Mapping[str, float | None],
    variable: str,
    relative_delta: float,
) -> SensitivityReport:
    """Exact perturbation report for one expanded-form variable.

    The input shifts by relative_delta times its base value; the index is
    recomputed exactly (with u^3 re-derived from u when u is the
    variable), and the slope-times-shift first-order value is reported for
    comparison.

    Raises:
        ValueError: for a variable outside the term set or a negative
            relative delta.
    """
    if variable not in VALID_VARIABLES:
        raise ValueError(
            f"unknown variable {variable!r}; valid variables: {', '.join(VALID_VARIABLES)}"
        )
    if relative_delta < 0:
        raise ValueError(f"relative delta must be nonnegative, got {relative_delta}")
    if not isinstance(features, HExpandedInputs):
        features = expanded_inputs_from_mapping(features)
    base = replace(features, u_cubed=None)  # u^3 tracks u throughout

    base_value = getattr(base, variable)
    base_index = compute_h_expanded(base)
    f = _index_as_function_of(base, variable)

    def exact_delta(rel: float) -> float:
        return f(base_value * (1.0 + rel)) - base_index

    shift = base_value * relative_delta
    analytic = dh_du(base_value) if variable == "u" else EXPANDED_COEFFS[variable]
    fd_step = 1e-6 * max(1.0, abs(base_value))
    report = SensitivityReport(
        variable=variable,
        base_value=base_value,
        analytic_slope=analytic,
        fd_slope=finite_difference(f, base_value, fd_step),
        delta_h_at_10pct=exact_delta(0.1),
        dominant_term=_dominant_term(variable, base_value, shift),
        relative_delta=relative_delta,
        delta_h_exact=exact_delta(relative_delta),
        # the comparison value keeps only the linear coefficient, dropping
        # the cubic wind contribution the exact delta retains
        first_order_delta_h=EXPANDED_COEFFS[variable] * shift,
        base_index=base_index,
    )
    return report


def _dominant_term(variable: str, base: float, shift: float) -> str:
    if variable != "u":
        return variable
    linear = abs(EXPANDED_COEFFS["u"] * shift)
    cubic = abs(EXPANDED_COEFFS["u_cubed"] * ((base + shift) ** 3 - base**3))
    return "u" if linear >= cubic else "u_cubed"
