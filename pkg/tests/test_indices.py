"""Composite index formulas and threshold classification."""

from __future__ import annotations

import pytest

from ecoindex.indices import (
    DEFAULT_H_WEIGHTS,
    EH_EXTRA_COEFFS,
    EI_THRESHOLD_OUTSTANDING,
    EXPANDED_COEFFS,
    HAZARD_WARNING_LINE,
    Band,
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
    expanded_inputs_from_mapping,
    speciate_area_score,
)

ALL_ONES = dict(u=1.0, p=1.0, delta_p3=1.0, t=1.0, delta_t=1.0, dv=1.0, delta_t24=1.0, tr=1.0)


def test_ei_reference_evaluations():
    before = compute_ei(EiInputs(fc=0.17, fr=0.114, s=0.096, d=0.46, df=7.21, rf=0.891))
    after = compute_ei(EiInputs(fc=0.82, fr=0.82, s=0.784, d=0.15, df=8.87, rf=1.04))
    assert before == pytest.approx(15.525514246575344, abs=1e-12)
    assert after == pytest.approx(70.33546958904108, abs=1e-12)


def test_ei_one_hot_coefficients():
    zeros = dict(fc=0.0, fr=0.0, s=0.0, d=0.0, df=0.0, rf=0.0)
    assert compute_ei(EiInputs(**{**zeros, "fc": 1.0})) == 62.42
    assert compute_ei(EiInputs(**{**zeros, "fr": 1.0})) == 15.12
    assert compute_ei(EiInputs(**{**zeros, "s": 1.0})) == 4.51
    # the day-count terms carry the /365 annualization
    assert compute_ei(EiInputs(**{**zeros, "d": 365.0})) == pytest.approx(5.24)
    assert compute_ei(EiInputs(**{**zeros, "df": 365.0})) == pytest.approx(3.04)
    assert compute_ei(EiInputs(**{**zeros, "rf": 1.0})) == 3.02


def test_ei_input_validation():
    with pytest.raises(ValueError, match="must be finite"):
        EiInputs(fc=float("nan"), fr=0, s=0, d=0, df=0, rf=0)
    with pytest.raises(ValueError, match=r"d must lie in \[0, 366\]"):
        EiInputs(fc=0, fr=0, s=0, d=400.0, df=0, rf=0)
    with pytest.raises(ValueError, match="df must lie in"):
        EiInputs(fc=0, fr=0, s=0, d=0, df=-1.0, rf=0)


def test_speciate_area_score():
    assert speciate_area_score(511.264, 0.35, 24, 140) == pytest.approx(30.67584, abs=1e-9)
    assert speciate_area_score(511.264, 0.35, 115.1, 140) == pytest.approx(147.116216, abs=1e-9)
    with pytest.raises(ValueError, match="invalid base area"):
        speciate_area_score(100.0, 0.35, 24, 0.0)


def test_h_unit_vector_sums_to_weight_total():
    score = compute_h(HInputs(dv=1, u=1, delta_t=1, tr=1, p=1))
    assert score == pytest.approx(1.001, abs=1e-9)
    assert score == pytest.approx(sum(DEFAULT_H_WEIGHTS), abs=1e-12)


def test_h_one_hot_returns_each_weight():
    zeros = dict(dv=0.0, u=0.0, delta_t=0.0, tr=0.0, p=0.0)
    for name, weight in zip(("dv", "u", "delta_t", "tr", "p"), DEFAULT_H_WEIGHTS):
        assert compute_h(HInputs(**{**zeros, name: 1.0})) == weight


def test_h_custom_weights_and_validation():
    score = compute_h(HInputs(dv=1, u=2, delta_t=0, tr=0, p=0, weights=(0.5, 0.25, 0.1, 0.1, 0.05)))
    assert score == pytest.approx(1.0)
    with pytest.raises(ValueError, match="expected 5 weights"):
        HInputs(dv=0, u=0, delta_t=0, tr=0, p=0, weights=(0.5, 0.5))
    with pytest.raises(ValueError, match="nonnegative"):
        HInputs(dv=0, u=0, delta_t=0, tr=0, p=0, weights=(-0.1, 0.4, 0.3, 0.2, 0.2))
    with pytest.raises(ValueError, match="weights sum to 0.8000"):
        HInputs(dv=0, u=0, delta_t=0, tr=0, p=0, weights=(0.2, 0.2, 0.2, 0.1, 0.1))


def test_expanded_all_ones_matches_coefficient_sum():
    score = compute_h_expanded(HExpandedInputs(**ALL_ONES, u_cubed=1.0))
    assert score == pytest.approx(sum(EXPANDED_COEFFS.values()), abs=1e-12)
    assert score == pytest.approx(1.001, abs=1e-9)


def test_expanded_cubic_term_tracks_u_by_default():
    zeros = {k: 0.0 for k in ALL_ONES}
    score = compute_h_expanded(HExpandedInputs(**{**zeros, "u": 2.0}))
    assert score == pytest.approx(0.628, abs=1e-12)  # 0.246*2 + 0.017*8
    override = compute_h_expanded(HExpandedInputs(**{**zeros, "u": 2.0}, u_cubed=0.0))
    assert override == pytest.approx(0.492, abs=1e-12)


def test_expanded_one_hot_coefficients():
    zeros = {k: 0.0 for k in ALL_ONES}
    for name, coeff in EXPANDED_COEFFS.items():
        if name in ("u", "u_cubed"):
            continue
        assert compute_h_expanded(HExpandedInputs(**{**zeros, name: 1.0})) == coeff


def test_expanded_accepts_feature_mapping():
    assert compute_h_expanded(dict(ALL_ONES)) == pytest.approx(1.001, abs=1e-9)
    bundle = {**ALL_ONES, "u_cubed": 0.0, "u": 2.0}
    assert compute_h_expanded(bundle) == pytest.approx(
        compute_h_expanded(HExpandedInputs(**bundle))
    )


def test_expanded_mapping_reports_missing_terms():
    bundle = dict(ALL_ONES)
    bundle.pop("tr")
    bundle["dv"] = None
    with pytest.raises(ValueError, match="incomplete feature bundle: missing"):
        expanded_inputs_from_mapping(bundle)
    try:
        expanded_inputs_from_mapping(bundle)
    except ValueError as exc:
        assert "dv" in str(exc) and "tr" in str(exc)


def test_eh_all_ones_matches_coefficient_sum():
    score = compute_eh(
        EhInputs(**ALL_ONES, u_cubed=1.0, pm25=1.0, nox=1.0, na=1.0, nm=1.0, np=1.0)
    )
    assert score == pytest.approx(1.297, abs=1e-9)


def test_eh_one_hot_extras():
    zeros = dict(
        {k: 0.0 for k in ALL_ONES}, u_cubed=0.0, pm25=0.0, nox=0.0, na=0.0, nm=0.0, np=0.0
    )
    assert compute_eh(EhInputs(**{**zeros, "pm25": 1.0})) == EH_EXTRA_COEFFS["pm25"]
    assert compute_eh(EhInputs(**{**zeros, "nox": 1.0})) == EH_EXTRA_COEFFS["nox"]
    assert compute_eh(EhInputs(**{**zeros, "na": 1.0})) == EH_EXTRA_COEFFS["na"]
    assert compute_eh(EhInputs(**{**zeros, "nm": 1.0})) == EH_EXTRA_COEFFS["nm"]
    assert compute_eh(EhInputs(**{**zeros, "np": 1.0})) == EH_EXTRA_COEFFS["np"]
    # u_cubed is an independent input for the full index
    assert compute_eh(EhInputs(**{**zeros, "u_cubed": 1.0})) == EXPANDED_COEFFS["u_cubed"]


def test_eh_rejects_negative_counts():
    good = dict(
        {k: 0.0 for k in ALL_ONES}, u_cubed=0.0, pm25=0.0, nox=0.0, na=0.0, nm=0.0, np=0.0
    )
    with pytest.raises(ValueError, match="count nm must be nonnegative"):
        EhInputs(**{**good, "nm": -1.0})


def test_classification_bands_and_tie_rule():
    worse = classify(25.0, HAZARD_WARNING_LINE, Direction.HIGHER_IS_WORSE)
    assert worse.band is Band.ABOVE_WARNING
    assert classify(20.0, 20.0, Direction.HIGHER_IS_WORSE).band is Band.BELOW_WARNING
    better = classify(70.3, EI_THRESHOLD_OUTSTANDING, Direction.HIGHER_IS_BETTER)
    assert better.band is Band.OUTSTANDING
    assert classify(48.0, 48.0, Direction.HIGHER_IS_BETTER).band is Band.NOT_OUTSTANDING
    assert classify(15.5, 48.0, Direction.HIGHER_IS_BETTER).band is Band.NOT_OUTSTANDING


def test_classification_band_values_are_stable_strings():
    assert Band.ABOVE_WARNING.value == "AboveWarning"
    assert Band.BELOW_WARNING.value == "BelowWarning"
    assert Band.OUTSTANDING.value == "Outstanding"
    assert Band.NOT_OUTSTANDING.value == "NotOutstanding"
    assert Direction.HIGHER_IS_WORSE.value == "higher_is_worse"


def test_classify_requires_finite_threshold():
    with pytest.raises(ValueError, match="threshold must be finite"):
        classify(1.0, float("inf"), Direction.HIGHER_IS_WORSE)
