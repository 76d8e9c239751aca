"""Batch commands end to end: exit codes, artifacts, output-dir precedence."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from ecoindex import runner
from ecoindex.cli import main as cli_main

EXPECTED_REPORT_ARTIFACTS = {
    "weights/b1.json",
    "weights/b2.json",
    "weights/b3.json",
    "weights/b4.json",
    "weights/b5.json",
    "weights/summary.csv",
    "features/synthetic.csv",
    "indices/baseline-1962.json",
    "indices/restored-2016.json",
    "indices/synthetic-annual.json",
    "indices/synthetic-annual.csv",
    "plots/synthetic-annual.csv",
    "indices/synthetic-eh.json",
    "indices/synthetic-eh.csv",
    "plots/synthetic-eh.csv",
    "carbon/ledger.json",
    "carbon/ledger.csv",
    "plan/plan.json",
    "plan/plan.csv",
    "sensitivity/report.json",
    "sensitivity/report.csv",
    "manifest.json",
}


def _tree(root):
    return {str(p.relative_to(root)) for p in root.rglob("*") if p.is_file()}


def test_weights_command_passes_bundled_matrices(configs, tmp_path, capsys):
    code = runner.cmd_weights(str(configs / "weights.json"), out=str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("[pass]") == 5
    assert "b1: lambda_max=5.1394" in out
    summary = (tmp_path / "weights" / "summary.csv").read_text().splitlines()
    assert summary[0] == "matrix,order,lambda_max,ci,ri,cr,consistent"
    assert len(summary) == 6
    payload = json.loads((tmp_path / "weights" / "b1.json").read_text())
    assert payload["labels"] == ["C6", "C1", "C2", "C3", "C4"]
    assert payload["consistent"] is True
    assert payload["cr"] == pytest.approx(0.031123203459125698)


def test_weights_command_gates_on_consistency(configs, tmp_path, capsys):
    code = runner.cmd_weights(str(configs / "weights_inconsistent.json"), out=str(tmp_path))
    assert code == 2
    captured = capsys.readouterr()
    assert "consistency failure: cycle3" in captured.err
    assert "cycle3" in captured.out and "[FAIL]" in captured.out
    # artifacts for the failing matrix still exist for inspection
    assert (tmp_path / "weights" / "cycle3.json").is_file()


def test_weights_command_input_errors(configs, tmp_path, capsys):
    assert runner.cmd_weights(str(configs / "weights_empty.json"), out=str(tmp_path)) == 1
    assert "no matrices configured" in capsys.readouterr().err
    assert runner.cmd_weights(str(configs / "weights_malformed.json"), out=str(tmp_path)) == 1
    assert "malformed.txt:3: invalid matrix entry 'oops'" in capsys.readouterr().err
    assert runner.cmd_weights(str(tmp_path / "absent.json"), out=str(tmp_path)) == 1
    assert "cannot read config" in capsys.readouterr().err


def test_index_command_direct_scores(configs, tmp_path, capsys):
    code = runner.cmd_index(str(configs / "indices_direct.json"), out=str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    assert "baseline-1962: EI = 15.5255 (NotOutstanding)" in out
    assert "restored-2016: EI = 70.3355 (Outstanding)" in out
    assert "h-unit: H = 1.0010 (BelowWarning)" in out
    assert "eh-zero-day: EH = 0.0000 (BelowWarning)" in out
    payload = json.loads((tmp_path / "indices" / "baseline-1962.json").read_text())
    assert payload["score"] == pytest.approx(15.525514246575344, abs=1e-12)
    assert payload["threshold"] == 48.0
    assert payload["direction"] == "higher_is_better"
    assert payload["inputs_echo"]["fc"] == 0.17


def test_index_command_series_from_weather(configs, tmp_path, capsys):
    code = runner.cmd_index(str(configs / "index_series.json"), out=str(tmp_path))
    assert code == 0
    assert "synthetic-annual: H_expanded series, 2 periods" in capsys.readouterr().out
    payload = json.loads((tmp_path / "indices" / "synthetic-annual.json").read_text())
    periods = [s["period"] for s in payload["series"]]
    assert periods == ["2020", "2021"]
    for entry in payload["series"]:
        assert entry["band"] in ("AboveWarning", "BelowWarning")
    plot = (tmp_path / "plots" / "synthetic-annual.csv").read_text().splitlines()
    assert plot[0] == "year,score"
    assert len(plot) == 3
    table = (tmp_path / "indices" / "synthetic-annual.csv").read_text().splitlines()
    assert table[0] == "period,score,band"


def test_index_command_errors(configs, tmp_path, capsys):
    assert runner.cmd_index(str(configs / "weights.json"), out=str(tmp_path)) == 1
    assert "no indices configured" in capsys.readouterr().err


def test_index_rejects_unknown_direct_inputs(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"indices": [{
        "which": "H",
        "inputs": {"dv": 1.0, "u": 1.0, "delta_t": 1.0, "tr": 1.0, "p": 1.0, "zz": 9.0},
    }]}))
    assert runner.cmd_index(str(cfg), out=str(tmp_path / "out")) == 1
    assert "unknown inputs for H: zz" in capsys.readouterr().err


def test_index_missing_symbol_diagnostic(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"indices": [{
        "which": "EI",
        "inputs": {"fc": 0.1, "fr": 0.1, "s": 0.1, "d": 1.0, "df": 1.0},
    }]}))
    assert runner.cmd_index(str(cfg), out=str(tmp_path / "out")) == 1
    assert "RF missing for EI" in capsys.readouterr().err


def test_carbon_command_stocks(configs, tmp_path, capsys):
    code = runner.cmd_carbon(str(configs / "carbon_stocks.json"), out=str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    assert "total: stock=5947300.00 t share=100.00% co2=21806766.67 t" in out
    assert "arbor: stock=5826400.00 t share=97.97%" in out
    payload = json.loads((tmp_path / "carbon" / "ledger.json").read_text())
    assert payload["total"]["co2_t"] == pytest.approx(21806766.666666664)
    assert payload["co2_factor"] == pytest.approx(44.0 / 12.0)
    csv_lines = (tmp_path / "carbon" / "ledger.csv").read_text().splitlines()
    assert csv_lines[0] == "label,quantity,stock_t,share,co2_t,value"
    assert csv_lines[-1].startswith("total,")
    assert len(csv_lines) == 6  # header, four types, total


def test_carbon_command_inventory_with_valuation(configs, tmp_path):
    code = runner.cmd_carbon(str(configs / "carbon_inventory.json"), out=str(tmp_path))
    assert code == 0
    payload = json.loads((tmp_path / "carbon" / "ledger.json").read_text())
    rows = {r["label"]: r for r in payload["rows"]}
    assert rows["arbor"]["stock_t"] == pytest.approx(524264.0)
    assert rows["economic"]["stock_t"] == pytest.approx(31860.99309, abs=1e-5)
    assert rows["bamboo"]["stock_t"] == pytest.approx(15000.0)
    assert rows["shrub"]["stock_t"] == pytest.approx(14054.6952, abs=1e-6)
    assert rows["economic"]["quantity"] == pytest.approx(2860.31)
    assert payload["carbon_price"] == 40.0
    assert rows["arbor"]["value"] == pytest.approx(524264.0 * 40.0)


def test_carbon_command_requires_inputs(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"carbon": {}}))
    assert runner.cmd_carbon(str(cfg), out=str(tmp_path / "out")) == 1
    assert "inventory file or direct stocks" in capsys.readouterr().err


def test_plan_command(configs, tmp_path, capsys):
    code = runner.cmd_plan(str(configs / "plan.json"), out=str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    assert "unit_area_effect: 39.5368" in out
    assert "required_area (direct): 917063.81" in out
    payload = json.loads((tmp_path / "plan" / "plan.json").read_text())
    assert payload["region"]["unit_area_effect"] == pytest.approx(39.53684684684685, rel=1e-12)
    assert payload["region"]["index_change"] == pytest.approx(14.793)
    assert payload["sizing"]["required_area"] == pytest.approx(917063.81, abs=1e-6)
    table = (tmp_path / "plan" / "plan.csv").read_text().splitlines()
    assert table[0] == "field,value"
    assert any(line.startswith("region.unit_area_effect,") for line in table)


def test_plan_unit_effect_form_uses_region_effect(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"plan": {
        "region": {
            "region_area": 178000.0, "reserve_area": 66600.0,
            "index_before": 12.357, "index_after": 27.15, "horizon_years": 10.0,
        },
        "sizing": {
            "current_index": 40.213, "target_index": 20.0,
            "region_area": 453700.0, "horizon_years": 10.0, "form": "unit_effect",
        },
    }}))
    assert runner.cmd_plan(str(cfg), out=str(tmp_path / "out")) == 0
    payload = json.loads((tmp_path / "out" / "plan" / "plan.json").read_text())
    effect = payload["region"]["unit_area_effect"]
    expected = (40.213 - 20.0) * 453700.0 / (effect * 10.0)
    assert payload["sizing"]["required_area"] == pytest.approx(expected, rel=1e-12)


def test_plan_unit_effect_form_requires_region(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"plan": {"sizing": {
        "current_index": 40.0, "target_index": 20.0,
        "region_area": 1000.0, "horizon_years": 10.0, "form": "unit_effect",
    }}}))
    assert runner.cmd_plan(str(cfg), out=str(tmp_path / "out")) == 1
    assert "unit_effect sizing form needs a region section" in capsys.readouterr().err


def test_sensitivity_command(configs, tmp_path, capsys):
    code = runner.cmd_sensitivity(str(configs / "sensitivity.json"), out=str(tmp_path))
    assert code == 0
    assert "u: exact dH=0.030227 first-order dH=0.024600" in capsys.readouterr().out
    payload = json.loads((tmp_path / "sensitivity" / "report.json").read_text())
    assert payload["delta_h_exact"] == pytest.approx(0.030227, abs=1e-9)
    assert payload["first_order_delta_h"] == pytest.approx(0.0246, abs=1e-12)
    assert payload["dominant_term"] == "u"


def test_report_runs_every_section(configs, tmp_path, capsys):
    code = runner.cmd_report(str(configs / "report.json"), out=str(tmp_path))
    assert code == 0
    out = capsys.readouterr().out
    for section in ("weights", "features", "indices", "carbon", "plan", "sensitivity"):
        assert f"{section}: ok" in out
    assert _tree(tmp_path) == EXPECTED_REPORT_ARTIFACTS
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["tool"]["name"] == "ecoindex"
    assert set(manifest["sections"]) == {
        "weights", "features", "indices", "carbon", "plan", "sensitivity"
    }
    assert all(s["status"] == "ok" for s in manifest["sections"].values())
    assert len(manifest["inputs"]) == 6
    assert all(len(digest) == 64 for digest in manifest["inputs"].values())
    assert manifest["config"]["path"] == "report.json"
    assert "created_at" in manifest


def test_report_fails_fast_on_missing_inputs(configs, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = runner.cmd_report(str(configs / "report_missing.json"), out=str(out_dir))
    assert code == 1
    assert "missing input file" in capsys.readouterr().err
    assert not out_dir.exists()  # nothing was computed or written


def test_report_partial_failure_keeps_good_sections(configs, tmp_path, capsys):
    code = runner.cmd_report(str(configs / "report_partial.json"), out=str(tmp_path))
    assert code == 3
    out = capsys.readouterr().out
    assert "carbon: ok" in out
    assert "sensitivity: error (unknown variable 'bogus'" in out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["sections"]["carbon"]["status"] == "ok"
    assert manifest["sections"]["sensitivity"]["status"] == "error"
    assert "valid variables" in manifest["sections"]["sensitivity"]["error"]
    assert (tmp_path / "carbon" / "ledger.json").is_file()


def test_report_propagates_consistency_exit(configs, tmp_path):
    code = runner.cmd_report(str(configs / "weights_inconsistent.json"), out=str(tmp_path))
    assert code == 2
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["sections"]["weights"]["status"] == "ok"  # ran, but gate failed


def test_report_all_sentinel_features_exit_zero(configs, tmp_path, capsys):
    code = runner.cmd_report(str(configs / "features_only.json"), out=str(tmp_path))
    assert code == 0
    assert "features: ok" in capsys.readouterr().out
    lines = (tmp_path / "features" / "silent.csv").read_text().splitlines()
    assert len(lines) == 4  # header plus three all-missing rows
    assert lines[1] == "2020-01-01,,,,,,,"


def test_format_flag_restricts_artifacts(configs, tmp_path):
    assert runner.cmd_carbon(str(configs / "carbon_stocks.json"), out=str(tmp_path), fmt="json") == 0
    assert (tmp_path / "carbon" / "ledger.json").is_file()
    assert not (tmp_path / "carbon" / "ledger.csv").exists()
    other = tmp_path / "csv-only"
    assert runner.cmd_carbon(str(configs / "carbon_stocks.json"), out=str(other), fmt="csv") == 0
    assert (other / "carbon" / "ledger.csv").is_file()
    assert not (other / "carbon" / "ledger.json").exists()


def test_out_dir_precedence(tmp_path, monkeypatch):
    cfg_dir = tmp_path / "cfgs"
    cfg_dir.mkdir()
    cfg = cfg_dir / "cfg.json"
    cfg.write_text(json.dumps({
        "output_dir": "from-config",
        "plan": {"sizing": {
            "current_index": 30.0, "target_index": 20.0,
            "region_area": 100.0, "horizon_years": 5.0,
        }},
    }))
    # config's own output_dir resolves against the config file's directory
    assert runner.cmd_plan(str(cfg)) == 0
    assert (cfg_dir / "from-config" / "plan" / "plan.json").is_file()
    # the environment variable overrides the config
    env_dir = tmp_path / "from-env"
    monkeypatch.setenv("ECOINDEX_OUT", str(env_dir))
    assert runner.cmd_plan(str(cfg)) == 0
    assert (env_dir / "plan" / "plan.json").is_file()
    # the flag overrides both
    flag_dir = tmp_path / "from-flag"
    assert runner.cmd_plan(str(cfg), out=str(flag_dir)) == 0
    assert (flag_dir / "plan" / "plan.json").is_file()


def test_out_dir_default_is_cwd_relative(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"plan": {"sizing": {
        "current_index": 30.0, "target_index": 20.0,
        "region_area": 100.0, "horizon_years": 5.0,
    }}}))
    workdir = tmp_path / "work"
    workdir.mkdir()
    monkeypatch.chdir(workdir)
    assert runner.cmd_plan(str(cfg)) == 0
    assert (workdir / "ecoindex-out" / "plan" / "plan.json").is_file()


def test_cli_entry_points(configs, tmp_path):
    cli = CliRunner()
    result = cli.invoke(cli_main, ["--help"])
    assert result.exit_code == 0
    for name in ("weights", "index", "carbon", "plan", "sensitivity", "report", "serve"):
        assert name in result.output
    ok = cli.invoke(
        cli_main, ["weights", "--config", str(configs / "weights.json"), "--out", str(tmp_path)]
    )
    assert ok.exit_code == 0
    gated = cli.invoke(
        cli_main,
        ["weights", "--config", str(configs / "weights_inconsistent.json"), "--out", str(tmp_path)],
    )
    assert gated.exit_code == 2
    report = cli.invoke(
        cli_main,
        ["report", "--config", str(configs / "report_partial.json"), "--out", str(tmp_path / "r")],
    )
    assert report.exit_code == 3
    missing_flag = cli.invoke(cli_main, ["index"])
    assert missing_flag.exit_code == 2  # click usage error for the absent --config
    bad_format = cli.invoke(
        cli_main,
        ["carbon", "--config", str(configs / "carbon_stocks.json"), "--format", "xml"],
    )
    assert bad_format.exit_code == 2


def test_cli_version():
    cli = CliRunner()
    result = cli.invoke(cli_main, ["--version"])
    assert result.exit_code == 0
    assert "ecoindex" in result.output
