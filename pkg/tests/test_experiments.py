"""Experiment pipelines: config resolution, manifests, CSV schemas, CLI."""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from review_lottery.cli import main
from review_lottery.experiments import (
    ConfigError,
    ExperimentConfig,
    parse_config_file,
    resolve_config,
    run_experiment,
)


def read_csv(path: Path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# review-lottery v")
    assert "config=sha256:" in lines[0]
    rows = list(csv.DictReader(lines[1:]))
    return lines[0], rows


class TestConfigResolution:
    def test_defaults_materialized(self):
        cfg = resolve_config("ai-scenario")
        assert cfg.values["params.sigma"] == 0.3
        assert cfg.values["params.lottery_rate"] == 0.2
        assert cfg.values["sweep.multipliers"] == (1.0, 1.5, 2.0)

    def test_precedence_file_set_flags(self, tmp_path):
        f = tmp_path / "cfg.txt"
        f.write_text("params.sigma=0.4\nmc.base_seed=1\n")
        cfg = resolve_config(
            "ai-scenario",
            file_pairs=parse_config_file(f),
            set_pairs={"params.sigma": "0.5"},
            flag_pairs={"mc.base_seed": "9"},
        )
        assert cfg.values["params.sigma"] == 0.5
        assert cfg.values["mc.base_seed"] == 9

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            resolve_config("ai-scenario", set_pairs={"nope": "1"})

    def test_unknown_experiment_rejected(self):
        with pytest.raises(ConfigError):
            resolve_config("frobnicate")

    def test_params_r_derives_s(self):
        cfg = resolve_config("solve-nash", set_pairs={"params.r": "0.25"})
        assert cfg.params.s == pytest.approx(3.0)
        assert cfg.params.r == pytest.approx(0.25)

    def test_quality_dist_label(self):
        cfg = resolve_config("solve-planner",
                             set_pairs={"params.quality_dist": "beta:2,5"})
        assert cfg.params.quality_dist.kind == "beta"

    def test_manifest_reparses_identically(self, tmp_path):
        cfg = resolve_config("ai-scenario", set_pairs={"params.sigma": "0.37"})
        f = tmp_path / "m.txt"
        f.write_text("\n".join(cfg.manifest_lines()) + "\n")
        cfg2 = resolve_config("ai-scenario", file_pairs=parse_config_file(f))
        assert cfg.values == cfg2.values
        assert cfg.config_hash() == cfg2.config_hash()

    def test_hash_ignores_output_dir_and_threads(self):
        a = resolve_config("ai-scenario", set_pairs={"output.dir": "x"})
        b = resolve_config("ai-scenario", set_pairs={"output.dir": "y", "threads": "4"})
        assert a.config_hash() == b.config_hash()


class TestAiScenario:
    def test_outputs_and_gates(self, tmp_path):
        cfg = resolve_config("ai-scenario", set_pairs={"output.dir": str(tmp_path)})
        out = run_experiment(cfg)
        header, rows = read_csv(tmp_path / "ai_scenario.csv")
        assert [r["multiplier"] for r in rows] == ["1.0", "1.5", "2.0"]
        assert float(rows[0]["relative_loss"]) == 0.0
        assert rows[2]["recovers"] == "true"
        payload = json.loads((tmp_path / "ai_scenario.json").read_text())
        assert payload["rows"][2]["recovers"] is True
        assert not out.nonconverged

    def test_rerun_from_manifest_byte_identical(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        run_experiment(resolve_config("ai-scenario", set_pairs={"output.dir": str(d1)}))
        manifest = parse_config_file(d1 / "ai_scenario_manifest.txt")
        run_experiment(resolve_config("ai-scenario", file_pairs=manifest,
                                      flag_pairs={"output.dir": str(d2)}))
        assert (d1 / "ai_scenario.csv").read_bytes() == (d2 / "ai_scenario.csv").read_bytes()
        assert (d1 / "ai_scenario.json").read_bytes() == (d2 / "ai_scenario.json").read_bytes()


class TestPhaseDiagram:
    def test_small_grid_and_contour(self, tmp_path):
        cfg = resolve_config("phase-diagram", set_pairs={
            "output.dir": str(tmp_path),
            "sweep.sigma": "0.01,0.3,0.5",
            "sweep.beta": "0,8",
        })
        run_experiment(cfg)
        _, rows = read_csv(tmp_path / "phase_diagram.csv")
        tiny = [r for r in rows if float(r["sigma"]) == 0.01]
        assert all(float(r["gain"]) <= 0.0 for r in tiny)
        at03 = {float(r["beta"]): float(r["gain"]) for r in rows
                if float(r["sigma"]) == 0.3}
        assert at03[8.0] > at03[0.0]
        _, crows = read_csv(tmp_path / "phase_diagram_contour.csv")
        by_beta = {float(r["beta"]): r["sigma_zero"] for r in crows}
        assert by_beta[0.0] == ""            # never crosses zero
        assert 0.01 < float(by_beta[8.0]) < 0.3


class TestScaleSweep:
    def test_continuum_columns(self, tmp_path):
        cfg = resolve_config("scale-sweep", set_pairs={
            "output.dir": str(tmp_path),
            "mc.enabled": "false",
        })
        run_experiment(cfg)
        _, rows = read_csv(tmp_path / "scale_sweep.csv")
        for beta in (2.0, 4.0, 8.0):
            sub = [r for r in rows if float(r["beta"]) == beta]
            q = [float(r["q_bar_continuum"]) for r in sub]
            # slack covers float cancellation at astronomically large
            # sigma_eff where q_bar sits at the random-selection limit
            assert all(a >= b - 1e-6 for a, b in zip(q, q[1:]))
            ref = [r for r in sub if int(r["n"]) == 50][0]
            assert float(ref["sigma_eff"]) == 0.3

    def test_beta_zero_constant(self, tmp_path):
        cfg = resolve_config("scale-sweep", set_pairs={
            "output.dir": str(tmp_path),
            "mc.enabled": "false",
            "sweep.beta": "0",
            "sweep.n": "50,200,800",
        })
        run_experiment(cfg)
        _, rows = read_csv(tmp_path / "scale_sweep.csv")
        q = {float(r["q_bar_continuum"]) for r in rows}
        assert len(q) == 1


class TestPlannerVsNash:
    def test_schema_and_row(self, tmp_path):
        cfg = resolve_config("planner-vs-nash", set_pairs={
            "output.dir": str(tmp_path),
            "sweep.sigma": "0.3",
        })
        out = run_experiment(cfg)
        header, rows = read_csv(tmp_path / "planner_vs_nash.csv")
        first = rows[0]
        assert list(first.keys()) == [
            "sigma", "q_bar_none", "q_bar_planner", "q_bar_nash",
            "tau_planner", "tau_nash", "q_bar_mc", "q_bar_mc_se", "converged"]
        assert float(first["q_bar_planner"]) >= float(first["q_bar_nash"])
        assert float(first["q_bar_nash"]) >= float(first["q_bar_none"]) - 1e-9
        assert first["q_bar_mc"] == ""      # rows complete, cells empty without --mc
        assert first["converged"] == "true"
        assert not out.nonconverged
        _, prows = read_csv(tmp_path / "planner_vs_nash_profiles.csv")
        assert float(prows[0]["tau_planner"]) >= float(prows[0]["tau_nash"])


class TestSizeEffect:
    def test_small_run_schema(self, tmp_path):
        cfg = resolve_config("size-effect", set_pairs={
            "output.dir": str(tmp_path),
            "sweep.n": "100",
            "sweep.r": "0.5,0.99",
        })
        run_experiment(cfg)
        _, rows = read_csv(tmp_path / "size_effect.csv")
        gains = {float(r["r"]): float(r["gain"]) for r in rows}
        assert gains[0.5] > gains[0.99] - 1e-12
        assert gains[0.99] <= 0.005


class TestMcValidate:
    def test_small_grid_and_summary(self, tmp_path):
        cfg = resolve_config("mc-validate", set_pairs={
            "output.dir": str(tmp_path),
            "sweep.sigma": "0.3",
            "sweep.tau": "0.0,0.4",
            "mc.m": "400",
        })
        run_experiment(cfg)
        _, rows = read_csv(tmp_path / "mc_validate.csv")
        assert len(rows) == 2
        _, srows = read_csv(tmp_path / "mc_validate_summary.csv")
        assert int(srows[0]["points"]) == 2
        assert float(srows[0]["max_abs_z"]) == pytest.approx(
            max(abs(float(r["z"])) for r in rows))

    def test_snapped_vs_exact_tau_at_fine_grid(self):
        from review_lottery.continuum import accepted_mean_quality
        from review_lottery import ModelParams, ThresholdStrategy, tau_grid
        p = ModelParams(sigma=0.3)
        tau = 0.4321
        grid = tau_grid(200)
        snapped = float(grid[np.argmin(np.abs(grid - tau))])
        a = accepted_mean_quality(ThresholdStrategy(tau), p)
        b = accepted_mean_quality(ThresholdStrategy(snapped), p)
        assert abs(a - b) <= 1e-3


class TestCli:
    def test_success_exit_zero(self, tmp_path, capsys):
        code = main(["ai-scenario", "--out", str(tmp_path)])
        assert code == 0
        assert "ai_scenario.csv" in capsys.readouterr().out

    def test_config_error_exit_two(self, tmp_path):
        assert main(["ai-scenario", "--set", "bogus=1", "--out", str(tmp_path)]) == 2
        assert main(["ai-scenario", "--set", "params.sigma=-1",
                     "--out", str(tmp_path)]) == 2

    def test_nonconvergence_exit_three(self, tmp_path):
        # a 3-point strategy grid cannot host a verified equilibrium here
        code = main(["solve-nash", "--set", "tau_grid=3", "--out", str(tmp_path)])
        assert code == 3
        payload = json.loads((tmp_path / "nash.json").read_text())
        assert payload["converged"] is False

    def test_seed_flag_applies(self, tmp_path):
        code = main(["mc-validate", "--out", str(tmp_path), "--seed", "7",
                     "--set", "sweep.sigma=0.3", "--set", "sweep.tau=0.0",
                     "--set", "mc.m=50"])
        assert code == 0
        manifest = parse_config_file(tmp_path / "mc_validate_manifest.txt")
        assert manifest["mc.base_seed"] == "7"

    def test_json_uses_twelve_significant_digits(self, tmp_path):
        main(["solve-planner", "--out", str(tmp_path)])
        payload = json.loads((tmp_path / "planner.json").read_text())
        text = json.dumps(payload["q_bar"])
        digits = text.replace("-", "").replace(".", "").lstrip("0")
        assert len(digits) <= 12
