import io
import json
import math

import pytest

from hermgauss.cli import ConfigError, main, parse_config, run


def config_text(**overrides):
    base = {
        "state": {"type": "eigenstate", "n": 1},
        "point": {"mu": 0.0, "sigma": 1.0},
        "command": "metric",
    }
    base.update(overrides)
    return json.dumps(base)


def run_capture(text):
    cfg = parse_config(text)
    out = io.StringIO()
    status = run(cfg, out)
    return status, out.getvalue()


class TestParseConfig:
    def test_minimal(self):
        cfg = parse_config(config_text())
        assert cfg.command == "metric"
        assert cfg.state.kind == "eigenstate"
        assert (cfg.point.mu, cfg.point.sigma) == (0.0, 1.0)

    def test_physical_block(self):
        raw = json.loads(config_text())
        del raw["point"]
        raw["physical"] = {"mass": 2.0, "omega0": 1.0, "x0": 3.0}
        cfg = parse_config(json.dumps(raw))
        assert cfg.point.mu == 3.0
        assert cfg.point.sigma == pytest.approx(0.5)

    def test_point_and_physical_conflict(self):
        raw = json.loads(config_text())
        raw["physical"] = {"mass": 1.0, "omega0": 1.0, "x0": 0.0}
        with pytest.raises(ConfigError):
            parse_config(json.dumps(raw))

    def test_superposition_terms(self):
        cfg = parse_config(config_text(state={
            "type": "superposition",
            "terms": [{"n": 0, "re": 0.6}, {"n": 2, "re": 0.8}]}))
        assert cfg.state.kind == "superposition"

    def test_invalid_json(self):
        with pytest.raises(ConfigError):
            parse_config("{not json")

    def test_unknown_command(self):
        with pytest.raises(ConfigError):
            parse_config(config_text(command="sing"))

    def test_unnormalized_state_rejected_without_flag(self):
        state = {"type": "mixture",
                 "terms": [{"n": 0, "weight": 0.4}, {"n": 1, "weight": 0.4}]}
        with pytest.raises(ConfigError):
            parse_config(config_text(state=state))
        cfg = parse_config(config_text(state=state, renormalize=True))
        assert cfg.state.kind == "mixture"

    def test_missing_state(self):
        with pytest.raises(ConfigError):
            parse_config(json.dumps({"command": "metric",
                                     "point": {"mu": 0, "sigma": 1}}))

    def test_bad_sigma(self):
        with pytest.raises(ConfigError):
            parse_config(config_text(point={"mu": 0.0, "sigma": -1.0}))


class TestCommands:
    def test_metric_eigenstate_three_paths(self):
        status, text = run_capture(config_text(
            state={"type": "eigenstate", "n": 3}))
        assert status == 0
        report = json.loads(text)
        assert len(report["paths"]) == 3
        for entry in report["paths"]:
            assert entry["reduced"][0] == pytest.approx(7.0, rel=1e-8)
            assert entry["reduced"][2] == pytest.approx(26.0, rel=1e-8)

    def test_curvature_mixture(self):
        state = {"type": "mixture",
                 "terms": [{"n": 0, "weight": 0.5}, {"n": 1, "weight": 0.5}]}
        status, text = run_capture(config_text(state=state, command="curvature"))
        assert status == 0
        report = json.loads(text)
        assert report["reduced_formula"]["scalar_r"] == pytest.approx(-0.604,
                                                                      abs=1e-3)
        assert report["discrepancy"] <= 1e-4

    def test_verify_even_superposition(self):
        state = {"type": "superposition",
                 "terms": [{"n": 0, "re": 0.6}, {"n": 2, "re": 0.8}]}
        status, text = run_capture(config_text(state=state, command="verify"))
        assert status == 0
        report = json.loads(text)
        assert report["all_passed"]
        names = {c["name"] for c in report["checks"]}
        assert "offdiagonal_vanishes" in names
        assert "series_vs_quadrature" in names

    def test_verify_is_byte_identical_across_runs(self):
        text = config_text(command="verify")
        _, a = run_capture(text)
        _, b = run_capture(text)
        assert a == b

    def test_geodesic_csv(self):
        raw = json.loads(config_text(command="geodesic"))
        raw["geodesic"] = {"velocity": [0.2, 0.1], "tau_end": 1.0, "steps": 50}
        raw["output"] = {"format": "csv"}
        status, text = run_capture(json.dumps(raw))
        assert status == 0
        lines = text.strip().splitlines()
        assert lines[0] == "tau,mu,sigma,dmu_dtau,dsigma_dtau"
        assert len(lines) == 52

    def test_sample_command_seeded(self):
        raw = json.loads(config_text(command="sample"))
        raw["estimation"] = {"count": 16, "seed": 9}
        _, a = run_capture(json.dumps(raw))
        _, b = run_capture(json.dumps(raw))
        assert a == b
        assert len(json.loads(a)["draws"]) == 16

    def test_json_floats_round_trip(self):
        status, text = run_capture(config_text(
            state={"type": "mixture",
                   "terms": [{"n": 0, "weight": 0.5}, {"n": 1, "weight": 0.5}]}))
        report = json.loads(text)
        # Re-serializing the parsed report reproduces the bytes exactly:
        # every float is emitted with shortest round-trip precision.
        assert json.dumps(report, indent=2) + "\n" == text

    def test_computational_failure_exits_one(self, capsys):
        raw = json.loads(config_text(
            state={"type": "mixture",
                   "terms": [{"n": 0, "weight": 0.5}, {"n": 1, "weight": 0.5}]}))
        raw["quad"] = {"rel_tol": 1e-15, "abs_tol": 1e-300,
                       "max_evaluations": 60}
        cfg = parse_config(json.dumps(raw))
        status = run(cfg, io.StringIO())
        assert status == 1
        err = json.loads(capsys.readouterr().err)
        assert "error" in err


class TestMain:
    def test_file_config(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(config_text())
        assert main([str(path)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["command"] == "metric"

    def test_flag_overrides(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(config_text())
        assert main([str(path), "--mu", "1.0", "--sigma", "2.0"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["point"] == {"mu": 1.0, "sigma": 2.0}
        # reduced components are point-independent; full ones pick up 1/sigma^2
        assert report["paths"][0]["i_mumu"] == pytest.approx(3.0 / 4.0)

    def test_config_error_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{}")
        assert main([str(path)]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["type"] == "ConfigError"

    def test_missing_file_exits_two(self, tmp_path, capsys):
        assert main([str(tmp_path / "absent.json")]) == 2
        assert "cannot read config" in capsys.readouterr().err
