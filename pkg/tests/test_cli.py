"""Command line tests"""
import json
from dataclasses import replace

import pytest

from ccdbench.cli import EXIT_FAILURE, SIGNALS_FILE, TRUTH_FILE, main
from ccdbench.config import DetectorSpec
from ccdbench.const import ENV_WORKERS, DetectorName
from ccdbench.signals import SignalSet


@pytest.fixture(autouse=True)
def _no_worker_environment(monkeypatch):
    monkeypatch.delenv(ENV_WORKERS, raising=False)


@pytest.fixture
def config_path(small_config, tmp_path):
    path = tmp_path / "sweep.json"
    small_config.dump(path)
    return path


class TestSimulate:
    def test_coupled(self, tmp_path):
        assert main(["simulate", "--samples", "500", "--seed", "3", "--out", str(tmp_path)]) == 0
        signals = SignalSet.from_csv(tmp_path / SIGNALS_FILE)
        assert (signals.d, signals.t) == (2, 500)
        truth = json.loads((tmp_path / TRUTH_FILE).read_text(encoding="utf-8"))
        assert truth["summary"]["edges"] == [[0, 1]]

    def test_planted_var(self, tmp_path):
        assert main(["simulate", "--scenario", "var", "--samples", "300", "--out", str(tmp_path)]) == 0
        truth = json.loads((tmp_path / TRUTH_FILE).read_text(encoding="utf-8"))
        assert truth["window"]["lagged"] == [[0, 0, 1], [0, 1, 1], [1, 1, 1]]

    def test_from_config(self, config_path, tmp_path):
        out = tmp_path / "data"
        assert main(["simulate", "--config", str(config_path), "--out", str(out)]) == 0
        assert SignalSet.from_csv(out / SIGNALS_FILE).t == 2000


class TestDetect:
    def test_prints_json(self, tmp_path, capsys):
        main(["simulate", "--samples", "2000", "--seed", "1", "--out", str(tmp_path)])
        capsys.readouterr()
        code = main(["detect", str(tmp_path / SIGNALS_FILE), "--detector", "gc_var", "-q", "60"])
        assert code == 0
        output = json.loads(capsys.readouterr().out)
        assert output["detector"] == "gc_var"
        assert [[r["source"], r["target"]] for r in output["results"]] == [[0, 1], [1, 0]]
        assert output["summary"]["d"] == 2

    def test_window_graph_for_var_learner(self, tmp_path, capsys):
        main(["simulate", "--scenario", "var", "--samples", "5000", "--out", str(tmp_path)])
        capsys.readouterr()
        assert main(["detect", str(tmp_path / SIGNALS_FILE), "--detector", "var_graph", "-q", "1"]) == 0
        output = json.loads(capsys.readouterr().out)
        assert output["window"]["lagged"] == [[0, 0, 1], [0, 1, 1], [1, 1, 1]]

    def test_infeasible_window(self, tmp_path):
        main(["simulate", "--samples", "50", "--out", str(tmp_path)])
        assert main(["detect", str(tmp_path / SIGNALS_FILE), "-q", "40"]) == EXIT_FAILURE

    def test_bad_params(self, tmp_path):
        main(["simulate", "--samples", "500", "--out", str(tmp_path)])
        assert main(["detect", str(tmp_path / SIGNALS_FILE), "--params", "{bins"]) == EXIT_FAILURE
        assert main(["detect", str(tmp_path / SIGNALS_FILE), "--params", '{"bins": 3}']) == EXIT_FAILURE

    def test_missing_file(self, tmp_path):
        assert main(["detect", str(tmp_path / "absent.csv")]) == EXIT_FAILURE


class TestSweep:
    def test_worker_count_does_not_change_csv(self, config_path, tmp_path):
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert main(["sweep", "--config", str(config_path), "--out", str(serial), "--workers", "1"]) == 0
        assert main(["sweep", "--config", str(config_path), "--out", str(parallel), "--workers", "8"]) == 0
        assert (serial / "records.csv").read_bytes() == (parallel / "records.csv").read_bytes()
        assert (serial / "config.json").exists()

    def test_json_format(self, config_path, tmp_path):
        assert main(["sweep", "--config", str(config_path), "--out", str(tmp_path / "out"), "--format", "json"]) == 0
        assert len(json.loads((tmp_path / "out" / "records.json").read_text(encoding="utf-8"))) == 16

    def test_bad_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"version": 1, "q_values": [0]}), encoding="utf-8")
        assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_FAILURE

    def test_fractional_sample_count(self, tmp_path):
        path = tmp_path / "fractional.json"
        path.write_text(json.dumps({"version": 1, "dgp": {"n_samples": 2000.5}}), encoding="utf-8")
        assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_FAILURE
        assert not (tmp_path / "out" / "records.csv").exists()

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as error:
            main(["fit"])
        assert error.value.code == 2


class TestReport:
    def test_heatmaps_for_grid(self, config_path, tmp_path):
        main(["sweep", "--config", str(config_path), "--out", str(tmp_path)])
        figures = tmp_path / "figures"
        assert main(["report", str(tmp_path / "records.csv"), "--out", str(figures)]) == 0
        assert sorted(path.name for path in figures.iterdir()) == ["gc_var_f1.svg", "var_graph_f1.svg"]

    def test_line_plot_for_single_axis(self, small_config, tmp_path):
        path = tmp_path / "line.json"
        replace(small_config, detectors=(DetectorSpec(DetectorName.GC_VAR),), k_values=(1,)).dump(path)
        main(["sweep", "--config", str(path), "--out", str(tmp_path)])
        assert main(["report", str(tmp_path / "records.csv"), "--metric", "decision_rate", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "decision_rate_Q.svg").exists()


class TestReplicate:
    def test_unknown_preset(self):
        with pytest.raises(SystemExit):
            main(["replicate", "fig_other"])

    def test_vary_k(self, tmp_path, capsys):
        assert main(["replicate", "fig_varyK", "--out", str(tmp_path), "--seeds", "1"]) == 0
        printed = capsys.readouterr().out.split()
        assert printed[-1].endswith("fig_varyK_statistic.svg")
