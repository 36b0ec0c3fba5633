"""Sweep configuration tests"""
import json

import pytest

from ccdbench.config import ConfigException, DetectorSpec, SweepConfig, default_config, resolve_workers
from ccdbench.const import CONFIG_VERSION, DEFAULT_SEED, ENV_WORKERS, DetectorName, Scenario
from ccdbench.signals import design_delay_fir


def _document(**extra):
    return {"version": CONFIG_VERSION, **extra}


class TestFromDict:
    def test_defaults(self):
        config = SweepConfig.from_dict(_document())
        assert config.scenario is Scenario.COUPLED
        assert config.detectors == (DetectorSpec(DetectorName.GC_VAR),)
        assert (config.q_values, config.k_values, config.seeds) == ((5,), (1,), (0,))
        assert config.dgp.coupling_taps == tuple(design_delay_fir(50, 2))
        assert config.base_seed == DEFAULT_SEED
        assert config.cell_count == 1

    def test_full_document(self):
        config = SweepConfig.from_dict(
            _document(
                dgp={"n_samples": 3000, "seed": 9, "coupling_delay": 10, "coupling_half_width": 1},
                detectors=["gc_f", {"name": "te", "params": {"bins": 3}}],
                q_values=[1, 5, 20],
                k_values=[1, 2],
                seeds={"base": 100, "count": 4},
                anti_alias=True,
                workers=3,
            )
        )
        assert config.dgp.n_samples == 3000
        assert config.dgp.coupling_taps == tuple(design_delay_fir(10, 1))
        assert config.detectors[1] == DetectorSpec(DetectorName.TE, {"bins": 3})
        assert config.seeds == (100, 101, 102, 103)
        assert config.cell_count == 2 * 3 * 2 * 4
        assert config.anti_alias and config.workers == 3

    def test_independent_scenario(self):
        config = SweepConfig.from_dict(_document(scenario="independent"))
        assert config.dgp.coupling_taps == ()

    def test_round_trip(self, tmp_path):
        config = default_config(Scenario.COUPLED, seed=3, q_values=(1, 2), seeds=(0, 1, 2), workers=2)
        path = tmp_path / "config.json"
        config.dump(path)
        assert SweepConfig.load(path) == config

    @pytest.mark.parametrize(
        "document",
        [
            {"q_values": [5]},
            _document(version=2),
            _document(colour="red"),
            _document(dgp={"n_samples": 100, "delay": 3}),
            _document(scenario="chaotic"),
            _document(detectors=["granger"]),
            _document(detectors=[{"name": "gc_var", "params": {"alpha": 0.1}}]),
            _document(detectors=["gc_var", "gc_var"]),
            _document(q_values=[]),
            _document(q_values=[0, 5]),
            _document(k_values=[2, 2]),
            _document(k_values=[1.5]),
            _document(seeds={"base": 0, "count": 0}),
            _document(seeds=[True]),
            _document(workers="many"),
            _document(anti_alias="yes"),
            _document(scenario="independent", dgp={"coupling_delay": 10}),
            _document(dgp={"coupling_taps": [0.0, 1.0], "coupling_delay": 1}),
            _document(dgp={"snr_ratio": 2.0}),
            _document(dgp={"source_ar": [1.5]}),
            _document(dgp={"n_samples": 2000.5}),
            _document(dgp={"burn_in": "100"}),
            _document(dgp={"seed": True}),
            _document(dgp={"snr_ratio": "high"}),
            _document(dgp={"innovation_std": False}),
            _document(dgp={"coupling_delay": 50.5}),
            _document(dgp={"source_ar": ["x"]}),
            _document(version=True),
            _document(version=1.0),
            [1, 2],
        ],
    )
    def test_rejected(self, document):
        with pytest.raises(ConfigException):
            SweepConfig.from_dict(document)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigException):
            SweepConfig.load(path)

    def test_scenario_mismatch(self):
        config = default_config(Scenario.COUPLED)
        with pytest.raises(ConfigException):
            SweepConfig(dgp=config.dgp, scenario=Scenario.INDEPENDENT)


class TestOverrides:
    def test_seed_and_output(self, tmp_path):
        config = default_config(seed=1).with_overrides(seed=5, output_dir=tmp_path, timing=True)
        assert config.base_seed == 5
        assert config.output_dir == tmp_path
        assert config.timing

    def test_none_keeps_values(self):
        config = default_config(seed=1, workers=4)
        assert config.with_overrides() == config


class TestResolveWorkers:
    def test_default(self, monkeypatch):
        monkeypatch.delenv(ENV_WORKERS, raising=False)
        assert resolve_workers(None, default_config()) == 1

    def test_precedence(self, monkeypatch):
        config = default_config(workers=3)
        monkeypatch.delenv(ENV_WORKERS, raising=False)
        assert resolve_workers(None, config) == 3
        monkeypatch.setenv(ENV_WORKERS, "5")
        assert resolve_workers(None, config) == 5
        assert resolve_workers(2, config) == 2

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv(ENV_WORKERS, "lots")
        with pytest.raises(ConfigException):
            resolve_workers(None, default_config())

    def test_nonpositive(self, monkeypatch):
        monkeypatch.delenv(ENV_WORKERS, raising=False)
        with pytest.raises(ConfigException):
            resolve_workers(0, default_config())

    def test_config_file_value(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_WORKERS, raising=False)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(_document(workers=6)), encoding="utf-8")
        assert resolve_workers(None, SweepConfig.load(path)) == 6
