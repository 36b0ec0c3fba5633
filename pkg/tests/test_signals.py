"""Simulation and ground truth tests"""
import numpy as np
import pytest

from ccdbench.const import Scenario
from ccdbench.graphs import summarize
from ccdbench.signals import (
    TAU_PREFIX,
    DgpSpec,
    SignalException,
    SignalSet,
    ar_is_stable,
    design_delay_fir,
    fir_filter,
    gen_ar,
    gen_coupled_logistic,
    gen_var,
    generate_pair,
    group_delay,
    make_rng,
    mix_snr,
    snr_scales,
)


def _peak_lag(x, y, max_lag):
    """Lag at which y best correlates with the past of x"""
    scores = [np.corrcoef(x[: x.size - lag], y[lag:])[0, 1] for lag in range(1, max_lag + 1)]
    return int(np.argmax(scores)) + 1


class TestArProcess:
    def test_stability(self):
        assert ar_is_stable((1.6, -0.64))
        assert ar_is_stable(())
        assert not ar_is_stable((1.1,))
        assert not ar_is_stable((1.0, 0.5))

    def test_unstable_process_is_rejected(self):
        with pytest.raises(SignalException):
            gen_ar((1.2,), 1.0, 100, 10, 0)

    def test_same_seed_same_series(self):
        np.testing.assert_array_equal(gen_ar((0.5,), 1.0, 500, 100, 3), gen_ar((0.5,), 1.0, 500, 100, 3))

    def test_white_noise_variance(self):
        x = gen_ar((), 2.0, 50000, 0, 5)
        assert np.var(x) == pytest.approx(4.0, rel=0.05)

    def test_stationary_variance(self):
        x = gen_ar((0.9,), 1.0, 100000, 1000, 6)
        assert np.var(x) == pytest.approx(1.0 / (1.0 - 0.81), rel=0.1)

    def test_lag_one_autocorrelation(self):
        x = gen_ar((0.9,), 1.0, 50000, 1000, 11)
        assert np.corrcoef(x[1:], x[:-1])[0, 1] == pytest.approx(0.9, abs=0.01)


class TestDelayFilter:
    def test_taps(self):
        taps = design_delay_fir(50, 2)
        assert taps.size == 53
        assert taps.sum() == pytest.approx(1.0)
        assert list(np.flatnonzero(taps)) == [48, 49, 50, 51, 52]
        assert group_delay(taps) == pytest.approx(50.0)

    def test_delta_response(self):
        np.testing.assert_array_equal(fir_filter([0.0, 0.0, 0.0, 1.0], [1.0, 2.0, 0.0, 0.0, 0.0]), [0, 0, 0, 1, 2])

    def test_filtered_noise_peaks_at_delay(self):
        x = make_rng(8).normal(size=20000)
        assert _peak_lag(x, fir_filter(design_delay_fir(50, 2), x), 80) == 50

    def test_fractional_delay(self):
        with pytest.raises(SignalException):
            design_delay_fir(50.5, 2)

    def test_invalid_widths(self):
        with pytest.raises(SignalException):
            design_delay_fir(2, 2)


class TestSnrMix:
    def test_variance_fractions(self):
        rng = make_rng(4)
        signal_part = 3.0 * rng.normal(size=10000)
        noise_part = 0.2 * rng.normal(size=10000)
        signal_scale, noise_scale = snr_scales(signal_part, noise_part, 0.8)
        assert np.var(signal_scale * signal_part) == pytest.approx(0.8 * np.var(signal_part))
        assert np.var(noise_scale * noise_part) == pytest.approx(0.2 * np.var(signal_part))

    def test_half_ratio_balances_parts(self):
        rng = make_rng(9)
        signal_part = 2.0 * rng.normal(size=5000)
        noise_part = rng.normal(size=5000)
        signal_scale, noise_scale = snr_scales(signal_part, noise_part, 0.5)
        assert np.var(signal_scale * signal_part) == pytest.approx(np.var(noise_scale * noise_part))

    def test_ratio_one_is_pure_signal(self):
        rng = make_rng(5)
        signal_part = rng.normal(size=100)
        np.testing.assert_array_equal(mix_snr(signal_part, rng.normal(size=100), 1.0), signal_part)

    @pytest.mark.parametrize("ratio", [0.0, 1.5])
    def test_ratio_range(self, ratio):
        with pytest.raises(SignalException):
            snr_scales(np.ones(3), np.arange(3.0), ratio)


class TestGeneratePair:
    def test_coupled_truth(self):
        signals, truth = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=1, n_samples=3000))
        assert signals.data.shape == (2, 3000)
        assert signals.labels == ("x", "y")
        assert truth.summary.edges() == [(0, 1)]
        assert [lag for _, _, lag in truth.window.lagged_edges()] == [48, 49, 50, 51, 52]
        assert truth.effective_delay == pytest.approx(50.0)

    def test_independent_truth_is_empty(self):
        signals, truth = generate_pair(DgpSpec.for_scenario(Scenario.INDEPENDENT, seed=1, n_samples=3000))
        assert signals.t == 3000
        assert truth.summary.edges() == []
        assert truth.window.lagged_edges() == []

    def test_reproducible(self):
        spec = DgpSpec.for_scenario(Scenario.COUPLED, seed=99, n_samples=1000)
        np.testing.assert_array_equal(generate_pair(spec)[0].data, generate_pair(spec)[0].data)
        assert not np.array_equal(generate_pair(spec)[0].data, generate_pair(spec.with_seed(100))[0].data)

    def test_target_follows_delayed_source(self):
        signals, _ = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=2, n_samples=20000))
        x, y = signals.data
        assert np.corrcoef(x[:-50], y[50:])[0, 1] > 0.8
        assert abs(np.corrcoef(x[50:], y[:-50])[0, 1]) < 0.2

    def test_truth_summary_matches_window(self):
        _, truth = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=4, n_samples=500))
        assert summarize(truth.window) == truth.summary

    def test_correlation_peak_near_effective_delay(self):
        signals, truth = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=5, n_samples=20000))
        assert abs(_peak_lag(signals.series(0), signals.series(1), 80) - truth.effective_delay) <= 2

    @pytest.mark.parametrize(
        "field, value",
        [("n_samples", 2000.5), ("burn_in", "10"), ("seed", True), ("snr_ratio", "high"), ("innovation_std", None)],
    )
    def test_mistyped_recipe(self, field, value):
        with pytest.raises(SignalException):
            DgpSpec(**{field: value})

    def test_invalid_recipe(self):
        with pytest.raises(SignalException):
            DgpSpec(snr_ratio=0.0)
        with pytest.raises(SignalException):
            DgpSpec(source_ar=(1.5,))


class TestGroundTruthDecimation:
    def test_lags_rescale(self):
        _, truth = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=1, n_samples=500))
        decimated = truth.decimated(20)
        assert decimated.window.lagged_edges() == [(0, 1, 2), (0, 1, 3)]
        assert decimated.effective_delay == pytest.approx(2.5)
        assert decimated.summary == truth.summary

    def test_zero_lag_becomes_instantaneous(self):
        _, truth = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=1, n_samples=500))
        decimated = truth.decimated(60)
        assert decimated.window.instantaneous_edges() == [(0, 1)]
        assert decimated.window.lagged_edges() == [(0, 1, 1)]

    def test_identity(self):
        _, truth = generate_pair(DgpSpec.for_scenario(Scenario.COUPLED, seed=1, n_samples=500))
        assert truth.decimated(1) is truth


class TestSignalSetCsv:
    def test_round_trip(self, tmp_path, rng):
        signals = SignalSet(rng.normal(size=(3, 50)), 0.25, ("a", "b", "c"))
        path = tmp_path / "signals.csv"
        signals.to_csv(path)
        assert path.read_text().startswith(f"{TAU_PREFIX}0.25\n")
        loaded = SignalSet.from_csv(path)
        np.testing.assert_array_equal(loaded.data, signals.data)
        assert loaded.sampling_period == 0.25
        assert loaded.labels == ("a", "b", "c")

    def test_rejects_non_finite(self):
        with pytest.raises(SignalException):
            SignalSet(np.array([[1.0, np.inf]]))


class TestOtherGenerators:
    def test_var_truth_and_stability(self):
        signals, truth = gen_var(np.array([[[0.5, 0.0], [0.4, 0.5]]]), 1000, 0)
        assert signals.data.shape == (2, 1000)
        assert truth.window.lagged_edges() == [(0, 0, 1), (0, 1, 1), (1, 1, 1)]
        assert truth.summary.edges() == [(0, 1)]
        with pytest.raises(SignalException):
            gen_var(np.array([[[1.1, 0.0], [0.0, 0.2]]]), 100, 0)

    def test_logistic_maps_stay_bounded(self):
        signals, truth = gen_coupled_logistic(2000, 0.4, 3)
        assert np.all((signals.data > 0.0) & (signals.data < 1.0))
        assert truth.summary.edges() == [(0, 1)]
