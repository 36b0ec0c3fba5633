"""Lagged VAR window-graph tests"""
import math

import numpy as np
import pytest

from ccdbench.base_detector import DetectorException
from ccdbench.numerics import INTERCEPT_SERIES, ols_fit
from ccdbench.sampling import lag_embed
from ccdbench.signals import gen_var
from ccdbench.var_graph import VarGraphDetector, fit_var, var_window_graph

PLANTED = np.array([[[0.5, 0.0], [0.4, 0.5]]])
PLANTED_EDGES = [(0, 0, 1), (0, 1, 1), (1, 1, 1)]


class TestVarWindowGraph:
    def test_planted_var_recovered(self):
        signals, truth = gen_var(PLANTED, 50000, 0)
        window = var_window_graph(signals, 1, edge_threshold=0.1)
        assert window.lagged_edges() == PLANTED_EDGES == truth.window.lagged_edges()

    @pytest.mark.slow
    def test_planted_var_recovered_over_seeds(self):
        exact = sum(
            var_window_graph(gen_var(PLANTED, 50000, seed)[0], 1, edge_threshold=0.1).lagged_edges() == PLANTED_EDGES
            for seed in range(20)
        )
        assert exact >= 19

    def test_infinite_threshold_is_empty(self):
        signals, _ = gen_var(PLANTED, 2000, 1)
        assert var_window_graph(signals, 3, edge_threshold=math.inf).lagged_edges() == []

    def test_white_noise_is_empty(self, white_signals):
        assert var_window_graph(white_signals, 5, edge_threshold=0.1).lagged_edges() == []

    def test_unridged_fit_matches_ols(self):
        signals, _ = gen_var(PLANTED, 3000, 2)
        coefficients = fit_var(signals, 2, ridge=0.0)
        for target in range(2):
            embedding = lag_embed(signals, target, 2, [0, 1])
            fit = ols_fit(embedding.matrix, embedding.target)
            for label, value in zip(embedding.matrix.column_labels, fit.coefficients):
                if label.series != INTERCEPT_SERIES:
                    assert coefficients[label.series, target, label.lag - 1] == pytest.approx(value, abs=1e-9)

    def test_ridge_shrinks(self):
        signals, _ = gen_var(PLANTED, 3000, 3)
        plain = np.abs(fit_var(signals, 1, ridge=0.0)).sum()
        shrunk = np.abs(fit_var(signals, 1, ridge=1e4)).sum()
        assert shrunk < plain

    def test_invalid_arguments(self, white_signals):
        with pytest.raises(DetectorException):
            var_window_graph(white_signals, 2, edge_threshold=0.0)
        with pytest.raises(DetectorException):
            fit_var(white_signals, 2, ridge=-1.0)


class TestDetector:
    def test_summary_and_window(self):
        signals, truth = gen_var(PLANTED, 20000, 4)
        detector = VarGraphDetector()
        graph, results = detector.summary_graph(signals, 2, 0)
        assert graph == truth.summary
        forward = next(result for result in results if (result.source, result.target) == (0, 1))
        assert forward.decision
        assert forward.statistic == pytest.approx(0.4, abs=0.05)
        assert detector.window_graph(signals, 2, 0).lagged_edges() == PLANTED_EDGES

    def test_detect_pair_matches_summary(self):
        signals, _ = gen_var(PLANTED, 5000, 5)
        detector = VarGraphDetector(edge_threshold=0.2)
        _, results = detector.summary_graph(signals, 1, 0)
        assert detector.detect_pair(signals, 1, 0, 1, 0) == next(r for r in results if r.source == 1)

    def test_feasibility(self):
        assert VarGraphDetector().infeasible_reason(10, 2, 3) is not None
        assert VarGraphDetector().infeasible_reason(100, 2, 3) is None
