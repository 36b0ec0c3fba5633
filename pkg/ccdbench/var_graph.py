"""Lagged VAR window-graph learner for ccdbench module."""
from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np

from .base_detector import BaseDetector, DetectorException, DetectorResult
from .const import DEFAULT_EDGE_THRESHOLD, DEFAULT_RIDGE, DetectorName, DiagnosticKey
from .graphs import SummaryGraph, WindowGraph, summarize
from .numerics import DesignMatrix, INTERCEPT_SERIES, ols_fit
from .sampling import lag_embed
from .signals import SignalSet

_LOGGER = logging.getLogger(__name__)


def fit_var(signals: SignalSet, q: int, ridge: float = DEFAULT_RIDGE) -> np.ndarray:
    """Per-equation ridge least squares of every series on lags 1..q of all series.

    Returns coefficients[i, j, q - 1], the weight of x_{i,t-q} in the equation
    of x_{j,t}. The intercept is never penalized.
    """
    if ridge < 0:
        raise DetectorException(f"Ridge must be nonnegative, got {ridge}")
    if q < 1:
        raise DetectorException(f"Window length must be at least 1, got {q}")
    if signals.t <= (signals.d + 1) * q + 1:
        raise DetectorException(f"Series of length {signals.t} too short for D={signals.d}, Q={q}")

    d = signals.d
    coefficients = np.zeros((d, d, q))
    for target in range(d):
        embedding = lag_embed(signals, target, q, list(range(d)))
        design = embedding.matrix
        response = embedding.target
        if ridge > 0:
            penalized = [label.series != INTERCEPT_SERIES for label in design.column_labels]
            prior = np.diag(np.sqrt(ridge) * np.asarray(penalized, dtype=float))[np.asarray(penalized)]
            design = DesignMatrix(np.vstack([design.values, prior]), design.column_labels)
            response = np.concatenate([response, np.zeros(prior.shape[0])])
        fit = ols_fit(design, response)
        for label, value in zip(design.column_labels, fit.coefficients):
            if label.series != INTERCEPT_SERIES:
                coefficients[label.series, target, label.lag - 1] = value
    return coefficients


def var_window_graph(
    signals: SignalSet,
    q: int,
    ridge: float = DEFAULT_RIDGE,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> WindowGraph:
    """Window graph of the VAR coefficients above edge_threshold in magnitude"""
    if not edge_threshold > 0:
        raise DetectorException(f"Edge threshold must be positive, got {edge_threshold}")
    coefficients = fit_var(signals, q, ridge)
    return WindowGraph(signals.d, q, np.abs(coefficients) > edge_threshold)


class VarGraphDetector(BaseDetector):
    """Lagged VAR learner scored through its summary graph"""

    @property
    def name(self) -> DetectorName:
        return DetectorName.VAR_GRAPH

    @property
    def default_params(self) -> dict[str, Any]:
        return {"ridge": DEFAULT_RIDGE, "edge_threshold": DEFAULT_EDGE_THRESHOLD}

    def infeasible_reason(self, t: int, d: int, q: int) -> Optional[str]:
        if t <= (d + 1) * q + 1:
            return f"T={t} <= (D+1)Q+1={(d + 1) * q + 1}"
        return None

    def _results(self, signals: SignalSet, coefficients: np.ndarray) -> list[DetectorResult]:
        threshold = self.params["edge_threshold"]
        results = []
        for source in range(signals.d):
            for target in range(signals.d):
                if source == target:
                    continue
                weights = np.abs(coefficients[source, target])
                results.append(
                    DetectorResult.decide(
                        source,
                        target,
                        float(weights.max()),
                        threshold,
                        {DiagnosticKey.EDGE_COUNT: float(np.count_nonzero(weights > threshold))},
                    )
                )
        return results

    def detect_pair(self, signals: SignalSet, source: int, target: int, q: int, seed: int) -> DetectorResult:
        coefficients = fit_var(signals, q, self.params["ridge"])
        return next(
            result
            for result in self._results(signals, coefficients)
            if result.source == source and result.target == target
        )

    def summary_graph(self, signals: SignalSet, q: int, seed: int) -> tuple[SummaryGraph, list[DetectorResult]]:
        coefficients = fit_var(signals, q, self.params["ridge"])
        window = WindowGraph(signals.d, q, np.abs(coefficients) > self.params["edge_threshold"])
        return summarize(window), self._results(signals, coefficients)

    def window_graph(self, signals: SignalSet, q: int, seed: int) -> Optional[WindowGraph]:
        return var_window_graph(signals, q, self.params["ridge"], self.params["edge_threshold"])
