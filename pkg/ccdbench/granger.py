"""Granger causality detectors for ccdbench module."""
from __future__ import annotations

import logging
import math
from typing import Any, Optional, Sequence

import numpy as np

from .base_detector import BaseDetector, DetectorException, DetectorResult, check_pair
from .const import DEFAULT_ALPHA, DEFAULT_THETA, DetectorName, DiagnosticKey
from .numerics import FitResult, f_cdf, f_quantile, ols_fit
from .sampling import lag_embed
from .signals import SignalSet

_LOGGER = logging.getLogger(__name__)

_SOURCE = 0
_TARGET = 1


def _nested_fits(x: Sequence[float], y: Sequence[float], q: int) -> tuple[FitResult, FitResult]:
    """Fit y on (its own lags, x lags, 1) and on (its own lags, 1)"""
    x_values, y_values = check_pair(x, y)
    if q < 1:
        raise DetectorException(f"Window length must be at least 1, got {q}")
    if x_values.size <= 3 * q + 1:
        raise DetectorException(f"Series of length {x_values.size} too short for Q={q} (need T > 3Q+1)")

    embedding = lag_embed(SignalSet(np.vstack([x_values, y_values])), _TARGET, q, [_TARGET, _SOURCE])
    restricted = embedding.matrix.select([label.series != _SOURCE for label in embedding.matrix.column_labels])
    full_fit = ols_fit(embedding.matrix, embedding.target)
    restricted_fit = ols_fit(restricted, embedding.target)
    return full_fit, restricted_fit


def gc_variance_reduction(
    x: Sequence[float],
    y: Sequence[float],
    q: int,
    theta: float = DEFAULT_THETA,
    source: int = _SOURCE,
    target: int = _TARGET,
) -> DetectorResult:
    """Variance-reduction Granger test: 1 - RSS_full / RSS_restricted > theta"""
    full_fit, restricted_fit = _nested_fits(x, y, q)
    diagnostics = {
        DiagnosticKey.RSS_FULL: full_fit.rss,
        DiagnosticKey.RSS_RESTRICTED: restricted_fit.rss,
        DiagnosticKey.N_EFFECTIVE: float(full_fit.n),
        DiagnosticKey.DEGENERATE: 0.0,
    }
    if restricted_fit.rss == 0.0:
        _LOGGER.warning("Target is perfectly self-predictable at Q=%s; reporting statistic 0", q)
        diagnostics[DiagnosticKey.DEGENERATE] = 1.0
        return DetectorResult.decide(source, target, 0.0, theta, diagnostics)

    statistic = min(1.0, max(0.0, 1.0 - full_fit.rss / restricted_fit.rss))
    return DetectorResult.decide(source, target, statistic, theta, diagnostics)


def gc_f_test(
    x: Sequence[float],
    y: Sequence[float],
    q: int,
    alpha: float = DEFAULT_ALPHA,
    source: int = _SOURCE,
    target: int = _TARGET,
) -> DetectorResult:
    """F-statistic Granger test at level alpha"""
    if not 0.0 < alpha < 1.0:
        raise DetectorException(f"alpha must lie in (0, 1), got {alpha}")
    full_fit, restricted_fit = _nested_fits(x, y, q)
    dof2 = full_fit.n - 2 * q - 1
    if dof2 <= 0:
        raise DetectorException(f"Nonpositive residual degrees of freedom ({dof2})")

    threshold = f_quantile(1.0 - alpha, q, dof2)
    diagnostics = {
        DiagnosticKey.RSS_FULL: full_fit.rss,
        DiagnosticKey.RSS_RESTRICTED: restricted_fit.rss,
        DiagnosticKey.N_EFFECTIVE: float(full_fit.n),
        DiagnosticKey.DOF1: float(q),
        DiagnosticKey.DOF2: float(dof2),
        DiagnosticKey.DEGENERATE: 0.0,
    }
    if restricted_fit.rss == 0.0:
        _LOGGER.warning("Target is perfectly self-predictable at Q=%s; reporting statistic 0", q)
        diagnostics[DiagnosticKey.DEGENERATE] = 1.0
        diagnostics[DiagnosticKey.P_VALUE] = 1.0
        return DetectorResult.decide(source, target, 0.0, threshold, diagnostics)

    reduction = max(0.0, restricted_fit.rss - full_fit.rss)
    if full_fit.rss == 0.0:
        statistic = math.inf if reduction > 0.0 else 0.0
    else:
        statistic = (reduction / q) / (full_fit.rss / dof2)
    diagnostics[DiagnosticKey.P_VALUE] = 1.0 - f_cdf(statistic, q, dof2)
    return DetectorResult.decide(source, target, statistic, threshold, diagnostics)


class GcVarianceReductionDetector(BaseDetector):
    """Variance-reduction Granger causality"""

    @property
    def name(self) -> DetectorName:
        return DetectorName.GC_VAR

    @property
    def default_params(self) -> dict[str, Any]:
        return {"theta": DEFAULT_THETA}

    def infeasible_reason(self, t: int, d: int, q: int) -> Optional[str]:
        if t <= 3 * q + 1:
            return f"T={t} <= 3Q+1={3 * q + 1}"
        return None

    def detect_pair(self, signals: SignalSet, source: int, target: int, q: int, seed: int) -> DetectorResult:
        return gc_variance_reduction(
            signals.series(source),
            signals.series(target),
            q,
            self.params["theta"],
            source=source,
            target=target,
        )


class GcFTestDetector(GcVarianceReductionDetector):
    """F-test Granger causality"""

    @property
    def name(self) -> DetectorName:
        return DetectorName.GC_F

    @property
    def default_params(self) -> dict[str, Any]:
        return {"alpha": DEFAULT_ALPHA}

    def detect_pair(self, signals: SignalSet, source: int, target: int, q: int, seed: int) -> DetectorResult:
        return gc_f_test(
            signals.series(source),
            signals.series(target),
            q,
            self.params["alpha"],
            source=source,
            target=target,
        )
