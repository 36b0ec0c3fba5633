"""Binned transfer entropy detector for ccdbench module."""
from __future__ import annotations

import logging
from typing import Any, Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .base_detector import BaseDetector, DetectorException, DetectorResult, check_pair
from .const import DEFAULT_TE_BINS, DEFAULT_TE_SURROGATES, DetectorName, DiagnosticKey
from .numerics import shannon_entropy
from .signals import SignalSet, make_rng

_LOGGER = logging.getLogger(__name__)


def quantile_bins(x: Sequence[float], bins: int) -> np.ndarray:
    """Equal-count symbols 0..bins-1 from the ranks of x"""
    values = np.asarray(x, dtype=float)
    if bins < 2:
        raise DetectorException(f"Need at least 2 bins, got {bins}")
    if values.size == 0 or np.ptp(values) == 0.0:
        raise DetectorException("Cannot bin a constant series")
    ranks = rankdata(values, method="ordinal").astype(np.int64) - 1
    return ranks * bins // values.size


def _entropy(codes: np.ndarray) -> float:
    return shannon_entropy(np.bincount(codes))


def _conditional_terms(x_symbols: np.ndarray, y_symbols: np.ndarray, q: int, bins: int) -> tuple[float, float]:
    """H(y_t | y_{t-1}) and H(y_t | y_{t-1}, x_{t-q})"""
    y_now = y_symbols[q:]
    y_past = y_symbols[q - 1:-1]
    x_past = x_symbols[:-q]
    h_y_past = _entropy(y_past)
    h_now_past = _entropy(y_now * bins + y_past)
    h_past_x = _entropy(y_past * bins + x_past)
    h_all = _entropy((y_now * bins + y_past) * bins + x_past)
    return h_now_past - h_y_past, h_all - h_past_x


def _te_from_symbols(x_symbols: np.ndarray, y_symbols: np.ndarray, q: int, bins: int) -> float:
    h_self, h_joint = _conditional_terms(x_symbols, y_symbols, q, bins)
    return max(0.0, h_self - h_joint)


def transfer_entropy(
    x: Sequence[float],
    y: Sequence[float],
    q: int,
    bins: int = DEFAULT_TE_BINS,
    n_surrogates: int = DEFAULT_TE_SURROGATES,
    seed: int = 0,
    source: int = 0,
    target: int = 1,
) -> DetectorResult:
    """TE from x to y conditioned on (y_{t-1}, x_{t-q}), tested against circular shifts of x"""
    x_values, y_values = check_pair(x, y)
    if q < 1:
        raise DetectorException(f"Window length must be at least 1, got {q}")
    if x_values.size <= q + 2:
        raise DetectorException(f"Series of length {x_values.size} too short for Q={q} (need T > Q+2)")
    if n_surrogates < 1:
        raise DetectorException(f"Need at least one surrogate, got {n_surrogates}")

    x_symbols = quantile_bins(x_values, bins)
    y_symbols = quantile_bins(y_values, bins)
    h_self, h_joint = _conditional_terms(x_symbols, y_symbols, q, bins)
    statistic = max(0.0, h_self - h_joint)

    n = x_symbols.size
    low = max(1, n // 10)
    high = n - low
    if high <= low:
        low, high = 1, n
    shifts = make_rng(seed).integers(low, high, n_surrogates)
    surrogates = np.array([_te_from_symbols(np.roll(x_symbols, shift), y_symbols, q, bins) for shift in shifts])

    diagnostics = {
        DiagnosticKey.H_CONDITIONAL: h_self,
        DiagnosticKey.SURROGATE_QUANTILE: float(surrogates.max()),
        DiagnosticKey.SURROGATE_MEAN: float(surrogates.mean()),
        DiagnosticKey.N_EFFECTIVE: float(n - q),
    }
    return DetectorResult.decide(source, target, statistic, float(surrogates.max()), diagnostics)


class TransferEntropyDetector(BaseDetector):
    """Binned transfer entropy with a circular-shift surrogate test"""

    @property
    def name(self) -> DetectorName:
        return DetectorName.TE

    @property
    def default_params(self) -> dict[str, Any]:
        return {"bins": DEFAULT_TE_BINS, "n_surrogates": DEFAULT_TE_SURROGATES}

    def infeasible_reason(self, t: int, d: int, q: int) -> Optional[str]:
        if t <= q + 2:
            return f"T={t} <= Q+2={q + 2}"
        return None

    def detect_pair(self, signals: SignalSet, source: int, target: int, q: int, seed: int) -> DetectorResult:
        return transfer_entropy(
            signals.series(source),
            signals.series(target),
            q,
            bins=self.params["bins"],
            n_surrogates=self.params["n_surrogates"],
            seed=seed,
            source=source,
            target=target,
        )
