"""Decimation and lag embedding for ccdbench module."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal as sps

from .numerics import INTERCEPT_SERIES, ColumnLabel, DesignMatrix
from .signals import SignalSet

_LOGGER = logging.getLogger(__name__)


class SamplingException(ValueError):
    """When a decimation or an embedding request does not fit the signal"""


@dataclass(frozen=True)
class DecimationConfig:
    """Downsampling factor k, anti-alias toggle and phase offset"""

    k: int = 1
    anti_alias: bool = False
    phase: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise SamplingException(f"Downsampling factor must be at least 1, got {self.k}")
        if not 0 <= self.phase < self.k:
            raise SamplingException(f"Phase must lie in [0, {self.k}), got {self.phase}")


@dataclass(frozen=True)
class Embedding:
    """Lagged regressors and the contemporaneous target"""

    matrix: DesignMatrix
    target: np.ndarray
    q: int


def anti_alias_taps(k: int) -> np.ndarray:
    """Hamming windowed-sinc low-pass of length 8k+1 with cutoff pi/k"""
    return sps.firwin(8 * k + 1, 1.0 / k, window="hamming")


def downsample(signals: SignalSet, config: DecimationConfig) -> SignalSet:
    """Keep samples phase, phase+k, phase+2k, ... of every series"""
    k = config.k
    if k > signals.t:
        raise SamplingException(f"Downsampling factor {k} exceeds series length {signals.t}")
    if k == 1:
        return signals

    data = signals.data
    if config.anti_alias:
        taps = anti_alias_taps(k)
        padlen = min((taps.size - 1) // 2, signals.t - 1)
        data = sps.filtfilt(taps, [1.0], data, axis=1, padtype="even", padlen=padlen)
        _LOGGER.debug("Anti-alias low-pass with %s taps before %s-fold decimation", taps.size, k)

    return SignalSet(
        data[:, config.phase::k],
        signals.sampling_period * k,
        signals.labels,
    )


def lag_embed(
    signals: SignalSet,
    target_series: int,
    q: int,
    regressor_series: Sequence[int],
    include_contemporaneous: bool = False,
) -> Embedding:
    """Regress x_{target,t} on lags 1..q of the regressor series.

    Row t holds the target at absolute time t + q and, for each regressor
    series i, the values x_{i,t+q-l}. An intercept column comes first. With
    include_contemporaneous, lag 0 of every regressor other than the target
    itself is added.
    """
    t = signals.t
    if q < 1:
        raise SamplingException(f"Window length must be at least 1, got {q}")
    if q >= t:
        raise SamplingException(f"Window length {q} must be shorter than the series ({t})")
    indices = [target_series, *regressor_series]
    if any(not 0 <= index < signals.d for index in indices):
        raise SamplingException(f"Series indices {indices} out of range for {signals.d} series")

    columns = [np.ones(t - q)]
    labels = [ColumnLabel(INTERCEPT_SERIES, 0)]
    for index in regressor_series:
        windows = sliding_window_view(signals.series(index), q + 1)
        first_lag = 0 if include_contemporaneous and index != target_series else 1
        for lag in range(first_lag, q + 1):
            columns.append(windows[:, q - lag])
            labels.append(ColumnLabel(index, lag))

    if t - q <= len(columns):
        raise SamplingException(f"{t - q} rows cannot support {len(columns)} regressors")
    return Embedding(
        matrix=DesignMatrix(np.column_stack(columns), tuple(labels)),
        target=signals.series(target_series)[q:].copy(),
        q=q,
    )


def delay_embed(x: Sequence[float], dimension: int, tau: int = 1) -> np.ndarray:
    """Shadow manifold with coordinates at lags 0, tau, ..., (dimension-1)*tau.

    Point p sits at time p + (dimension - 1) * tau.
    """
    values = np.asarray(x, dtype=float)
    if dimension < 1 or tau < 1:
        raise SamplingException(f"Invalid embedding dimension={dimension}, tau={tau}")
    span = (dimension - 1) * tau
    if span >= values.size:
        raise SamplingException(f"Series of length {values.size} too short for span {span}")
    return sliding_window_view(values, span + 1)[:, ::-1][:, ::tau].copy()
