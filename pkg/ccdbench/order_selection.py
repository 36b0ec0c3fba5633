"""Window length and embedding dimension selection for ccdbench module."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .base_detector import DetectorException
from .const import DEFAULT_FNN_ATOL, DEFAULT_FNN_RTOL, FNN_SELECT_FRACTION, Criterion
from .numerics import INTERCEPT_SERIES, ols_fit
from .sampling import delay_embed, lag_embed
from .signals import SignalSet

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class FnnResult:
    """False-nearest-neighbour fraction per embedding dimension"""

    dimension: int
    fractions: np.ndarray
    selected: bool


def _penalty(criterion: Criterion, n: int) -> float:
    match Criterion(criterion):
        case Criterion.AIC:
            return 2.0
        case Criterion.BIC:
            return math.log(n)
        case Criterion.HQC:
            return 2.0 * math.log(math.log(n))
    raise DetectorException(f"Unknown criterion {criterion}")


def information_criteria(signals: SignalSet, target: int, q_max: int) -> dict[Criterion, np.ndarray]:
    """AIC, BIC and HQC of the self-plus-cross lag model for Q = 1..q_max.

    All fits share the rows available at q_max, so the criteria compare
    like with like.
    """
    if q_max < 1:
        raise DetectorException(f"Q_max must be at least 1, got {q_max}")
    if not q_max < signals.t / 4:
        raise DetectorException(f"Q_max={q_max} must be below T/4={signals.t / 4}")

    embedding = lag_embed(signals, target, q_max, list(range(signals.d)))
    n = embedding.matrix.n
    log_fits = np.empty(q_max)
    params = np.empty(q_max)
    for q in range(1, q_max + 1):
        design = embedding.matrix.select(
            [label.series == INTERCEPT_SERIES or label.lag <= q for label in embedding.matrix.column_labels]
        )
        fit = ols_fit(design, embedding.target)
        if fit.rss == 0.0:
            _LOGGER.warning("Zero residuals at Q=%s; criterion is unbounded below", q)
            log_fits[q - 1] = -math.inf
        else:
            log_fits[q - 1] = n * math.log(fit.rss / n)
        params[q - 1] = design.p
    return {criterion: log_fits + _penalty(criterion, n) * params for criterion in Criterion}


def select_order_ic(
    signals: SignalSet,
    target: int,
    q_max: int,
    criterion: Criterion = Criterion.BIC,
) -> int:
    """Window length minimizing the information criterion"""
    curve = information_criteria(signals, target, q_max)[Criterion(criterion)]
    selected = int(np.argmin(curve)) + 1
    _LOGGER.debug("%s selects Q=%s of %s", Criterion(criterion).value, selected, q_max)
    return selected


def _first_other_neighbor(distances: np.ndarray, positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest neighbour of every point other than the point itself"""
    own = np.arange(positions.shape[0])[:, np.newaxis]
    usable = positions != own
    column = np.argmax(usable, axis=1)
    rows = np.arange(positions.shape[0])
    return distances[rows, column], positions[rows, column]


def false_nearest_neighbors(
    x: Sequence[float],
    e_max: int,
    rtol: float = DEFAULT_FNN_RTOL,
    atol: float = DEFAULT_FNN_ATOL,
) -> FnnResult:
    """Smallest delay-1 embedding dimension whose neighbours stay close one dimension up.

    A neighbour is false when the added coordinate separates it by more than
    rtol times the current distance, or when the new distance exceeds atol
    times the standard deviation of x.
    """
    values = np.asarray(x, dtype=float)
    if e_max < 1:
        raise DetectorException(f"E_max must be at least 1, got {e_max}")
    if values.size <= e_max + 2:
        raise DetectorException(f"Series of length {values.size} too short for E_max={e_max}")
    sigma = float(np.std(values))
    if sigma == 0.0:
        raise DetectorException("Constant series has degenerate neighbours")

    fractions = np.empty(e_max)
    for e in range(1, e_max + 1):
        extended = delay_embed(values, e + 1)
        points = extended[:, :e]
        distances, positions = cKDTree(points).query(points, k=3)
        nearest, neighbors = _first_other_neighbor(distances, positions)
        extra = np.abs(extended[:, e] - extended[neighbors, e])
        with np.errstate(divide="ignore", invalid="ignore"):
            relative = np.where(nearest > 0.0, extra / nearest > rtol, extra > 0.0)
        absolute = np.sqrt(nearest**2 + extra**2) / sigma > atol
        fractions[e - 1] = float(np.mean(relative | absolute))

    below = np.flatnonzero(fractions < FNN_SELECT_FRACTION)
    if below.size == 0:
        _LOGGER.warning("No dimension up to %s brings false neighbours below %s", e_max, FNN_SELECT_FRACTION)
        return FnnResult(e_max, fractions, False)
    return FnnResult(int(below[0]) + 1, fractions, True)
