"""Numerical kernels for ccdbench module."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import linalg
from scipy.special import betaln

from .const import (
    CF_EPSILON,
    CF_MAX_ITERATIONS,
    QUANTILE_MAX_ITERATIONS,
    QUANTILE_RESIDUAL_TOLERANCE,
    QUANTILE_TOLERANCE,
    RANK_TOLERANCE,
)

_LOGGER = logging.getLogger(__name__)

INTERCEPT_SERIES = -1
_FPMIN = 1e-300


class NumericsException(ValueError):
    """When a numerical kernel gets input outside its domain"""


class ConvergenceException(NumericsException):
    """When an iterative routine does not converge"""


class ColumnLabel(NamedTuple):
    """Regressor tag: series index and lag (series -1 is the intercept)"""

    series: int
    lag: int


@dataclass(frozen=True)
class DesignMatrix:
    """Regressor matrix with one (series, lag) tag per column."""

    values: np.ndarray
    column_labels: tuple[ColumnLabel, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise NumericsException(f"Design matrix must be 2-D, got shape {values.shape}")
        n, p = values.shape
        if n <= p:
            raise NumericsException(f"Design matrix needs more rows than columns ({n} <= {p})")
        if not np.all(np.isfinite(values)):
            raise NumericsException("Design matrix has non-finite entries")
        labels = tuple(ColumnLabel(*label) for label in self.column_labels)
        if len(labels) != p:
            raise NumericsException(f"{len(labels)} column labels for {p} columns")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_labels", labels)

    @property
    def n(self) -> int:
        """Number of usable rows"""
        return self.values.shape[0]

    @property
    def p(self) -> int:
        """Number of regressors"""
        return self.values.shape[1]

    def select(self, keep: Sequence[bool]) -> DesignMatrix:
        """Sub-design with the flagged columns"""
        mask = np.asarray(keep, dtype=bool)
        labels = tuple(label for label, flag in zip(self.column_labels, mask) if flag)
        return DesignMatrix(self.values[:, mask], labels)


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit outcome"""

    coefficients: np.ndarray
    rss: float
    n: int
    p: int
    rank: int


def ols_fit(design: DesignMatrix, y: Sequence[float]) -> FitResult:
    """Least squares by column-pivoted QR.

    Columns whose pivot falls below RANK_TOLERANCE of the leading pivot are
    treated as redundant and get a zero coefficient.
    """
    target = np.asarray(y, dtype=float)
    if target.ndim != 1 or target.shape[0] != design.n:
        raise NumericsException(
            f"Target of shape {target.shape} does not match {design.n} design rows"
        )
    if not np.all(np.isfinite(target)):
        raise NumericsException("Target has non-finite entries")

    q, r, pivots = linalg.qr(design.values, mode="economic", pivoting=True)
    pivot_sizes = np.abs(np.diag(r))
    rank = 0
    if pivot_sizes.size and pivot_sizes[0] > 0.0:
        rank = int(np.count_nonzero(pivot_sizes > RANK_TOLERANCE * pivot_sizes[0]))

    coefficients = np.zeros(design.p)
    if rank:
        projected = q[:, :rank].T @ target
        coefficients[pivots[:rank]] = linalg.solve_triangular(r[:rank, :rank], projected)
    if rank < design.p:
        _LOGGER.debug("Rank deficient design: rank %s of %s columns", rank, design.p)

    residual = target - design.values @ coefficients
    return FitResult(
        coefficients=coefficients,
        rss=float(residual @ residual),
        n=design.n,
        p=design.p,
        rank=rank,
    )


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """Modified Lentz evaluation of the incomplete beta continued fraction"""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPSILON:
            return h
    raise ConvergenceException(
        f"Incomplete beta continued fraction did not converge for x={x}, a={a}, b={b}"
    )


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """Get I_x(a, b)"""
    if not 0.0 <= x <= 1.0:
        raise NumericsException(f"x must lie in [0, 1], got {x}")
    if a <= 0.0 or b <= 0.0:
        raise NumericsException(f"a and b must be positive, got a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if a == b and x == 0.5:
        return 0.5

    log_front = a * math.log(x) + b * math.log1p(-x) - betaln(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        value = math.exp(log_front) * _beta_continued_fraction(x, a, b) / a
    else:
        value = 1.0 - math.exp(log_front) * _beta_continued_fraction(1.0 - x, b, a) / b
    return min(1.0, max(0.0, value))


def f_cdf(q: float, d1: float, d2: float) -> float:
    """Get the F distribution CDF through the incomplete beta function"""
    if d1 <= 0 or d2 <= 0:
        raise NumericsException(f"Degrees of freedom must be positive, got {d1}, {d2}")
    if q <= 0.0:
        return 0.0
    if math.isinf(q):
        return 1.0
    return regularized_incomplete_beta(d1 * q / (d1 * q + d2), d1 / 2.0, d2 / 2.0)


def f_quantile(p: float, d1: float, d2: float) -> float:
    """Invert the F distribution CDF.

    The root is found in the beta domain with Newton steps that fall back to
    bisection whenever they leave the current bracket. Upper-tail levels are
    solved through I_y(b, a) = 1 - p with y = 1 - x, so y stays representable
    when x rounds to 1.
    """
    if not 0.0 < p < 1.0:
        raise NumericsException(f"p must lie in (0, 1), got {p}")
    if d1 <= 0 or d2 <= 0:
        raise NumericsException(f"Degrees of freedom must be positive, got {d1}, {d2}")

    upper = p > 0.5
    a, b = d1 / 2.0, d2 / 2.0
    if upper:
        a, b = b, a
    target = 1.0 - p if upper else p
    root = _beta_root(target, a, b)
    if (upper and root <= 0.0) or (not upper and root >= 1.0):
        raise ConvergenceException(f"F quantile overflowed for p={p}, d1={d1}, d2={d2}")
    if upper:
        return d2 * (1.0 - root) / (d1 * root)
    return d2 * root / (d1 * (1.0 - root))


def _beta_root(target: float, a: float, b: float) -> float:
    log_norm = betaln(a, b)
    low, high = 0.0, 1.0
    x = 0.5
    residual = math.inf
    for iteration in range(QUANTILE_MAX_ITERATIONS):
        residual = regularized_incomplete_beta(x, a, b) - target
        if abs(residual) <= QUANTILE_TOLERANCE * target or high - low <= QUANTILE_TOLERANCE * x:
            _LOGGER.debug("Beta root converged after %s iterations", iteration)
            break
        if residual < 0.0:
            low = x
        else:
            high = x
        density = math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - log_norm)
        candidate = x - residual / density if density > 0.0 and math.isfinite(density) else -1.0
        step = candidate - x if low < candidate < high else 0.5 * (low + high) - x
        x += step
        if abs(step) <= QUANTILE_TOLERANCE * x:
            residual = regularized_incomplete_beta(x, a, b) - target
            _LOGGER.debug("Beta root step vanished after %s iterations", iteration)
            break
    else:
        raise ConvergenceException(f"Beta root did not converge for level {target}, a={a}, b={b}")

    # a collapsed bracket or a stalled step must still land on the level
    if abs(residual) > QUANTILE_RESIDUAL_TOLERANCE * target:
        raise ConvergenceException(f"Beta root residual {residual:.3g} too large for level {target}, a={a}, b={b}")
    return x


def shannon_entropy(counts: Sequence[int]) -> float:
    """Plug-in Shannon entropy in bits of a histogram"""
    histogram = np.asarray(counts)
    if histogram.ndim != 1 or histogram.size == 0:
        raise NumericsException("Histogram must be a non-empty 1-D array")
    if np.any(histogram < 0):
        raise NumericsException("Histogram counts must be nonnegative")
    total = histogram.sum()
    if total <= 0:
        raise NumericsException("Histogram has no positive count")
    probabilities = histogram[histogram > 0] / total
    return max(0.0, float(-np.sum(probabilities * np.log2(probabilities))))
