"""Detector base class for ccdbench module."""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .const import DetectorName
from .graphs import SummaryGraph, WindowGraph
from .signals import SignalSet

_LOGGER = logging.getLogger(__name__)


class DetectorException(ValueError):
    """When a detector cannot run on the given input"""


@dataclass(frozen=True)
class DetectorResult:
    """Statistic, threshold and decision for one ordered pair"""

    source: int
    target: int
    statistic: float
    threshold: float
    decision: bool
    diagnostics: dict[str, float] = field(default_factory=dict)

    @classmethod
    def decide(
        cls,
        source: int,
        target: int,
        statistic: float,
        threshold: float,
        diagnostics: Optional[dict[str, float]] = None,
    ) -> DetectorResult:
        """Build a result whose decision is statistic > threshold"""
        return cls(
            source,
            target,
            float(statistic),
            float(threshold),
            bool(statistic > threshold),
            dict(diagnostics or {}),
        )

    def to_dict(self) -> dict[str, Any]:
        """JSON form; non-finite numbers become strings"""
        return {
            "source": self.source,
            "target": self.target,
            "statistic": json_number(self.statistic),
            "threshold": json_number(self.threshold),
            "decision": self.decision,
            "diagnostics": {key: json_number(value) for key, value in self.diagnostics.items()},
        }


def json_number(value: float) -> Any:
    """Finite floats pass, others become 'inf', '-inf' or 'nan'"""
    return value if math.isfinite(value) else str(value)


def pair_seed(seed: int, source: int, target: int) -> int:
    """Seed of one ordered pair, derived from the cell seed"""
    return int(np.random.SeedSequence([int(seed) % 2**64, source, target]).generate_state(1, np.uint64)[0])


def check_pair(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Validate two equally long finite series"""
    x_values = np.asarray(x, dtype=float)
    y_values = np.asarray(y, dtype=float)
    if x_values.ndim != 1 or y_values.ndim != 1 or x_values.size != y_values.size:
        raise DetectorException(f"Series must be 1-D and equally long, got {x_values.shape} and {y_values.shape}")
    if not (np.all(np.isfinite(x_values)) and np.all(np.isfinite(y_values))):
        raise DetectorException("Series have non-finite entries")
    return x_values, y_values


class BaseDetector(ABC):
    """Class representing a causal detector, its hyperparameters and feasibility."""

    def __init__(self, **params: Any) -> None:
        unknown = set(params) - set(self.default_params)
        if unknown:
            raise DetectorException(f"Unknown {self.name.value} parameters: {sorted(unknown)}")
        self.params: dict[str, Any] = {**self.default_params, **params}

    @property
    @abstractmethod
    def name(self) -> DetectorName:
        """Registered detector name"""

    @property
    @abstractmethod
    def default_params(self) -> dict[str, Any]:
        """Hyperparameters and their defaults"""

    @abstractmethod
    def infeasible_reason(self, t: int, d: int, q: int) -> Optional[str]:
        """Why a (T, D, Q) cell cannot run, or None"""
        raise NotImplementedError

    @abstractmethod
    def detect_pair(self, signals: SignalSet, source: int, target: int, q: int, seed: int) -> DetectorResult:
        """Test source -> target with window length q"""
        raise NotImplementedError

    def detect_all(self, signals: SignalSet, q: int, seed: int) -> list[DetectorResult]:
        """Test every ordered pair of distinct series"""
        return [
            self.detect_pair(signals, source, target, q, pair_seed(seed, source, target))
            for source in range(signals.d)
            for target in range(signals.d)
            if source != target
        ]

    def summary_graph(self, signals: SignalSet, q: int, seed: int) -> tuple[SummaryGraph, list[DetectorResult]]:
        """Summary graph of the positive decisions"""
        results = self.detect_all(signals, q, seed)
        graph = SummaryGraph.from_edges(
            signals.d, [(result.source, result.target) for result in results if result.decision]
        )
        return graph, results

    def window_graph(self, signals: SignalSet, q: int, seed: int) -> Optional[WindowGraph]:
        """Lag-resolved output; None for summary-graph detectors"""
        return None
