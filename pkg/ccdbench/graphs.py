"""Window graphs, summary graphs and their scoring."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, NamedTuple, Optional

import networkx as nx
import numpy as np

_LOGGER = logging.getLogger(__name__)


class GraphException(ValueError):
    """When a graph is malformed or graphs do not match"""


@dataclass(frozen=True)
class WindowGraph:
    """Directed graph over series and their lags.

    lagged[i, j, q - 1] is the edge x_{i,t-q} -> x_{j,t}. instantaneous[i, j],
    when present, is the edge x_{i,t} -> x_{j,t} and must be acyclic.
    """

    d: int
    q_max: int
    lagged: np.ndarray
    instantaneous: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        lagged = np.asarray(self.lagged, dtype=bool)
        if lagged.shape != (self.d, self.d, self.q_max):
            raise GraphException(
                f"Lagged tensor shape {lagged.shape} does not match d={self.d}, q_max={self.q_max}"
            )
        object.__setattr__(self, "lagged", lagged)
        if self.instantaneous is None:
            return
        instantaneous = np.asarray(self.instantaneous, dtype=bool)
        if instantaneous.shape != (self.d, self.d):
            raise GraphException(f"Instantaneous slice shape {instantaneous.shape} is not {self.d}x{self.d}")
        if np.any(np.diag(instantaneous)):
            raise GraphException("Instantaneous slice has a self-loop")
        graph = nx.from_numpy_array(instantaneous.astype(int), create_using=nx.DiGraph)
        if not nx.is_directed_acyclic_graph(graph):
            raise GraphException("Instantaneous slice has a cycle")
        object.__setattr__(self, "instantaneous", instantaneous)

    @classmethod
    def empty(cls, d: int, q_max: int) -> WindowGraph:
        """Window graph without edges"""
        return cls(d, q_max, np.zeros((d, d, q_max), dtype=bool))

    @classmethod
    def from_edges(
        cls,
        d: int,
        q_max: int,
        lagged_edges: list[tuple[int, int, int]],
        instantaneous_edges: Optional[list[tuple[int, int]]] = None,
    ) -> WindowGraph:
        """Build from (source, target, lag) triples"""
        lagged = np.zeros((d, d, q_max), dtype=bool)
        for source, target, lag in lagged_edges:
            if not 1 <= lag <= q_max:
                raise GraphException(f"Lag {lag} outside 1..{q_max}")
            lagged[source, target, lag - 1] = True
        instantaneous = None
        if instantaneous_edges is not None:
            instantaneous = np.zeros((d, d), dtype=bool)
            for source, target in instantaneous_edges:
                instantaneous[source, target] = True
        return cls(d, q_max, lagged, instantaneous)

    def lagged_edges(self) -> list[tuple[int, int, int]]:
        """Get (source, target, lag) triples in index order"""
        return [(int(i), int(j), int(q) + 1) for i, j, q in np.argwhere(self.lagged)]

    def instantaneous_edges(self) -> list[tuple[int, int]]:
        """Get instantaneous (source, target) pairs"""
        if self.instantaneous is None:
            return []
        return [(int(i), int(j)) for i, j in np.argwhere(self.instantaneous)]

    def to_dict(self) -> dict[str, Any]:
        """JSON adjacency form"""
        data: dict[str, Any] = {
            "d": self.d,
            "q_max": self.q_max,
            "lagged": [list(edge) for edge in self.lagged_edges()],
        }
        if self.instantaneous is not None:
            data["instantaneous"] = [list(edge) for edge in self.instantaneous_edges()]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> WindowGraph:
        """Parse the JSON adjacency form"""
        try:
            instantaneous = data.get("instantaneous")
            return cls.from_edges(
                int(data["d"]),
                int(data["q_max"]),
                [tuple(edge) for edge in data["lagged"]],
                None if instantaneous is None else [tuple(edge) for edge in instantaneous],
            )
        except (KeyError, TypeError, IndexError) as error:
            raise GraphException(f"Invalid window graph document: {error}") from error

    def edge_list(self) -> str:
        """Plain-text edge list, one `i -> j [lag q]` per line"""
        lines = [f"{i} -> {j} [lag {q}]" for i, j, q in self.lagged_edges()]
        lines.extend(f"{i} -> {j} [lag 0]" for i, j in self.instantaneous_edges())
        return "\n".join(lines)


@dataclass(frozen=True)
class SummaryGraph:
    """Directed graph over series"""

    d: int
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        adjacency = np.asarray(self.adjacency, dtype=bool)
        if adjacency.shape != (self.d, self.d):
            raise GraphException(f"Adjacency shape {adjacency.shape} is not {self.d}x{self.d}")
        object.__setattr__(self, "adjacency", adjacency)

    @classmethod
    def empty(cls, d: int) -> SummaryGraph:
        """Summary graph without edges"""
        return cls(d, np.zeros((d, d), dtype=bool))

    @classmethod
    def from_edges(cls, d: int, edges: list[tuple[int, int]]) -> SummaryGraph:
        """Build from (source, target) pairs"""
        adjacency = np.zeros((d, d), dtype=bool)
        for source, target in edges:
            adjacency[source, target] = True
        return cls(d, adjacency)

    def edges(self) -> list[tuple[int, int]]:
        """Get (source, target) pairs in index order"""
        return [(int(i), int(j)) for i, j in np.argwhere(self.adjacency)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SummaryGraph):
            return NotImplemented
        return self.d == other.d and bool(np.array_equal(self.adjacency, other.adjacency))

    def __hash__(self) -> int:
        return hash((self.d, self.adjacency.tobytes()))

    def to_dict(self) -> dict[str, Any]:
        """JSON adjacency form"""
        return {"d": self.d, "edges": [list(edge) for edge in self.edges()]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SummaryGraph:
        """Parse the JSON adjacency form"""
        try:
            return cls.from_edges(int(data["d"]), [tuple(edge) for edge in data["edges"]])
        except (KeyError, TypeError, IndexError) as error:
            raise GraphException(f"Invalid summary graph document: {error}") from error

    def edge_list(self) -> str:
        """Plain-text edge list, one `i -> j` per line"""
        return "\n".join(f"{i} -> {j}" for i, j in self.edges())


@dataclass(frozen=True)
class GraphMetrics:
    """Precision, recall and F1 of a predicted graph"""

    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> GraphMetrics:
        """Apply the scoring formulas and the zero-denominator conventions"""
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision = 0.0 if fn > 0 else 1.0
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            recall = 1.0 if fp == 0 else 0.0
        if precision + recall > 0.0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(tp, fp, fn, precision, recall, f1)


class DetectionWindow(NamedTuple):
    """Closed interval of downsampling factors"""

    low: float
    high: float

    def contains(self, k: float) -> bool:
        """Check if k lies inside the window"""
        return self.low <= k <= self.high


def summarize(window: WindowGraph) -> SummaryGraph:
    """Aggregate a window graph over its lags"""
    adjacency = window.lagged.any(axis=2)
    if window.instantaneous is not None:
        adjacency = adjacency | window.instantaneous
    np.fill_diagonal(adjacency, False)
    return SummaryGraph(window.d, adjacency)


def score(predicted: SummaryGraph, truth: SummaryGraph) -> GraphMetrics:
    """Score a predicted summary graph over off-diagonal ordered pairs"""
    if predicted.d != truth.d:
        raise GraphException(f"Cannot score a {predicted.d}-node graph against a {truth.d}-node graph")
    off_diagonal = ~np.eye(truth.d, dtype=bool)
    pred = predicted.adjacency & off_diagonal
    true = truth.adjacency & off_diagonal
    return GraphMetrics.from_counts(
        tp=int(np.count_nonzero(pred & true)),
        fp=int(np.count_nonzero(pred & ~true)),
        fn=int(np.count_nonzero(~pred & true)),
    )


def score_window(predicted: WindowGraph, truth: WindowGraph) -> GraphMetrics:
    """Score lag-resolved edges, self-lags excluded"""
    if predicted.d != truth.d:
        raise GraphException(f"Cannot score a {predicted.d}-node graph against a {truth.d}-node graph")
    q_max = max(predicted.q_max, truth.q_max)

    def _pad(graph: WindowGraph) -> np.ndarray:
        tensor = np.zeros((graph.d, graph.d, q_max), dtype=bool)
        tensor[:, :, : graph.q_max] = graph.lagged
        for i in range(graph.d):
            tensor[i, i, :] = False
        return tensor

    pred = _pad(predicted)
    true = _pad(truth)
    return GraphMetrics.from_counts(
        tp=int(np.count_nonzero(pred & true)),
        fp=int(np.count_nonzero(pred & ~true)),
        fn=int(np.count_nonzero(~pred & true)),
    )


def detection_window(delay: float, q: int) -> DetectionWindow:
    """Downsampling factors that put the delay between lag 1 and lag q"""
    if not delay > 0 or math.isinf(delay):
        raise GraphException(f"Delay must be positive and finite, got {delay}")
    if q < 1:
        raise GraphException(f"Window length must be at least 1, got {q}")
    return DetectionWindow(delay / q, float(delay))
