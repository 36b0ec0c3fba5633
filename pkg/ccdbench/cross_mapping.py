"""Convergent cross mapping for ccdbench module."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .base_detector import BaseDetector, DetectorException, DetectorResult, check_pair
from .const import (
    DEFAULT_CCM_LIBRARY_COUNT,
    DEFAULT_CCM_MARGIN,
    DEFAULT_CCM_MAX_LIBRARY,
    DEFAULT_CCM_MIN_SKILL,
    DEFAULT_CCM_PREDICTIONS,
    DEFAULT_CCM_TAU,
    DetectorName,
    DiagnosticKey,
)
from .sampling import delay_embed
from .signals import SignalSet, make_rng

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CcmResult:
    """Cross-map skill against library size for one direction"""

    library_sizes: np.ndarray
    skills: np.ndarray
    converged: bool
    e: int
    tau_embed: int

    @property
    def final_skill(self) -> float:
        """Skill at the largest library"""
        return float(self.skills[-1])


class CcmPair(NamedTuple):
    """Both directions of a cross-mapping test"""

    x_causes_y: CcmResult
    y_causes_x: CcmResult


def default_library_sizes(n_points: int, e: int, count: int = DEFAULT_CCM_LIBRARY_COUNT) -> np.ndarray:
    """Geometrically spaced library sizes up to the usable number of points"""
    smallest = max(2 * (e + 2), 20)
    largest = min(n_points - 1, DEFAULT_CCM_MAX_LIBRARY)
    if largest <= smallest:
        raise DetectorException(f"{n_points} embedded points are too few for E={e}")
    return np.unique(np.geomspace(smallest, largest, count).astype(int))


def _skill(estimates: np.ndarray, truth: np.ndarray) -> float:
    """Pearson correlation; zero when either side is constant"""
    if np.std(estimates) == 0.0 or np.std(truth) == 0.0:
        return 0.0
    return float(np.clip(np.corrcoef(estimates, truth)[0, 1], -1.0, 1.0))


def _cross_map(
    manifold: np.ndarray,
    values: np.ndarray,
    library: np.ndarray,
    predictions: np.ndarray,
    n_neighbors: int,
) -> float:
    """Simplex cross-map skill of `values` from neighbours on `manifold`"""
    library = np.sort(library)
    tree = cKDTree(manifold[library])
    distances, positions = tree.query(manifold[predictions], k=n_neighbors + 1)
    neighbors = library[positions]

    # self matches are excluded; ties go to the lower point index
    distances = np.where(neighbors == predictions[:, np.newaxis], np.inf, distances)
    order = np.lexsort((neighbors, distances), axis=1)[:, :n_neighbors]
    distances = np.take_along_axis(distances, order, axis=1)
    neighbors = np.take_along_axis(neighbors, order, axis=1)

    nearest = distances[:, :1]
    duplicates = nearest[:, 0] == 0.0
    if np.any(duplicates):
        _LOGGER.warning("%s prediction points have a duplicate neighbour; using uniform weights", int(duplicates.sum()))
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = np.exp(-distances / nearest)
    weights[duplicates] = 1.0
    weights /= weights.sum(axis=1, keepdims=True)
    estimates = np.sum(weights * values[neighbors], axis=1)
    return _skill(estimates, values[predictions])


def _direction(
    driven: np.ndarray,
    driver: np.ndarray,
    e: int,
    tau_embed: int,
    library_sizes: np.ndarray,
    n_neighbors: int,
    n_predictions: int,
    rng: np.random.Generator,
    margin: float,
    min_skill: float,
) -> CcmResult:
    """Cross map the driver from the shadow manifold of the driven series"""
    manifold = delay_embed(driven, e, tau_embed)
    values = driver[(e - 1) * tau_embed:]
    n_points = manifold.shape[0]
    if library_sizes[-1] > n_points:
        raise DetectorException(f"Library size {library_sizes[-1]} exceeds {n_points} embedded points")

    predictions = np.sort(rng.choice(n_points, min(n_points, n_predictions), replace=False))
    skills = np.array(
        [
            _cross_map(manifold, values, rng.choice(n_points, size, replace=False), predictions, n_neighbors)
            for size in library_sizes
        ]
    )
    converged = bool(
        skills.size > 1 and skills[-1] - skills[0] > margin and skills[-1] > min_skill
    )
    return CcmResult(library_sizes, skills, converged, e, tau_embed)


def ccm(
    x: Sequence[float],
    y: Sequence[float],
    e: int,
    tau_embed: int = DEFAULT_CCM_TAU,
    library_sizes: Optional[Sequence[int]] = None,
    n_neighbors: Optional[int] = None,
    seed: int = 0,
    n_predictions: int = DEFAULT_CCM_PREDICTIONS,
    margin: float = DEFAULT_CCM_MARGIN,
    min_skill: float = DEFAULT_CCM_MIN_SKILL,
) -> CcmPair:
    """Convergent cross mapping in both directions.

    "x causes y" is judged by mapping the shadow manifold of y onto x.
    """
    x_values, y_values = check_pair(x, y)
    if e < 1 or tau_embed < 1:
        raise DetectorException(f"Invalid embedding E={e}, tau={tau_embed}")
    neighbors = e + 1 if n_neighbors is None else n_neighbors
    n_points = x_values.size - (e - 1) * tau_embed
    if n_points < 2:
        raise DetectorException(f"Series of length {x_values.size} too short for E={e}, tau={tau_embed}")

    sizes = default_library_sizes(n_points, e) if library_sizes is None else np.asarray(library_sizes, dtype=int)
    if sizes.size == 0 or np.any(np.diff(sizes) <= 0):
        raise DetectorException("Library sizes must be nonempty and strictly increasing")
    if sizes[0] <= neighbors:
        raise DetectorException(f"Smallest library {sizes[0]} must exceed the {neighbors} neighbours")

    rng = make_rng(seed)
    return CcmPair(
        x_causes_y=_direction(
            y_values, x_values, e, tau_embed, sizes, neighbors, n_predictions, rng, margin, min_skill
        ),
        y_causes_x=_direction(
            x_values, y_values, e, tau_embed, sizes, neighbors, n_predictions, rng, margin, min_skill
        ),
    )


class CcmDetector(BaseDetector):
    """Cross mapping with the window length Q used as embedding dimension"""

    @property
    def name(self) -> DetectorName:
        return DetectorName.CCM

    @property
    def default_params(self) -> dict[str, Any]:
        return {
            "tau_embed": DEFAULT_CCM_TAU,
            "n_predictions": DEFAULT_CCM_PREDICTIONS,
            "margin": DEFAULT_CCM_MARGIN,
            "min_skill": DEFAULT_CCM_MIN_SKILL,
        }

    def infeasible_reason(self, t: int, d: int, q: int) -> Optional[str]:
        n_points = t - (q - 1) * self.params["tau_embed"]
        if min(n_points - 1, DEFAULT_CCM_MAX_LIBRARY) <= max(2 * (q + 2), 20):
            return f"{n_points} embedded points too few for E={q}"
        return None

    def detect_pair(self, signals: SignalSet, source: int, target: int, q: int, seed: int) -> DetectorResult:
        result = ccm(
            signals.series(source),
            signals.series(target),
            q,
            tau_embed=self.params["tau_embed"],
            seed=seed,
            n_predictions=self.params["n_predictions"],
            margin=self.params["margin"],
            min_skill=self.params["min_skill"],
        )
        forward = result.x_causes_y
        threshold = max(self.params["min_skill"], float(forward.skills[0]) + self.params["margin"])
        diagnostics = {
            DiagnosticKey.SKILL_MIN_LIBRARY: float(forward.skills[0]),
            DiagnosticKey.SKILL_MAX_LIBRARY: forward.final_skill,
            DiagnosticKey.REVERSE_SKILL: result.y_causes_x.final_skill,
        }
        return DetectorResult.decide(source, target, forward.final_skill, threshold, diagnostics)
