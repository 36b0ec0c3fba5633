"""ccdbench module"""
import logging
from pathlib import Path
from typing import Any, Optional

from .base_detector import BaseDetector, DetectorException, DetectorResult
from .config import ConfigException, DetectorSpec, SweepConfig, default_config
from .const import (
    DEFAULT_SEED,
    DetectorName,
    Metric,
    Preset,
    Scenario,
)
from .cross_mapping import CcmResult, ccm
from .detectors import get_detector, registered_detectors
from .granger import gc_f_test, gc_variance_reduction
from .graphs import (
    GraphMetrics,
    SummaryGraph,
    WindowGraph,
    detection_window,
    score,
    summarize,
)
from .order_selection import false_nearest_neighbors, select_order_ic
from .presets import replicate
from .report import render_heatmap, render_line_plot
from .sampling import DecimationConfig, downsample, lag_embed
from .signals import DgpSpec, GroundTruth, SignalSet, generate_pair
from .sweep import SweepRecord, async_run_sweep, run_sweep
from .transfer_entropy import transfer_entropy
from .var_graph import var_window_graph

_LOGGER = logging.getLogger(__name__)


def simulate(
    scenario: Scenario = Scenario.COUPLED,
    seed: int = DEFAULT_SEED,
    **overrides: Any,
) -> tuple[SignalSet, GroundTruth]:
    """Simulate the default pair of a scenario"""
    return generate_pair(DgpSpec.for_scenario(Scenario(scenario), seed=seed, **overrides))


def detect(
    signals: SignalSet,
    detector: str,
    q: int,
    params: Optional[dict[str, Any]] = None,
    seed: int = DEFAULT_SEED,
) -> tuple[SummaryGraph, list[DetectorResult]]:
    """Run one registered detector on every ordered pair"""
    return get_detector(detector, params).summary_graph(signals, q, seed)


def sweep(config_path: Path | str, workers: Optional[int] = None) -> list[SweepRecord]:
    """Run a sweep config file"""
    return run_sweep(SweepConfig.load(config_path), workers)


async def async_sweep(config_path: Path | str, workers: Optional[int] = None) -> list[SweepRecord]:
    """Async run a sweep config file"""
    return await async_run_sweep(SweepConfig.load(config_path), workers)
