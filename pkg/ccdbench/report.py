"""Static SVG rendering of sweep records for ccdbench module."""
from __future__ import annotations

import io
import logging
import math
from pathlib import Path
from typing import Iterable, Optional, Union

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.cm import ScalarMappable
from matplotlib.colors import Normalize
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from .const import CSV_COLUMNS, Metric
from .graphs import DetectionWindow
from .sweep import SweepRecord, records_frame

_LOGGER = logging.getLogger(__name__)

SVG_HASH_SALT = "ccdbench"
HEATMAP_COLORMAP = "viridis"
MISSING_CELL_COLOR = "#d9d9d9"
_METRIC_COLUMNS = {Metric.F1: "f1", Metric.STATISTIC: "statistic", Metric.DECISION_RATE: "decision"}
_AXES = ("Q", "k")

Records = Union[pd.DataFrame, Iterable[SweepRecord]]


class ReportException(ValueError):
    """When records cannot be drawn as requested"""


def load_records(path: Path | str) -> pd.DataFrame:
    """Read a records CSV written by the sweep"""
    frame = pd.read_csv(path, dtype={"detector": str}, keep_default_na=False, na_values=[""])
    missing = set(CSV_COLUMNS) - set(frame.columns)
    if missing:
        raise ReportException(f"{path} lacks columns {sorted(missing)}")
    frame["skipped"] = frame["skipped"].fillna("").astype(str)
    return frame


def _frame(records: Records) -> pd.DataFrame:
    if isinstance(records, pd.DataFrame):
        return records
    return records_frame(records)


def _select_detector(frame: pd.DataFrame, detector: Optional[str]) -> tuple[pd.DataFrame, str]:
    names = sorted(frame["detector"].unique())
    if not names:
        raise ReportException("No records to draw")
    if detector is None:
        if len(names) > 1:
            raise ReportException(f"Records hold several detectors {names}; name one")
        detector = names[0]
    selected = frame[frame["detector"] == detector]
    if selected.empty:
        raise ReportException(f"No records for detector {detector}")
    return selected, detector


def metric_column(metric: Metric) -> str:
    """Column averaged for a metric"""
    try:
        return _METRIC_COLUMNS[Metric(metric)]
    except ValueError as error:
        raise ReportException(f"Unknown metric {metric!r}") from error


def seed_average(frame: pd.DataFrame, metric: Metric, by: list[str]) -> pd.Series:
    """Mean of the metric over the seeds of each group, skipped cells excluded"""
    column = metric_column(metric)
    ran = frame[frame["skipped"] == ""].copy()
    ran[column] = ran[column].astype(float)
    return ran.groupby(by)[column].mean()


def heatmap_grid(records: Records, metric: Metric, detector: Optional[str] = None) -> pd.DataFrame:
    """Seed-averaged metric on the (Q, k) grid, rows Q and columns k.

    A cell whose seeds were all skipped holds NaN.
    """
    frame, _ = _select_detector(_frame(records), detector)
    q_values = sorted(frame["Q"].unique())
    k_values = sorted(frame["k"].unique())
    present = set(zip(frame["Q"], frame["k"]))
    if len(present) != len(q_values) * len(k_values):
        raise ReportException(f"Ragged grid: {len(present)} cells for {len(q_values)} Q x {len(k_values)} k")
    means = seed_average(frame, metric, list(_AXES))
    full = pd.MultiIndex.from_product([q_values, k_values], names=list(_AXES))
    return means.reindex(full).unstack("k")


def _color_norm(metric: Metric, values: np.ndarray) -> Normalize:
    if Metric(metric) in (Metric.F1, Metric.DECISION_RATE):
        return Normalize(0.0, 1.0)
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return Normalize(0.0, 1.0)
    low, high = float(finite.min()), float(finite.max())
    if low == high:
        low, high = low - 0.5, high + 0.5
    return Normalize(low, high)


def _to_svg(figure: Figure, path: Optional[Path | str]) -> str:
    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    document = buffer.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(document)
        _LOGGER.info("Wrote %s", path)
    return document


def render_heatmap(
    records: Records,
    metric: Metric = Metric.F1,
    detector: Optional[str] = None,
    path: Optional[Path | str] = None,
    title: Optional[str] = None,
) -> str:
    """Draw the seed-averaged metric as one colored cell per (Q, k)"""
    grid = heatmap_grid(records, metric, detector)
    _, detector = _select_detector(_frame(records), detector)
    values = grid.to_numpy(dtype=float)
    norm = _color_norm(metric, values)
    colormap = matplotlib.colormaps[HEATMAP_COLORMAP]

    figure = Figure(figsize=(1.0 + 0.7 * grid.shape[1], 1.0 + 0.6 * grid.shape[0]), layout="constrained")
    axes = figure.add_subplot()
    for row, q in enumerate(grid.index):
        for column, k in enumerate(grid.columns):
            value = values[row, column]
            color = MISSING_CELL_COLOR if math.isnan(value) else colormap(norm(value))
            axes.add_patch(
                Rectangle((column, row), 1.0, 1.0, facecolor=color, edgecolor="none", gid=f"heatcell_{q}_{k}")
            )
            if not math.isnan(value):
                shade = "white" if norm(value) < 0.5 else "black"
                axes.text(column + 0.5, row + 0.5, f"{value:.2f}", ha="center", va="center", fontsize=7, color=shade)

    axes.set_xlim(0, grid.shape[1])
    axes.set_ylim(0, grid.shape[0])
    axes.set_xticks(np.arange(grid.shape[1]) + 0.5, [str(k) for k in grid.columns])
    axes.set_yticks(np.arange(grid.shape[0]) + 0.5, [str(q) for q in grid.index])
    axes.set_xlabel("downsampling factor k")
    axes.set_ylabel("window length Q")
    axes.set_title(title or f"{detector}: mean {Metric(metric).value}")
    figure.colorbar(ScalarMappable(norm=norm, cmap=colormap), ax=axes, label=Metric(metric).value)
    return _to_svg(figure, path)


def render_line_plot(
    records: Records,
    axis: str,
    metric: Metric = Metric.DECISION_RATE,
    path: Optional[Path | str] = None,
    window: Optional[DetectionWindow] = None,
    title: Optional[str] = None,
) -> str:
    """Draw the seed-averaged metric of every detector against Q or k.

    For the statistic metric the seed-averaged threshold is drawn dashed;
    a detection window is shaded on the k axis.
    """
    if axis not in _AXES:
        raise ReportException(f"Axis must be one of {_AXES}, got {axis!r}")
    frame = _frame(records)
    other = _AXES[1 - _AXES.index(axis)]
    if frame.empty:
        raise ReportException("No records to draw")
    if frame[other].nunique() != 1:
        raise ReportException(f"Line plot against {axis} needs a single {other} value")

    figure = Figure(figsize=(6.0, 4.0), layout="constrained")
    axes = figure.add_subplot()
    for detector in sorted(frame["detector"].unique()):
        selected = frame[frame["detector"] == detector]
        means = seed_average(selected, metric, [axis])
        axes.plot(means.index, means.to_numpy(), marker="o", label=detector, gid=f"line_{detector}")
        if Metric(metric) is Metric.STATISTIC:
            thresholds = selected[selected["skipped"] == ""].groupby(axis)["threshold"].mean()
            axes.plot(
                thresholds.index,
                thresholds.to_numpy(),
                linestyle="--",
                color=axes.lines[-1].get_color(),
                label=f"{detector} threshold",
                gid=f"threshold_{detector}",
            )

    if window is not None:
        if axis != "k":
            raise ReportException("A detection window is drawn on the k axis only")
        axes.axvspan(
            window.low, window.high, color="tab:green", alpha=0.15, label="detection window", gid="detection_window"
        )

    if Metric(metric) in (Metric.F1, Metric.DECISION_RATE):
        axes.set_ylim(-0.05, 1.05)
    axes.set_xlabel("window length Q" if axis == "Q" else "downsampling factor k")
    axes.set_ylabel(Metric(metric).value)
    axes.set_title(title or f"mean {Metric(metric).value} against {axis}")
    axes.legend(loc="best", fontsize=8)
    return _to_svg(figure, path)
