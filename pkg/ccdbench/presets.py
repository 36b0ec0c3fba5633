"""Figure replication presets for ccdbench module."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from .config import DetectorSpec, SweepConfig
from .const import (
    DEFAULT_SEED,
    DETECTION_WINDOW_DELAY,
    FIG_DEFAULT_SEED_COUNT,
    FIG_GRID_K_VALUES,
    FIG_GRID_Q_VALUES,
    FIG_GRID_SEED_COUNT,
    FIG_VARY_K_Q,
    FIG_VARY_K_VALUES,
    FIG_VARY_Q_VALUES,
    DetectorName,
    Metric,
    Preset,
    Scenario,
)
from .detectors import registered_detectors
from .graphs import detection_window
from .report import render_heatmap, render_line_plot
from .signals import DgpSpec
from .sweep import run_sweep, write_csv

_LOGGER = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
RECORDS_FILE = "records.csv"


def preset_config(
    preset: Preset,
    out_dir: Path | str,
    seed_count: Optional[int] = None,
    base_seed: int = DEFAULT_SEED,
    te_bins: Optional[int] = None,
    n_samples: Optional[int] = None,
) -> SweepConfig:
    """Sweep configuration of a figure preset"""
    preset = Preset(preset)
    overrides = {} if n_samples is None else {"n_samples": n_samples}
    scenario = Scenario.INDEPENDENT if preset is Preset.FIG_INDEP_GRID else Scenario.COUPLED
    dgp = DgpSpec.for_scenario(scenario, seed=base_seed, **overrides)
    grid = preset in (Preset.FIG_INDEP_GRID, Preset.FIG_COUPLED_GRID)
    count = seed_count or (FIG_GRID_SEED_COUNT if grid else FIG_DEFAULT_SEED_COUNT)

    match preset:
        case Preset.FIG_VARY_Q:
            te_params = {} if te_bins is None else {"bins": te_bins}
            detectors = (
                DetectorSpec(DetectorName.GC_VAR),
                DetectorSpec(DetectorName.GC_F),
                DetectorSpec(DetectorName.TE, te_params),
            )
            q_values, k_values = FIG_VARY_Q_VALUES, (1,)
        case Preset.FIG_VARY_K:
            detectors = (DetectorSpec(DetectorName.GC_VAR),)
            q_values, k_values = (FIG_VARY_K_Q,), FIG_VARY_K_VALUES
        case _:
            detectors = tuple(DetectorSpec(DetectorName(name)) for name in registered_detectors())
            q_values, k_values = FIG_GRID_Q_VALUES, FIG_GRID_K_VALUES

    return SweepConfig(
        dgp=dgp,
        scenario=scenario,
        detectors=detectors,
        q_values=tuple(q_values),
        k_values=tuple(k_values),
        seeds=tuple(range(count)),
        output_dir=Path(out_dir),
    )


def replicate(
    preset: Preset,
    out_dir: Path | str,
    seed_count: Optional[int] = None,
    workers: Optional[int] = None,
    base_seed: int = DEFAULT_SEED,
    te_bins: Optional[int] = None,
    n_samples: Optional[int] = None,
) -> list[Path]:
    """Run a figure preset and write its config, records CSV and SVG plots"""
    preset = Preset(preset)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = preset_config(preset, out, seed_count, base_seed, te_bins, n_samples)
    _LOGGER.info("Replicating %s into %s", preset.value, out)

    written = [out / CONFIG_FILE, out / RECORDS_FILE]
    config.dump(written[0])
    records = run_sweep(config, workers)
    write_csv(records, written[1])

    match preset:
        case Preset.FIG_VARY_Q:
            file_name = f"{preset.value}_decision_rate.svg"
            render_line_plot(records, axis="Q", metric=Metric.DECISION_RATE, path=out / file_name)
            written.append(out / file_name)
            # statistics live on different scales, one plot per detector
            for detector in sorted({record.detector for record in records}):
                file_name = f"{preset.value}_{detector}_statistic.svg"
                selected = [record for record in records if record.detector == detector]
                render_line_plot(selected, axis="Q", metric=Metric.STATISTIC, path=out / file_name)
                written.append(out / file_name)
        case Preset.FIG_VARY_K:
            window = detection_window(DETECTION_WINDOW_DELAY, FIG_VARY_K_Q)
            for metric in (Metric.F1, Metric.STATISTIC):
                file_name = f"{preset.value}_{metric.value}.svg"
                render_line_plot(records, axis="k", metric=metric, path=out / file_name, window=window)
                written.append(out / file_name)
        case _:
            for detector in sorted({record.detector for record in records}):
                file_name = f"{preset.value}_{detector}_f1.svg"
                render_heatmap(records, Metric.F1, detector=detector, path=out / file_name)
                written.append(out / file_name)
    return written
