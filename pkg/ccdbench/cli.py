"""Command line interface for ccdbench module."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .base_detector import DetectorException
from .config import ConfigException, SweepConfig, default_config
from .const import DEFAULT_SEED, DEFAULT_T, DetectorName, Metric, OutputFormat, Preset, Scenario
from .detectors import get_detector, registered_detectors
from .graphs import GraphException
from .numerics import NumericsException
from .presets import replicate
from .report import ReportException, load_records, render_heatmap, render_line_plot
from .sampling import SamplingException
from .signals import DgpSpec, SignalException, SignalSet, gen_coupled_logistic, gen_var, generate_pair
from .sweep import run_sweep, write_csv, write_json

_LOGGER = logging.getLogger(__name__)

EXIT_FAILURE = 2
SIGNALS_FILE = "signals.csv"
TRUTH_FILE = "ground_truth.json"
LOGISTIC_COUPLING = 0.4
PLANTED_VAR = np.array([[[0.5, 0.0], [0.4, 0.5]]])

_PACKAGE_EXCEPTIONS = (
    ConfigException,
    DetectorException,
    GraphException,
    NumericsException,
    ReportException,
    SamplingException,
    SignalException,
)


def _simulate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seed = DEFAULT_SEED if args.seed is None else args.seed
    match args.scenario:
        case "logistic":
            signals, truth = gen_coupled_logistic(args.samples, LOGISTIC_COUPLING, seed)
        case "var":
            signals, truth = gen_var(PLANTED_VAR, args.samples, seed)
        case _ if args.config is not None:
            config = SweepConfig.load(args.config).with_overrides(seed=args.seed)
            signals, truth = generate_pair(config.dgp)
        case scenario:
            signals, truth = generate_pair(DgpSpec.for_scenario(Scenario(scenario), seed=seed, n_samples=args.samples))

    signals.to_csv(out / SIGNALS_FILE)
    with open(out / TRUTH_FILE, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(
            {
                "summary": truth.summary.to_dict(),
                "window": truth.window.to_dict(),
                "effective_delay": truth.effective_delay,
            },
            handle,
            indent=2,
        )
        handle.write("\n")
    _LOGGER.info("Wrote %s and %s", out / SIGNALS_FILE, out / TRUTH_FILE)
    return 0


def _detect(args: argparse.Namespace) -> int:
    signals = SignalSet.from_csv(args.data)
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as error:
        raise ConfigException(f"--params is not valid JSON: {error}") from error
    detector = get_detector(args.detector, params)
    reason = detector.infeasible_reason(signals.t, signals.d, args.q)
    if reason is not None:
        raise DetectorException(f"{detector.name.value} cannot run: {reason}")

    seed = DEFAULT_SEED if args.seed is None else args.seed
    graph, results = detector.summary_graph(signals, args.q, seed)
    output = {
        "detector": detector.name.value,
        "Q": args.q,
        "params": detector.params,
        "results": [result.to_dict() for result in results],
        "summary": graph.to_dict(),
    }
    window = detector.window_graph(signals, args.q, seed)
    if window is not None:
        output["window"] = window.to_dict()
    print(json.dumps(output, indent=2))
    return 0


def _sweep(args: argparse.Namespace) -> int:
    config = SweepConfig.load(args.config) if args.config else default_config()
    config = config.with_overrides(seed=args.seed, output_dir=args.out, timing=args.timing)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config.dump(out / "config.json")

    records = run_sweep(config, args.workers)
    if OutputFormat(args.format) is OutputFormat.JSON:
        write_json(records, out / "records.json")
    else:
        write_csv(records, out / "records.csv")
    return 0


def _report(args: argparse.Namespace) -> int:
    frame = load_records(args.records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    metric = Metric(args.metric)
    if frame["Q"].nunique() > 1 and frame["k"].nunique() > 1:
        for detector in sorted(frame["detector"].unique()):
            render_heatmap(frame, metric, detector=detector, path=out / f"{detector}_{metric.value}.svg")
    else:
        axis = "Q" if frame["Q"].nunique() > 1 else "k"
        render_line_plot(frame, axis, metric, path=out / f"{metric.value}_{axis}.svg")
    return 0


def _replicate(args: argparse.Namespace) -> int:
    written = replicate(
        Preset(args.preset),
        args.out or Path("results") / args.preset,
        seed_count=args.seeds,
        workers=args.workers,
        base_seed=DEFAULT_SEED if args.seed is None else args.seed,
        te_bins=args.te_bins,
    )
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation"""
    parser = argparse.ArgumentParser(prog="ccdbench", description="Chronological causal discovery benchmark")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="write a simulated signal set to CSV")
    simulate.add_argument("--scenario", default=Scenario.COUPLED.value,
                          choices=[s.value for s in Scenario] + ["logistic", "var"])
    simulate.add_argument("--config", help="take the process from a sweep config")
    simulate.add_argument("--samples", type=int, default=DEFAULT_T)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--out", default=".")
    simulate.set_defaults(handler=_simulate)

    detect = commands.add_parser("detect", help="run one detector on a data file")
    detect.add_argument("data", help="headerful CSV with a '# tau=' line")
    detect.add_argument("--detector", default=DetectorName.GC_F.value, choices=registered_detectors())
    detect.add_argument("-q", "--window", dest="q", type=int, default=5, help="window length Q")
    detect.add_argument("--params", help="detector hyperparameters as a JSON object")
    detect.add_argument("--seed", type=int)
    detect.set_defaults(handler=_detect)

    sweep = commands.add_parser("sweep", help="run a sweep config")
    sweep.add_argument("--config")
    sweep.add_argument("--out")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--format", default=OutputFormat.CSV.value, choices=[f.value for f in OutputFormat])
    sweep.add_argument("--timing", action="store_true", help="measure wall_time_ms")
    sweep.set_defaults(handler=_sweep)

    report = commands.add_parser("report", help="render SVG plots from a records CSV")
    report.add_argument("records")
    report.add_argument("--metric", default=Metric.F1.value, choices=[m.value for m in Metric])
    report.add_argument("--out", default=".")
    report.set_defaults(handler=_report)

    replicate_parser = commands.add_parser("replicate", help="run a figure preset")
    replicate_parser.add_argument("preset", choices=[p.value for p in Preset])
    replicate_parser.add_argument("--out")
    replicate_parser.add_argument("--workers", type=int)
    replicate_parser.add_argument("--seed", type=int)
    replicate_parser.add_argument("--seeds", type=int, help="replicates per cell")
    replicate_parser.add_argument("--te-bins", type=int, help="transfer entropy bins for fig_varyQ")
    replicate_parser.set_defaults(handler=_replicate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ccdbench command"""
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.handler(args)
    except _PACKAGE_EXCEPTIONS as error:
        _LOGGER.error("%s failed: %s", args.command, error)
        return EXIT_FAILURE
    except OSError as error:
        _LOGGER.error("%s failed: %s", args.command, error)
        return EXIT_FAILURE
