"""Sweep configuration for ccdbench module."""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional

from .base_detector import DetectorException
from .const import (
    CONFIG_VERSION,
    DEFAULT_COUPLING_DELAY,
    DEFAULT_COUPLING_HALF_WIDTH,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    ENV_WORKERS,
    DetectorName,
    Scenario,
)
from .detectors import get_detector
from .signals import DgpSpec, design_delay_fir

_LOGGER = logging.getLogger(__name__)

_TOP_LEVEL_KEYS = frozenset(
    {
        "version",
        "scenario",
        "dgp",
        "detectors",
        "q_values",
        "k_values",
        "seeds",
        "anti_alias",
        "output_dir",
        "workers",
        "timing",
    }
)
_DGP_KEYS = frozenset(f.name for f in fields(DgpSpec)) | {"coupling_delay", "coupling_half_width"}
_DETECTOR_KEYS = frozenset({"name", "params"})
_SEED_RANGE_KEYS = frozenset({"base", "count"})
DEFAULT_OUTPUT_DIR = "results"


class ConfigException(ValueError):
    """When a sweep configuration is malformed"""


@dataclass(frozen=True)
class DetectorSpec:
    """A registered detector name with its hyperparameters"""

    name: DetectorName
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """JSON form"""
        return {"name": self.name.value, "params": dict(self.params)}


def _check_keys(data: Any, allowed: frozenset[str], where: str) -> dict[str, Any]:
    if not isinstance(data, dict):
        raise ConfigException(f"{where} must be a JSON object")
    unknown = set(data) - allowed
    if unknown:
        raise ConfigException(f"Unknown keys in {where}: {sorted(unknown)}")
    return data


def _positive_ints(values: Any, key: str) -> tuple[int, ...]:
    if not isinstance(values, list) or not values:
        raise ConfigException(f"{key} must be a nonempty list")
    if any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in values):
        raise ConfigException(f"{key} must hold positive integers, got {values}")
    if len(set(values)) != len(values):
        raise ConfigException(f"{key} has duplicates: {values}")
    return tuple(values)


def _parse_seeds(value: Any) -> tuple[int, ...]:
    if isinstance(value, dict):
        _check_keys(value, _SEED_RANGE_KEYS, "seeds")
        base = value.get("base", 0)
        count = value.get("count")
        if not isinstance(base, int) or not isinstance(count, int) or count < 1:
            raise ConfigException(f"seeds range needs an integer base and a positive count, got {value}")
        return tuple(range(base, base + count))
    if not isinstance(value, list) or not value:
        raise ConfigException("seeds must be a nonempty list or a {base, count} object")
    if any(isinstance(v, bool) or not isinstance(v, int) for v in value):
        raise ConfigException(f"seeds must be integers, got {value}")
    if len(set(value)) != len(value):
        raise ConfigException(f"seeds has duplicates: {value}")
    return tuple(value)


def _parse_detectors(value: Any) -> tuple[DetectorSpec, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigException("detectors must be a nonempty list")
    specs = []
    for entry in value:
        entry = {"name": entry} if isinstance(entry, str) else entry
        _check_keys(entry, _DETECTOR_KEYS, "detector entry")
        try:
            name = DetectorName(entry.get("name"))
        except ValueError as error:
            raise ConfigException(f"Unknown detector {entry.get('name')!r}") from error
        params = entry.get("params", {})
        try:
            get_detector(name, params)
        except (DetectorException, TypeError) as error:
            raise ConfigException(f"Invalid parameters for {name.value}: {error}") from error
        specs.append(DetectorSpec(name, dict(params)))
    if len({spec.name for spec in specs}) != len(specs):
        raise ConfigException("Each detector may appear once")
    return tuple(specs)


def _parse_dgp(value: Any, scenario: Scenario) -> DgpSpec:
    data = dict(_check_keys(value, _DGP_KEYS, "dgp"))
    delay = data.pop("coupling_delay", None)
    half_width = data.pop("coupling_half_width", None)
    if scenario is Scenario.INDEPENDENT and (delay is not None or half_width is not None or data.get("coupling_taps")):
        raise ConfigException("Coupling parameters given for the independent scenario")
    if scenario is Scenario.COUPLED and data.get("coupling_taps") and (delay is not None or half_width is not None):
        raise ConfigException("Give either coupling_taps or coupling_delay/coupling_half_width, not both")
    try:
        if scenario is Scenario.COUPLED and not data.get("coupling_taps"):
            data["coupling_taps"] = tuple(
                design_delay_fir(
                    DEFAULT_COUPLING_DELAY if delay is None else delay,
                    DEFAULT_COUPLING_HALF_WIDTH if half_width is None else half_width,
                )
            )
        return DgpSpec(**data)
    except (TypeError, ValueError) as error:
        raise ConfigException(f"Invalid dgp: {error}") from error


@dataclass(frozen=True)
class SweepConfig:
    """Grid of (detector, Q, k, seed) cells over one data generating process"""

    dgp: DgpSpec
    scenario: Scenario = Scenario.COUPLED
    detectors: tuple[DetectorSpec, ...] = (DetectorSpec(DetectorName.GC_VAR),)
    q_values: tuple[int, ...] = (5,)
    k_values: tuple[int, ...] = (1,)
    seeds: tuple[int, ...] = (0,)
    anti_alias: bool = False
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    workers: Optional[int] = None
    timing: bool = False

    def __post_init__(self) -> None:
        if not (self.detectors and self.q_values and self.k_values and self.seeds):
            raise ConfigException("Detector, Q, k and seed lists must be nonempty")
        if (self.dgp.scenario is Scenario.COUPLED) != (Scenario(self.scenario) is Scenario.COUPLED):
            raise ConfigException(f"DGP does not match the {Scenario(self.scenario).value} scenario")
        if self.workers is not None and self.workers < 1:
            raise ConfigException(f"workers must be at least 1, got {self.workers}")

    @property
    def base_seed(self) -> int:
        """Config-level seed mixed into every cell seed"""
        return self.dgp.seed

    @property
    def cell_count(self) -> int:
        """Number of grid cells"""
        return len(self.detectors) * len(self.q_values) * len(self.k_values) * len(self.seeds)

    @classmethod
    def from_dict(cls, data: Any) -> SweepConfig:
        """Validate a parsed JSON document"""
        _check_keys(data, _TOP_LEVEL_KEYS, "config")
        version = data.get("version")
        if type(version) is not int or version != CONFIG_VERSION:
            raise ConfigException(f"Unsupported config version {version!r}, expected {CONFIG_VERSION}")
        try:
            scenario = Scenario(data.get("scenario", Scenario.COUPLED.value))
        except ValueError as error:
            raise ConfigException(f"Unknown scenario {data.get('scenario')!r}") from error

        workers = data.get("workers")
        if workers is not None and (isinstance(workers, bool) or not isinstance(workers, int)):
            raise ConfigException(f"workers must be an integer, got {workers!r}")
        for flag in ("anti_alias", "timing"):
            if not isinstance(data.get(flag, False), bool):
                raise ConfigException(f"{flag} must be a boolean")

        return cls(
            dgp=_parse_dgp(data.get("dgp", {}), scenario),
            scenario=scenario,
            detectors=_parse_detectors(data.get("detectors", [DetectorName.GC_VAR.value])),
            q_values=_positive_ints(data.get("q_values", [5]), "q_values"),
            k_values=_positive_ints(data.get("k_values", [1]), "k_values"),
            seeds=_parse_seeds(data.get("seeds", [0])),
            anti_alias=data.get("anti_alias", False),
            output_dir=Path(data.get("output_dir", DEFAULT_OUTPUT_DIR)),
            workers=workers,
            timing=data.get("timing", False),
        )

    def to_dict(self) -> dict[str, Any]:
        """JSON form; loading it back gives an equal config"""
        data: dict[str, Any] = {
            "version": CONFIG_VERSION,
            "scenario": Scenario(self.scenario).value,
            "dgp": self.dgp.to_dict(),
            "detectors": [spec.to_dict() for spec in self.detectors],
            "q_values": list(self.q_values),
            "k_values": list(self.k_values),
            "seeds": list(self.seeds),
            "anti_alias": self.anti_alias,
            "output_dir": str(self.output_dir),
            "timing": self.timing,
        }
        if self.workers is not None:
            data["workers"] = self.workers
        return data

    @classmethod
    def load(cls, path: Path | str) -> SweepConfig:
        """Read a JSON config file"""
        try:
            with open(path, encoding="utf-8") as handle:
                data = json.load(handle)
        except json.JSONDecodeError as error:
            raise ConfigException(f"{path} is not valid JSON: {error}") from error
        _LOGGER.debug("Loaded config %s", path)
        return cls.from_dict(data)

    def dump(self, path: Path | str) -> None:
        """Write the config as indented JSON"""
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(self.to_dict(), handle, indent=2)
            handle.write("\n")

    def with_overrides(
        self,
        seed: Optional[int] = None,
        output_dir: Optional[Path | str] = None,
        workers: Optional[int] = None,
        timing: Optional[bool] = None,
    ) -> SweepConfig:
        """Apply command-line values; None keeps the config value"""
        changes: dict[str, Any] = {}
        if seed is not None:
            changes["dgp"] = self.dgp.with_seed(seed)
        if output_dir is not None:
            changes["output_dir"] = Path(output_dir)
        if workers is not None:
            changes["workers"] = workers
        if timing:
            changes["timing"] = True
        return replace(self, **changes)


def default_config(scenario: Scenario = Scenario.COUPLED, seed: int = DEFAULT_SEED, **kwargs: Any) -> SweepConfig:
    """Config on the default process of the scenario"""
    return SweepConfig(dgp=DgpSpec.for_scenario(Scenario(scenario), seed=seed), scenario=Scenario(scenario), **kwargs)


def resolve_workers(cli_workers: Optional[int], config: SweepConfig) -> int:
    """Worker count by precedence: flag, environment, config, default"""
    if cli_workers is not None:
        workers = cli_workers
    elif os.environ.get(ENV_WORKERS):
        try:
            workers = int(os.environ[ENV_WORKERS])
        except ValueError as error:
            raise ConfigException(f"{ENV_WORKERS} must be an integer, got {os.environ[ENV_WORKERS]!r}") from error
    elif config.workers is not None:
        workers = config.workers
    else:
        workers = DEFAULT_WORKERS
    if workers < 1:
        raise ConfigException(f"Worker count must be at least 1, got {workers}")
    return workers
