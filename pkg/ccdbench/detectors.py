"""Detector registry for ccdbench module."""
from __future__ import annotations

import logging
from typing import Any, Optional

from .base_detector import BaseDetector, DetectorException
from .const import DetectorName
from .cross_mapping import CcmDetector
from .granger import GcFTestDetector, GcVarianceReductionDetector
from .transfer_entropy import TransferEntropyDetector
from .var_graph import VarGraphDetector

_LOGGER = logging.getLogger(__name__)

_MAP_DETECTOR_NAMES_TO_CLASS: dict[str, type[BaseDetector]] = {
    DetectorName.GC_VAR.value: GcVarianceReductionDetector,
    DetectorName.GC_F.value: GcFTestDetector,
    DetectorName.TE.value: TransferEntropyDetector,
    DetectorName.CCM.value: CcmDetector,
    DetectorName.VAR_GRAPH.value: VarGraphDetector,
}


def registered_detectors() -> list[str]:
    """Names accepted by get_detector"""
    return list(_MAP_DETECTOR_NAMES_TO_CLASS)


def get_detector(name: str, params: Optional[dict[str, Any]] = None) -> BaseDetector:
    """Instantiate a registered detector with its hyperparameters"""
    detector_class = _MAP_DETECTOR_NAMES_TO_CLASS.get(str(getattr(name, "value", name)), None)
    if detector_class is None:
        raise DetectorException(f"Unsupported detector {name}, expected one of {registered_detectors()}")
    return detector_class(**(params or {}))
