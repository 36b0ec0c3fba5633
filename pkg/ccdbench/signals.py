"""Simulated signals and their ground truth for ccdbench module."""
from __future__ import annotations

import logging
import math
import numbers
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import signal as sps

from .const import (
    DEFAULT_BURN_IN,
    DEFAULT_COUPLING_DELAY,
    DEFAULT_COUPLING_HALF_WIDTH,
    DEFAULT_INNOVATION_STD,
    DEFAULT_NOISE_AR,
    DEFAULT_SEED,
    DEFAULT_SNR_RATIO,
    DEFAULT_SOURCE_AR,
    DEFAULT_T,
    LOGISTIC_RX,
    LOGISTIC_RY,
    TAP_TOLERANCE,
    Scenario,
)
from .graphs import SummaryGraph, WindowGraph, summarize

_LOGGER = logging.getLogger(__name__)

TAU_PREFIX = "# tau="


class SignalException(ValueError):
    """When a signal or a data generating process is invalid"""


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox generator for a 64-bit seed"""
    return np.random.Generator(np.random.Philox(int(seed) % 2**64))


def ar_is_stable(coeffs: Sequence[float]) -> bool:
    """Check all characteristic roots lie strictly inside the unit circle"""
    if len(coeffs) == 0:
        return True
    roots = np.roots(np.concatenate(([1.0], -np.asarray(coeffs, dtype=float))))
    return bool(np.all(np.abs(roots) < 1.0))


@dataclass(frozen=True)
class SignalSet:
    """D time series of length T sampled every `sampling_period`"""

    data: np.ndarray
    sampling_period: float = 1.0
    labels: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise SignalException(f"Signal data must be a non-empty D x T matrix, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise SignalException("Signal data has non-finite entries")
        if not self.sampling_period > 0:
            raise SignalException(f"Sampling period must be positive, got {self.sampling_period}")
        labels = tuple(self.labels) or tuple(f"x{i}" for i in range(data.shape[0]))
        if len(labels) != data.shape[0]:
            raise SignalException(f"{len(labels)} labels for {data.shape[0]} series")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", labels)

    @property
    def d(self) -> int:
        """Number of series"""
        return self.data.shape[0]

    @property
    def t(self) -> int:
        """Number of time steps"""
        return self.data.shape[1]

    def series(self, index: int) -> np.ndarray:
        """Get one series"""
        return self.data[index]

    def to_csv(self, path: Path | str) -> None:
        """Write the headerful CSV data-file format"""
        frame = pd.DataFrame(self.data.T, columns=list(self.labels))
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(f"{TAU_PREFIX}{self.sampling_period!r}\n")
            frame.to_csv(handle, index=False, float_format="%.17g", lineterminator="\n")

    @classmethod
    def from_csv(cls, path: Path | str) -> SignalSet:
        """Read the headerful CSV data-file format"""
        sampling_period = 1.0
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if line.startswith(TAU_PREFIX):
                    try:
                        sampling_period = float(line[len(TAU_PREFIX):].strip())
                    except ValueError as error:
                        raise SignalException(f"Invalid sampling period line: {line.strip()}") from error
                    break
                if not line.startswith("#"):
                    break
        frame = pd.read_csv(path, comment="#")
        return cls(frame.to_numpy(dtype=float).T, sampling_period, tuple(str(c) for c in frame.columns))


@dataclass(frozen=True)
class GroundTruth:
    """True window and summary graphs of a simulated signal set"""

    summary: SummaryGraph
    window: WindowGraph
    effective_delay: float = 0.0

    def decimated(self, k: int) -> GroundTruth:
        """Express the true lags in samples of the k-fold decimated series.

        A base lag L lands between decimated lags floor(L/k) and ceil(L/k);
        both are marked, and a zero lag becomes an instantaneous edge.
        """
        if k == 1:
            return self
        edges = self.window.lagged_edges()
        lagged: set[tuple[int, int, int]] = set()
        instantaneous: set[tuple[int, int]] = set()
        for source, target, lag in edges:
            for new_lag in {math.floor(lag / k), math.ceil(lag / k)}:
                if new_lag == 0:
                    if source != target:
                        instantaneous.add((source, target))
                else:
                    lagged.add((source, target, new_lag))
        q_max = max([lag for _, _, lag in lagged], default=1)
        window = WindowGraph.from_edges(
            self.window.d,
            q_max,
            sorted(lagged),
            sorted(instantaneous) if instantaneous else None,
        )
        return GroundTruth(self.summary, window, self.effective_delay / k)


def _is_integer(value: Any) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _is_real(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)


def design_delay_fir(delay: int, half_width: int) -> np.ndarray:
    """Unit-DC-gain symmetric FIR centred on `delay` (triangular taps)"""
    if not (_is_integer(delay) and _is_integer(half_width)):
        raise SignalException(f"Delay and half width must be integers, got {delay!r}, {half_width!r}")
    if not delay > half_width >= 0:
        raise SignalException(f"Need delay > half_width >= 0, got delay={delay}, half_width={half_width}")
    taps = np.zeros(delay + half_width + 1)
    weights = sps.windows.triang(2 * half_width + 1)
    taps[delay - half_width:] = weights / weights.sum()
    return taps


def group_delay(taps: Sequence[float]) -> float:
    """Group delay at DC: sum(n h[n]) / sum(h[n])"""
    values = np.asarray(taps, dtype=float)
    total = values.sum()
    if total == 0.0:
        raise SignalException("Group delay undefined for zero DC gain")
    return float(np.arange(values.size) @ values / total)


def fir_filter(taps: Sequence[float], x: Sequence[float]) -> np.ndarray:
    """Causal FIR filtering with zero history"""
    if len(taps) == 0:
        raise SignalException("FIR filter needs at least one tap")
    return sps.lfilter(np.asarray(taps, dtype=float), [1.0], np.asarray(x, dtype=float))


def gen_ar(
    coeffs: Sequence[float],
    innovation_std: float,
    t: int,
    burn_in: int,
    seed: int,
) -> np.ndarray:
    """Realize an AR process x_t = sum(a_i x_{t-i}) + e_t"""
    if not ar_is_stable(coeffs):
        raise SignalException(f"AR coefficients {list(coeffs)} are not stable")
    if innovation_std <= 0:
        raise SignalException(f"Innovation std must be positive, got {innovation_std}")
    if t < 1 or burn_in < 0:
        raise SignalException(f"Invalid length T={t}, burn_in={burn_in}")
    innovations = make_rng(seed).normal(0.0, innovation_std, t + burn_in)
    denominator = np.concatenate(([1.0], -np.asarray(coeffs, dtype=float)))
    return sps.lfilter([1.0], denominator, innovations)[burn_in:]


def snr_scales(signal_part: np.ndarray, noise_part: np.ndarray, ratio: float) -> tuple[float, float]:
    """Get the (signal, noise) scales of a power-preserving SNR mix.

    The scaled components have variances ratio * Var(signal) and
    (1 - ratio) * Var(signal), measured on these realizations.
    """
    if not 0.0 < ratio <= 1.0:
        raise SignalException(f"SNR ratio must lie in (0, 1], got {ratio}")
    if signal_part.shape != noise_part.shape:
        raise SignalException("Signal and noise parts differ in length")
    if ratio == 1.0:
        return 1.0, 0.0
    noise_variance = float(np.var(noise_part))
    if noise_variance <= 0.0:
        raise SignalException("Noise part has zero variance")
    signal_variance = float(np.var(signal_part))
    return math.sqrt(ratio), math.sqrt((1.0 - ratio) * signal_variance / noise_variance)


def mix_snr(signal_part: Sequence[float], noise_part: Sequence[float], ratio: float) -> np.ndarray:
    """Mix signal and noise at a variance fraction `ratio`"""
    signal_values = np.asarray(signal_part, dtype=float)
    noise_values = np.asarray(noise_part, dtype=float)
    signal_scale, noise_scale = snr_scales(signal_values, noise_values, ratio)
    return signal_scale * signal_values + noise_scale * noise_values


@dataclass(frozen=True)
class DgpSpec:
    """Recipe for the bivariate source / delayed-coupling process"""

    source_ar: tuple[float, ...] = DEFAULT_SOURCE_AR
    innovation_std: float = DEFAULT_INNOVATION_STD
    coupling_taps: tuple[float, ...] = ()
    noise_ar: tuple[float, ...] = DEFAULT_NOISE_AR
    snr_ratio: float = DEFAULT_SNR_RATIO
    n_samples: int = DEFAULT_T
    burn_in: int = DEFAULT_BURN_IN
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        for name in ("n_samples", "burn_in", "seed"):
            if not _is_integer(getattr(self, name)):
                raise SignalException(f"{name} must be an integer, got {getattr(self, name)!r}")
        for name in ("innovation_std", "snr_ratio"):
            if not _is_real(getattr(self, name)):
                raise SignalException(f"{name} must be a real number, got {getattr(self, name)!r}")
        object.__setattr__(self, "source_ar", tuple(float(c) for c in self.source_ar))
        object.__setattr__(self, "coupling_taps", tuple(float(c) for c in self.coupling_taps))
        object.__setattr__(self, "noise_ar", tuple(float(c) for c in self.noise_ar))
        if not ar_is_stable(self.source_ar):
            raise SignalException(f"Source AR {self.source_ar} is not stable")
        if not ar_is_stable(self.noise_ar):
            raise SignalException(f"Noise AR {self.noise_ar} is not stable")
        if not 0.0 < self.snr_ratio <= 1.0:
            raise SignalException(f"SNR ratio must lie in (0, 1], got {self.snr_ratio}")
        if self.innovation_std <= 0:
            raise SignalException(f"Innovation std must be positive, got {self.innovation_std}")
        if self.n_samples < 1 or self.burn_in < 0:
            raise SignalException(f"Invalid length n_samples={self.n_samples}, burn_in={self.burn_in}")

    @property
    def scenario(self) -> Scenario:
        """Coupled when there are coupling taps"""
        return Scenario.COUPLED if self.coupling_taps else Scenario.INDEPENDENT

    @classmethod
    def for_scenario(
        cls,
        scenario: Scenario,
        delay: int = DEFAULT_COUPLING_DELAY,
        half_width: int = DEFAULT_COUPLING_HALF_WIDTH,
        **overrides: Any,
    ) -> DgpSpec:
        """Default recipe for the coupled or the independent scenario"""
        taps: tuple[float, ...] = ()
        if Scenario(scenario) is Scenario.COUPLED:
            taps = tuple(design_delay_fir(delay, half_width))
        return cls(coupling_taps=taps, **overrides)

    def with_seed(self, seed: int) -> DgpSpec:
        """Same recipe, another seed"""
        return DgpSpec(**{**asdict(self), "seed": seed})

    def to_dict(self) -> dict[str, Any]:
        """JSON form"""
        data = asdict(self)
        for key in ("source_ar", "coupling_taps", "noise_ar"):
            data[key] = list(data[key])
        return data


def _ground_truth(taps: Sequence[float]) -> GroundTruth:
    """Ground truth of the source -> target coupling"""
    lags = [lag for lag, tap in enumerate(taps) if abs(tap) > TAP_TOLERANCE]
    if not lags:
        return GroundTruth(SummaryGraph.empty(2), WindowGraph.empty(2, 1), 0.0)
    if 0 in lags:
        raise SignalException("Coupling taps must not act at lag 0")
    window = WindowGraph.from_edges(2, max(lags), [(0, 1, lag) for lag in lags])
    return GroundTruth(summarize(window), window, group_delay(taps))


def generate_pair(spec: DgpSpec) -> tuple[SignalSet, GroundTruth]:
    """Simulate x and y with the ground truth of their coupling"""
    source_seed, noise_seed = (int(s) for s in np.random.SeedSequence(spec.seed).generate_state(2, np.uint64))
    taps = np.asarray(spec.coupling_taps, dtype=float)
    noise = gen_ar(spec.noise_ar, spec.innovation_std, spec.n_samples, spec.burn_in, noise_seed)
    if taps.size:
        history = taps.size - 1
        source_full = gen_ar(spec.source_ar, spec.innovation_std, spec.n_samples + history, spec.burn_in, source_seed)
        filtered = fir_filter(taps, source_full)[history:]
        source = source_full[history:]
        target = mix_snr(filtered, noise, spec.snr_ratio)
    else:
        source = gen_ar(spec.source_ar, spec.innovation_std, spec.n_samples, spec.burn_in, source_seed)
        target = noise
    _LOGGER.debug("Generated %s pair, T=%s, seed=%s", spec.scenario.value, spec.n_samples, spec.seed)
    return SignalSet(np.vstack([source, target]), 1.0, ("x", "y")), _ground_truth(taps)


def gen_var(
    coefficients: np.ndarray,
    t: int,
    seed: int,
    innovation_std: float = DEFAULT_INNOVATION_STD,
    burn_in: int = DEFAULT_BURN_IN,
    labels: Optional[Sequence[str]] = None,
) -> tuple[SignalSet, GroundTruth]:
    """Simulate x_t = sum_q A_q x_{t-q} + e_t.

    coefficients has shape (Q, D, D); A_q[j, i] is the effect of series i at
    lag q on series j.
    """
    matrices = np.asarray(coefficients, dtype=float)
    if matrices.ndim == 2:
        matrices = matrices[np.newaxis]
    if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2]:
        raise SignalException(f"VAR coefficients must have shape (Q, D, D), got {matrices.shape}")
    q_max, d, _ = matrices.shape
    companion = np.zeros((d * q_max, d * q_max))
    companion[:d, :] = np.hstack(list(matrices))
    companion[d:, :-d] = np.eye(d * (q_max - 1))
    if np.any(np.abs(np.linalg.eigvals(companion)) >= 1.0):
        raise SignalException("VAR coefficients are not stable")

    innovations = make_rng(seed).normal(0.0, innovation_std, (t + burn_in, d))
    values = np.zeros((t + burn_in, d))
    for step in range(t + burn_in):
        values[step] = innovations[step]
        for lag in range(1, min(q_max, step) + 1):
            values[step] += matrices[lag - 1] @ values[step - lag]

    lagged = np.transpose(np.abs(matrices) > 0.0, (2, 1, 0))
    window = WindowGraph(d, q_max, lagged)
    signals = SignalSet(values[burn_in:].T, 1.0, tuple(labels) if labels else ())
    return signals, GroundTruth(summarize(window), window, 0.0)


def gen_coupled_logistic(
    t: int,
    coupling: float,
    seed: int,
    rx: float = LOGISTIC_RX,
    ry: float = LOGISTIC_RY,
    burn_in: int = 100,
) -> tuple[SignalSet, GroundTruth]:
    """Unidirectionally coupled logistic maps, x drives y"""
    rng = make_rng(seed)
    x_value, y_value = rng.uniform(0.2, 0.8, 2)
    values = np.empty((2, t + burn_in))
    for step in range(t + burn_in):
        values[0, step] = x_value
        values[1, step] = y_value
        x_value, y_value = (
            x_value * (rx - rx * x_value),
            y_value * (ry - ry * y_value - coupling * x_value),
        )
    if coupling == 0.0:
        truth = GroundTruth(SummaryGraph.empty(2), WindowGraph.empty(2, 1), 0.0)
    else:
        window = WindowGraph.from_edges(2, 1, [(0, 1, 1)])
        truth = GroundTruth(summarize(window), window, 1.0)
    return SignalSet(values[:, burn_in:], 1.0, ("x", "y")), truth
