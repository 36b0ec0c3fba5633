"""Constants for ccdbench module"""
from enum import Enum, unique
from typing import Final

CONFIG_VERSION: Final[int] = 1
ENV_WORKERS: Final[str] = "CCDBENCH_WORKERS"

# Data generating process
DEFAULT_T: Final[int] = 20000
DEFAULT_BURN_IN: Final[int] = 1000
DEFAULT_SOURCE_AR: Final[tuple[float, ...]] = (1.6, -0.64)
DEFAULT_NOISE_AR: Final[tuple[float, ...]] = (0.9,)
DEFAULT_INNOVATION_STD: Final[float] = 1.0
DEFAULT_SNR_RATIO: Final[float] = 0.8
DEFAULT_COUPLING_DELAY: Final[int] = 50
DEFAULT_COUPLING_HALF_WIDTH: Final[int] = 2
DEFAULT_SEED: Final[int] = 20240101
TAP_TOLERANCE: Final[float] = 1e-12
LOGISTIC_RX: Final[float] = 3.8
LOGISTIC_RY: Final[float] = 3.5

# Numerics
RANK_TOLERANCE: Final[float] = 1e-10
CF_MAX_ITERATIONS: Final[int] = 10000
CF_EPSILON: Final[float] = 1e-15
QUANTILE_MAX_ITERATIONS: Final[int] = 500
QUANTILE_TOLERANCE: Final[float] = 1e-14
QUANTILE_RESIDUAL_TOLERANCE: Final[float] = 1e-9

# Detectors
DEFAULT_THETA: Final[float] = 0.05
DEFAULT_ALPHA: Final[float] = 0.001
DEFAULT_TE_BINS: Final[int] = 2
DEFAULT_TE_SURROGATES: Final[int] = 19
DEFAULT_CCM_TAU: Final[int] = 1
DEFAULT_CCM_MARGIN: Final[float] = 0.1
DEFAULT_CCM_MIN_SKILL: Final[float] = 0.5
DEFAULT_CCM_PREDICTIONS: Final[int] = 500
DEFAULT_CCM_MAX_LIBRARY: Final[int] = 1000
DEFAULT_CCM_LIBRARY_COUNT: Final[int] = 6
DEFAULT_RIDGE: Final[float] = 1e-6
DEFAULT_EDGE_THRESHOLD: Final[float] = 0.1
DEFAULT_FNN_RTOL: Final[float] = 15.0
DEFAULT_FNN_ATOL: Final[float] = 2.0
FNN_SELECT_FRACTION: Final[float] = 0.01

# Bench
CSV_COLUMNS: Final[tuple[str, ...]] = (
    "detector",
    "Q",
    "k",
    "seed",
    "statistic",
    "threshold",
    "decision",
    "tp",
    "fp",
    "fn",
    "precision",
    "recall",
    "f1",
    "wall_time_ms",
    "skipped",
)
FLOAT_FORMAT: Final[str] = "%.9g"
DEFAULT_WORKERS: Final[int] = 1
DETECTION_WINDOW_DELAY: Final[int] = 50


@unique
class DetectorName(str, Enum):
    """Registered detector names"""

    GC_VAR = "gc_var"
    GC_F = "gc_f"
    TE = "te"
    CCM = "ccm"
    VAR_GRAPH = "var_graph"


@unique
class Scenario(str, Enum):
    """Simulation scenario enum"""

    COUPLED = "coupled"
    INDEPENDENT = "independent"


@unique
class Criterion(str, Enum):
    """Information criterion enum"""

    AIC = "aic"
    BIC = "bic"
    HQC = "hqc"


@unique
class Metric(str, Enum):
    """Heatmap metric enum"""

    F1 = "f1"
    STATISTIC = "statistic"
    DECISION_RATE = "decision_rate"


@unique
class Preset(str, Enum):
    """Figure replication preset enum"""

    FIG_VARY_Q = "fig_varyQ"
    FIG_VARY_K = "fig_varyK"
    FIG_INDEP_GRID = "fig_indep_grid"
    FIG_COUPLED_GRID = "fig_coupled_grid"


@unique
class OutputFormat(str, Enum):
    """Result output format enum"""

    CSV = "csv"
    JSON = "json"


class DiagnosticKey:
    """Constants for detector diagnostics keys"""

    RSS_FULL: Final[str] = "rss_full"
    RSS_RESTRICTED: Final[str] = "rss_restricted"
    N_EFFECTIVE: Final[str] = "n_effective"
    DOF1: Final[str] = "dof1"
    DOF2: Final[str] = "dof2"
    P_VALUE: Final[str] = "p_value"
    DEGENERATE: Final[str] = "degenerate"
    SURROGATE_QUANTILE: Final[str] = "surrogate_quantile"
    SURROGATE_MEAN: Final[str] = "surrogate_mean"
    H_CONDITIONAL: Final[str] = "h_conditional"
    SKILL_MIN_LIBRARY: Final[str] = "skill_min_library"
    SKILL_MAX_LIBRARY: Final[str] = "skill_max_library"
    REVERSE_SKILL: Final[str] = "reverse_skill"
    EDGE_COUNT: Final[str] = "edge_count"
    WINDOW_TP: Final[str] = "window_tp"
    WINDOW_FP: Final[str] = "window_fp"
    WINDOW_FN: Final[str] = "window_fn"


FIG_VARY_Q_VALUES: Final[tuple[int, ...]] = (1, 2, 5, 10, 20, 30, 40, 50, 60, 80, 100)
FIG_VARY_K_VALUES: Final[tuple[int, ...]] = (1, 2, 5, 10, 15, 20, 30, 40, 50, 60, 80)
FIG_VARY_K_Q: Final[int] = 5
FIG_GRID_Q_VALUES: Final[tuple[int, ...]] = (1, 2, 5, 10, 25, 50, 80)
FIG_GRID_K_VALUES: Final[tuple[int, ...]] = (1, 2, 5, 10, 20, 40, 80)
FIG_DEFAULT_SEED_COUNT: Final[int] = 20
FIG_GRID_SEED_COUNT: Final[int] = 10
