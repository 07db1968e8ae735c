"""Offline and online CUSUM change-point detection of DDoS attacks in software-defined WSNs."""

from .critical import CriticalValueTable, default_table, offline_critical_value, online_critical_value
from .errors import (
    ConfigError,
    CusumError,
    DegenerateVarianceError,
    InsufficientDataError,
    RangeError,
    UsageError,
)
from .evaluation import EvalCell, FalseNegative, FalsePositive, TruePositive, aggregate, classify_replication, mad
from .monitor import AttackHint, ChangeEvent, Direction, MonitorConfig, classify_attack_hint, run_monitor
from .offline import LrvConfig, OfflineTestResult, bartlett_lrv, cusum_path, offline_statistic, offline_test
from .online import OnlineConfig, OnlineMonitorState, train, weight
from .series import MetricKind, MetricSeries, WindowSpec, discard_bootstrap, slice_series
from .sim import AttackKind, ScenarioConfig, SimTrace, attack_impact, simulate
from .trend import MacdConfig, ema, macd_histogram, macd_line, trend_indicator

__version__ = "0.1.0"
