"""Fixed-interval metric series and the small amount of plumbing around them."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InsufficientDataError, RangeError

DEFAULT_INTERVAL_S = 120.0
BOOTSTRAP_SAMPLES = 15


class MetricKind(str, enum.Enum):
    DELIVERY_RATE = "delivery_rate"
    CONTROL_OVERHEAD = "control_overhead"


@dataclass(frozen=True, eq=False)
class MetricSeries:
    """Ordered samples of one network metric, one per observation window.

    ``start_index_offset`` records how many leading samples were discarded
    before this series was built; all indices used by the detectors are
    relative to the first retained sample.
    """

    metric_kind: MetricKind
    values: np.ndarray
    sample_interval: float = DEFAULT_INTERVAL_S
    start_index_offset: int = 0

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if self.metric_kind is MetricKind.DELIVERY_RATE and arr.size and (
            arr.min() < 0.0 or arr.max() > 1.0
        ):
            raise ValueError("delivery rate samples must lie in [0, 1]")
        if self.metric_kind is MetricKind.CONTROL_OVERHEAD and arr.size and arr.min() < 0.0:
            raise ValueError("control overhead samples must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "metric_kind", MetricKind(self.metric_kind))
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricSeries):
            return NotImplemented
        return (
            self.metric_kind == other.metric_kind
            and self.sample_interval == other.sample_interval
            and self.start_index_offset == other.start_index_offset
            and np.array_equal(self.values, other.values)
        )

    def slice(self, start: int, stop: int) -> "MetricSeries":
        return slice_series(self, start, stop)


@dataclass(frozen=True)
class WindowSpec:
    """Training start, monitoring start and monitoring horizon."""

    train_start: int
    monitor_start: int
    monitor_length: int

    def __post_init__(self):
        if not self.train_start < self.monitor_start:
            raise ValueError("train_start must precede monitor_start")
        if self.monitor_length <= 0:
            raise ValueError("monitor_length must be positive")

    def is_complete(self, n: int) -> bool:
        return self.monitor_start + self.monitor_length <= n


def _as_array(series) -> np.ndarray:
    if isinstance(series, MetricSeries):
        return series.values
    return np.asarray(series, dtype=float)


def slice_series(series: MetricSeries, start: int, stop: int) -> MetricSeries:
    n = len(series)
    if not (0 <= start < stop <= n):
        raise RangeError(f"slice [{start}, {stop}) out of range for length {n}")
    return MetricSeries(
        series.metric_kind,
        series.values[start:stop],
        series.sample_interval,
        series.start_index_offset + start,
    )


def discard_bootstrap(series: MetricSeries, n: int = BOOTSTRAP_SAMPLES) -> MetricSeries:
    """Drop the first ``n`` samples (network bootstrap) at ingestion time."""
    if n == 0:
        return series
    return slice_series(series, n, len(series))


def sample_mean(series) -> float:
    x = _as_array(series)
    if x.size == 0:
        raise InsufficientDataError("empty series")
    return float(x.mean())


def sample_autocovariance(series, lag: int) -> float:
    """Biased (divide-by-N) sample autocovariance at ``lag``."""
    x = _as_array(series)
    n = x.size
    if lag < 0 or lag >= n:
        raise RangeError(f"lag {lag} out of range for length {n}")
    d = x - x.mean()
    return float(np.dot(d[: n - lag], d[lag:]) / n)


def autocovariances(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased autocovariances for lags 0..max_lag in one pass."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if max_lag >= n:
        raise RangeError(f"max_lag {max_lag} out of range for length {n}")
    d = x - x.mean()
    return np.array([np.dot(d[: n - s], d[s:]) for s in range(max_lag + 1)]) / n


def write_csv(series: MetricSeries, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "value"])
        for i, v in enumerate(series.values):
            w.writerow([i, repr(float(v))])


def read_csv(path, metric_kind: MetricKind, sample_interval: float = DEFAULT_INTERVAL_S) -> MetricSeries:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "value"]:
            raise ValueError(f"{path}: expected header 'index,value', got {header}")
        values = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: malformed row {row}")
            idx, val = int(row[0]), float(row[1])
            if idx != len(values):
                raise ValueError(f"{path}:{lineno}: non-contiguous index {idx}")
            values.append(val)
    return MetricSeries(metric_kind, np.array(values), sample_interval)
