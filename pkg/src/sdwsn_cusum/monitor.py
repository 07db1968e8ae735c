"""Five-step detection loop: offline pretest, online monitoring, direction, restart."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from . import online
from .critical import CriticalValueTable, default_table
from .errors import ConfigError, InsufficientDataError
from .offline import MIN_OFFLINE_LENGTH, LrvConfig, offline_test
from .series import MetricKind, MetricSeries
from .trend import MacdConfig, macd_line, trend_indicator

MAGNITUDE_WINDOW = 20
_INDICATORS = {"line": macd_line, "histogram": trend_indicator}


class Direction(str, enum.Enum):
    UP = "up"
    DOWN = "down"


class AttackHint(str, enum.Enum):
    FDFF_LIKE = "fdff_like"
    FNI_LIKE = "fni_like"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ChangeEvent:
    cp_index: int
    direction: Direction
    metric_kind: MetricKind
    detection_delay: int
    magnitude: float


@dataclass(frozen=True)
class MonitorConfig:
    K: int = 100
    alpha: float = 0.95
    gamma: float = 0.0
    d: int = 10
    min_training: int = online.MIN_TRAINING
    macd: MacdConfig = MacdConfig()
    lrv: LrvConfig = LrvConfig()
    # first monitoring start; defaults to min_training
    start: Optional[int] = None
    # "line" labels by the sign of EMA_short - EMA_long, "histogram" by the
    # MACD histogram; the histogram flips sign when detection comes late
    direction_indicator: str = "line"

    def __post_init__(self):
        if self.d < 0:
            raise ConfigError("d must be >= 0")
        if self.K <= 0:
            raise ConfigError("K must be positive")
        if self.start is not None and self.start < self.min_training:
            raise ConfigError("start must leave at least min_training samples")
        if self.direction_indicator not in _INDICATORS:
            raise ConfigError(f"direction_indicator must be one of {sorted(_INDICATORS)}")

    def online_config(self) -> online.OnlineConfig:
        return online.OnlineConfig(
            gamma=self.gamma, alpha=self.alpha, K=self.K, lrv=self.lrv, min_training=self.min_training
        )


@dataclass(frozen=True)
class WindowRecord:
    """One pass through steps 2 and 3, kept for diagnostics."""

    train_start: int
    monitor_start: int
    state: online.OnlineMonitorState


def last_offline_change(x: np.ndarray, alpha: float, lrv: LrvConfig, table: CriticalValueTable) -> int:
    """Start index of the last homogeneous segment of ``x``.

    The offline test is applied to the whole history, then repeatedly to the
    part after each detected change, until a suffix shows no change.
    """
    start = 0
    while x.size - start >= MIN_OFFLINE_LENGTH:
        res = offline_test(x[start:], lrv, alpha, table)
        if not res.reject_h0:
            break
        start += res.cp_index
    return start


def _magnitude(x: np.ndarray, at: int) -> float:
    w = min(MAGNITUDE_WINDOW, at, x.size - at)
    if w <= 0:
        return 0.0
    return float(x[at : at + w].mean() - x[at - w : at].mean())


def run_monitor(
    series: MetricSeries,
    cfg: MonitorConfig = MonitorConfig(),
    critical_values: Optional[CriticalValueTable] = None,
    windows: Optional[list] = None,
) -> list[ChangeEvent]:
    """Run the detection loop over a whole series.

    Monitoring starts at ``cfg.start`` (or ``cfg.min_training``). Each
    window trains on the samples since the last offline change point; when
    that leaves fewer than ``min_training`` samples, monitoring is pushed
    forward until enough change-free samples have accumulated. A detection
    restarts monitoring ``d`` samples later; a quiet window is followed by
    the next adjacent one.
    """
    x = series.values
    n = x.size
    table = critical_values or default_table()
    ocfg = cfg.online_config()
    m_s = cfg.start if cfg.start is not None else cfg.min_training
    if n < cfg.min_training + 1 or m_s >= n:
        raise InsufficientDataError(
            f"series of length {n} cannot hold {cfg.min_training} training samples and a monitored one"
        )
    events: list[ChangeEvent] = []
    while m_s < n:
        train_start = last_offline_change(x[:m_s], cfg.alpha, cfg.lrv, table)
        if m_s - train_start < cfg.min_training:
            m_s = train_start + cfg.min_training
            continue
        state = online.train(x[train_start:m_s], ocfg, table)
        stop = min(m_s + cfg.K, n)
        state, _ = online.monitor(state, x[m_s:stop], ocfg)
        if windows is not None:
            windows.append(WindowRecord(train_start, m_s, state))
        if not state.stopped:
            m_s = stop
            continue
        cp = m_s + state.stopped_at - 1
        if cp >= cfg.macd.long_span:
            up = _INDICATORS[cfg.direction_indicator](x, cp, cfg.macd) > 0
        else:
            up = state.detector_value > 0
        events.append(
            ChangeEvent(
                cp_index=cp,
                direction=Direction.UP if up else Direction.DOWN,
                metric_kind=series.metric_kind,
                detection_delay=state.stopped_at,
                magnitude=_magnitude(x, cp),
            )
        )
        m_s = cp + max(cfg.d, 1)
    return events


def classify_attack_hint(events_by_metric: Mapping[MetricKind, Sequence[ChangeEvent]]) -> AttackHint:
    """Guess the attack type from which metric changed first."""
    firsts = {
        MetricKind(kind): min(e.cp_index for e in evs)
        for kind, evs in events_by_metric.items()
        if evs
    }
    if not firsts:
        return AttackHint.UNKNOWN
    earliest = min(firsts.values())
    leaders = [k for k, v in firsts.items() if v == earliest]
    if len(leaders) != 1:
        return AttackHint.UNKNOWN
    if leaders[0] is MetricKind.CONTROL_OVERHEAD:
        return AttackHint.FDFF_LIKE
    return AttackHint.FNI_LIKE


EVENT_HEADER = ["metric", "cp_index", "direction", "delay", "magnitude"]


def write_events(events: Sequence[ChangeEvent], path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EVENT_HEADER)
        for e in events:
            w.writerow([e.metric_kind.value, e.cp_index, e.direction.value, e.detection_delay, repr(e.magnitude)])


def read_events(path) -> list[ChangeEvent]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EVENT_HEADER:
            raise ValueError(f"{path}: bad event-log header {reader.fieldnames}")
        return [
            ChangeEvent(
                cp_index=int(r["cp_index"]),
                direction=Direction(r["direction"]),
                metric_kind=MetricKind(r["metric"]),
                detection_delay=int(r["delay"]),
                magnitude=float(r["magnitude"]),
            )
            for r in reader
        ]
