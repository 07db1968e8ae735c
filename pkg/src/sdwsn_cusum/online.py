"""Sequential CUSUM monitoring after a change-free training period.

The detector after ``k`` monitored samples is

    Gamma(m, k) = (sum of monitored samples - k/m * sum of training samples) / omega_m

and monitoring stops at the first ``k`` with
``|Gamma(m, k)| >= c * sqrt(m) * (1 + k/m) * (k / (k + m)) ** gamma``.
``omega_m`` is the square root of the Bartlett long-run variance of the
training sample, which is the scaling under which the limit of
``sup |Gamma| / weight`` is ``sup |W(t)| / t**gamma``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .critical import CriticalValueTable, default_table, online_critical_value  # noqa: F401
from .errors import ConfigError, InsufficientDataError, UsageError
from .offline import LrvConfig, _values, bartlett_lrv

MIN_TRAINING = 250


@dataclass(frozen=True)
class OnlineConfig:
    gamma: float = 0.0
    alpha: float = 0.95
    K: int = 100
    lrv: LrvConfig = LrvConfig()
    min_training: int = MIN_TRAINING

    def __post_init__(self):
        if not 0.0 <= self.gamma < 0.5:
            raise ConfigError("gamma must lie in [0, 0.5)")
        if self.K <= 0:
            raise ConfigError("K must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.min_training < 2:
            raise ConfigError("min_training must be >= 2")


@dataclass(frozen=True)
class OnlineMonitorState:
    m: int
    train_sum: float
    omega_hat: float
    critical_value: float
    k: int = 0
    monitor_sum: float = 0.0
    detector_value: float = 0.0
    stopped_at: Optional[int] = None

    @property
    def train_mean(self) -> float:
        return self.train_sum / self.m

    @property
    def stopped(self) -> bool:
        return self.stopped_at is not None


@dataclass(frozen=True)
class Continue:
    k: int


@dataclass(frozen=True)
class Detected:
    k: int


Decision = Union[Continue, Detected]


def weight(m: int, k: int, gamma: float) -> float:
    """Boundary weight ``sqrt(m) * (1 + k/m) * (k/(k+m)) ** gamma``."""
    if m < 1 or k < 0:
        raise ConfigError("weight needs m >= 1 and k >= 0")
    if k == 0:
        return 0.0 if gamma > 0 else math.sqrt(m)
    return math.sqrt(m) * (1.0 + k / m) * (k / (k + m)) ** gamma


def train(
    series,
    cfg: OnlineConfig = OnlineConfig(),
    critical_values: Optional[CriticalValueTable] = None,
    omega_hat: Optional[float] = None,
) -> OnlineMonitorState:
    """Summarise a change-free training sample.

    ``omega_hat`` overrides the Bartlett estimate (it is the long-run
    standard deviation, not the variance).
    """
    x = _values(series)
    if x.size < cfg.min_training:
        raise InsufficientDataError(
            f"training needs >= {cfg.min_training} samples, got {x.size}"
        )
    if omega_hat is None:
        omega_hat = math.sqrt(bartlett_lrv(x, cfg.lrv))
    elif not omega_hat > 0:
        raise ConfigError("omega_hat must be positive")
    table = critical_values or default_table()
    crit = table.online(cfg.alpha, cfg.gamma)
    return OnlineMonitorState(m=int(x.size), train_sum=float(x.sum()), omega_hat=float(omega_hat), critical_value=crit)


def detector(state: OnlineMonitorState, monitor_sum: float, k: int) -> float:
    return (monitor_sum - k / state.m * state.train_sum) / state.omega_hat


def step(state: OnlineMonitorState, x: float, cfg: OnlineConfig = OnlineConfig()) -> tuple[OnlineMonitorState, Decision]:
    """Consume one monitored sample and return the new state and decision."""
    if state.stopped:
        raise UsageError(f"monitor already stopped at k={state.stopped_at}")
    k = state.k + 1
    if k > cfg.K:
        raise UsageError(f"monitoring horizon K={cfg.K} exhausted")
    s = state.monitor_sum + float(x)
    g = detector(state, s, k)
    hit = abs(g) >= state.critical_value * weight(state.m, k, cfg.gamma)
    new = dataclasses.replace(
        state, k=k, monitor_sum=s, detector_value=g, stopped_at=k if hit else None
    )
    return new, (Detected(k) if hit else Continue(k))


def monitor(state: OnlineMonitorState, samples: Iterable[float], cfg: OnlineConfig = OnlineConfig()):
    """Fold ``step`` over ``samples`` until detection or exhaustion.

    Returns the final state and the detector trajectory.
    """
    path = []
    for x in samples:
        if state.stopped or state.k >= cfg.K:
            break
        state, _ = step(state, x, cfg)
        path.append(state.detector_value)
    return state, np.array(path)
