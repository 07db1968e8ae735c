"""MACD-style direction indicator evaluated at a detected change point."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .offline import _values


@dataclass(frozen=True)
class MacdConfig:
    short_span: int = 12
    long_span: int = 26
    signal_span: int = 9

    def __post_init__(self):
        if not 0 < self.short_span < self.long_span:
            raise ConfigError("need 0 < short_span < long_span")
        if self.signal_span <= 0:
            raise ConfigError("signal_span must be positive")


def ema(series, span: int) -> np.ndarray:
    """Recursive EMA with factor ``2 / (span + 1)``, seeded with the first sample."""
    if span < 1:
        raise ConfigError("span must be >= 1")
    x = _values(series)
    if x.size == 0:
        raise InsufficientDataError("ema of empty series")
    a = 2.0 / (span + 1.0)
    out = np.empty_like(x)
    acc = x[0]
    for i, v in enumerate(x):
        acc = acc + a * (v - acc)
        out[i] = acc
    return out


def macd_histogram(series, cfg: MacdConfig = MacdConfig()) -> np.ndarray:
    x = _values(series)
    line = ema(x, cfg.short_span) - ema(x, cfg.long_span)
    return line - ema(line, cfg.signal_span)


def _check_at(x: np.ndarray, at: int, cfg: MacdConfig) -> None:
    if at < cfg.long_span or at >= x.size:
        raise InsufficientDataError(
            f"trend indicator at {at} needs index in [{cfg.long_span}, {x.size})"
        )


def macd_line(series, at: int, cfg: MacdConfig = MacdConfig()) -> float:
    """``EMA_short - EMA_long`` at index ``at`` using samples ``0..at`` only.

    After a step this keeps the sign of the step while it decays, whereas the
    histogram turns negative about one signal span later.
    """
    x = _values(series)
    _check_at(x, at, cfg)
    h = x[: at + 1]
    return float(ema(h, cfg.short_span)[-1] - ema(h, cfg.long_span)[-1])


def trend_indicator(series, at: int, cfg: MacdConfig = MacdConfig()) -> float:
    """MACD histogram at index ``at`` using samples ``0..at`` only.

    Positive means the series is moving up.
    """
    x = _values(series)
    _check_at(x, at, cfg)
    return float(macd_histogram(x[: at + 1], cfg)[-1])
