"""Retrospective test for a single change in the mean of a historical window."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .critical import CriticalValueTable, default_table, offline_critical_value  # noqa: F401
from .errors import ConfigError, DegenerateVarianceError, InsufficientDataError
from .series import MetricSeries, autocovariances

MIN_OFFLINE_LENGTH = 20


@dataclass(frozen=True)
class LrvConfig:
    """Bandwidth choice for the Bartlett long-run variance estimator.

    ``lag=None`` selects the automatic rule ``q = floor(N ** (1/3))``.
    """

    lag: Optional[int] = None
    min_variance_floor: float = 1e-12

    def __post_init__(self):
        if self.lag is not None and self.lag < 0:
            raise ConfigError("lag must be >= 0")
        if not self.min_variance_floor > 0:
            raise ConfigError("min_variance_floor must be > 0")

    def bandwidth(self, n: int) -> int:
        q = int(math.floor(n ** (1.0 / 3.0) + 1e-9)) if self.lag is None else self.lag
        return min(q, n - 1)


@dataclass(frozen=True)
class OfflineTestResult:
    statistic: float
    critical_value: float
    reject_h0: bool
    cp_index: Optional[int] = None
    cp_fraction: Optional[float] = None


def _values(series) -> np.ndarray:
    if isinstance(series, MetricSeries):
        return series.values
    return np.asarray(series, dtype=float)


def cusum_path(series) -> np.ndarray:
    """Normalised CUSUM ``C_n = (S_n - n/N * S_N) / sqrt(N)`` for n = 1..N."""
    x = _values(series)
    n = x.size
    if n < 2:
        raise InsufficientDataError("cusum_path needs at least 2 samples")
    s = np.cumsum(x)
    path = (s - np.arange(1, n + 1) / n * s[-1]) / math.sqrt(n)
    path[-1] = 0.0
    return path


def bartlett_lrv(series, cfg: LrvConfig = LrvConfig()) -> float:
    """Bartlett-kernel estimate of the long-run variance.

    ``gamma(0) + 2 * sum_{s=1..q} (1 - s/(q+1)) * gamma(s)`` with biased
    autocovariances, which keeps the estimate non-negative.
    """
    x = _values(series)
    n = x.size
    if n < 4:
        raise InsufficientDataError("bartlett_lrv needs at least 4 samples")
    q = cfg.bandwidth(n)
    gam = autocovariances(x, q)
    if gam[0] <= cfg.min_variance_floor:
        raise DegenerateVarianceError("series has (near) zero variance")
    w = 1.0 - np.arange(1, q + 1) / (q + 1.0)
    omega = gam[0] + 2.0 * np.dot(w, gam[1:])
    if omega <= cfg.min_variance_floor:
        raise DegenerateVarianceError(f"long-run variance {omega!r} below floor")
    return float(omega)


def offline_statistic(series, omega: float) -> tuple[float, int]:
    """Max-type statistic ``max_n C_n^2 / omega`` and its (0-based) argmax."""
    c2 = cusum_path(series) ** 2 / omega
    i = int(np.argmax(c2))
    return float(c2[i]), i


def offline_test(
    series,
    cfg: LrvConfig = LrvConfig(),
    alpha: float = 0.95,
    critical_values: Optional[CriticalValueTable] = None,
    omega: Optional[float] = None,
) -> OfflineTestResult:
    """Test a window for one change in mean.

    ``alpha`` is the confidence level. On rejection ``cp_index`` is the
    number of samples before the change, i.e. the first post-change sample
    sits at ``cp_index`` (0-based). Pass ``omega`` to bypass the Bartlett
    estimate.
    """
    x = _values(series)
    n = x.size
    if n < MIN_OFFLINE_LENGTH:
        raise InsufficientDataError(f"offline test needs >= {MIN_OFFLINE_LENGTH} samples, got {n}")
    if omega is None:
        omega = bartlett_lrv(x, cfg)
    table = critical_values or default_table()
    crit = table.offline(alpha)
    m, i = offline_statistic(x, omega)
    if m >= crit:
        cp = i + 1
        return OfflineTestResult(m, crit, True, cp, cp / n)
    return OfflineTestResult(m, crit, False)
