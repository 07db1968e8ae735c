"""Monte-Carlo critical values for the offline and online CUSUM tests.

Offline values are quantiles of ``sup_t B(t)^2`` for a Brownian bridge ``B``;
online values are quantiles of ``sup_t |W(t)| / t**gamma`` for a Wiener
process ``W``. Both are simulated on a uniform grid of ``[0, 1]`` from the same
random-walk paths.

A discretely sampled path misses the excursions between grid points, which
biases the simulated sup low by about ``0.5826 * sqrt(dt)`` (Broadie,
Glasserman & Kou, 1997). The correction is added to the argmax of every path.
"""

from __future__ import annotations

import csv
import functools
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

log = logging.getLogger(__name__)

ALPHAS = (0.90, 0.95, 0.99)
DEFAULT_PATHS = 100_000
DEFAULT_GRID = 1000
DEFAULT_SEED = 20200611
CHUNK = 5000
# -zeta(1/2) / sqrt(2*pi)
_BGK_BETA = 0.5825971579390106


def _check_params(mc_paths: int, grid: int) -> None:
    if mc_paths < 10_000:
        raise ConfigError("mc_paths must be >= 10000")
    if grid < 500:
        raise ConfigError("grid must be >= 500")


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be a confidence level in (0, 1), got {alpha}")


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma < 0.5:
        raise ConfigError(f"gamma must lie in [0, 0.5), got {gamma}")


@functools.lru_cache(maxsize=16)
def simulate_sups(
    mc_paths: int = DEFAULT_PATHS,
    grid: int = DEFAULT_GRID,
    gammas: tuple[float, ...] = (0.0,),
    seed: int = DEFAULT_SEED,
) -> tuple[np.ndarray, dict[float, np.ndarray]]:
    """Simulate per-path suprema.

    Returns the bridge sups ``sup |B|`` and, for every gamma, the weighted
    Wiener sups ``sup |W(t)| / t**gamma``. Paths are generated in fixed-size
    chunks, each from its own spawned seed, so the output does not depend on
    how the chunks are scheduled.
    """
    _check_params(mc_paths, grid)
    for g in gammas:
        _check_gamma(g)
    t = np.arange(1, grid + 1) / grid
    corr = _BGK_BETA / np.sqrt(grid)
    n_chunks = -(-mc_paths // CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    bridge = np.empty(mc_paths)
    wiener = {g: np.empty(mc_paths) for g in gammas}
    weights = {g: t ** -g for g in gammas}
    for c, ss in enumerate(seeds):
        lo = c * CHUNK
        hi = min(lo + CHUNK, mc_paths)
        rng = np.random.default_rng(ss)
        w = np.cumsum(rng.standard_normal((hi - lo, grid)), axis=1)
        w /= np.sqrt(grid)
        bridge[lo:hi] = np.abs(w - t * w[:, -1:]).max(axis=1) + corr
        absw = np.abs(w, out=w)
        rows = np.arange(hi - lo)
        for g in gammas:
            weighted = absw * weights[g] if g else absw
            i = weighted.argmax(axis=1)
            wiener[g][lo:hi] = weighted[rows, i] + corr * weights[g][i]
    return bridge, wiener


def offline_critical_value(
    alpha: float, mc_paths: int = DEFAULT_PATHS, grid: int = DEFAULT_GRID, seed: int = DEFAULT_SEED
) -> float:
    """``alpha``-quantile of ``sup_t B(t)^2``."""
    _check_alpha(alpha)
    bridge, _ = simulate_sups(mc_paths, grid, (0.0,), seed)
    return float(np.quantile(bridge, alpha) ** 2)


def online_critical_value(
    alpha: float,
    gamma: float = 0.0,
    mc_paths: int = DEFAULT_PATHS,
    grid: int = DEFAULT_GRID,
    seed: int = DEFAULT_SEED,
) -> float:
    """``alpha``-quantile of ``sup_t |W(t)| / t**gamma``."""
    _check_alpha(alpha)
    _check_gamma(gamma)
    _, wiener = simulate_sups(mc_paths, grid, (float(gamma),), seed)
    return float(np.quantile(wiener[float(gamma)], alpha))


@dataclass
class CriticalValueTable:
    """Lookup of critical values keyed by ``(alpha, gamma)``.

    ``gamma`` is ``None`` for offline values. Missing entries are simulated on
    first use with the table's Monte-Carlo settings.
    """

    mc_paths: int = DEFAULT_PATHS
    grid: int = DEFAULT_GRID
    seed: int = DEFAULT_SEED
    values: dict = field(default_factory=dict)

    def offline(self, alpha: float) -> float:
        key = (round(alpha, 6), None)
        if key not in self.values:
            self.values[key] = offline_critical_value(alpha, self.mc_paths, self.grid, self.seed)
        return self.values[key]

    def online(self, alpha: float, gamma: float = 0.0) -> float:
        key = (round(alpha, 6), round(float(gamma), 6))
        if key not in self.values:
            self.values[key] = online_critical_value(alpha, gamma, self.mc_paths, self.grid, self.seed)
        return self.values[key]

    def fill(self, alphas=ALPHAS, gammas=(0.0,)) -> "CriticalValueTable":
        gammas = tuple(float(g) for g in gammas)
        # one simulation pass for all gammas; bridge sups do not depend on them
        bridge, wiener = simulate_sups(self.mc_paths, self.grid, gammas, self.seed)
        for a in alphas:
            _check_alpha(a)
            self.values.setdefault((round(a, 6), None), float(np.quantile(bridge, a) ** 2))
            for g in gammas:
                self.values.setdefault((round(a, 6), round(g, 6)), float(np.quantile(wiener[g], a)))
        return self

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "gamma", "value"])
            for (a, g), v in sorted(self.values.items(), key=lambda kv: (kv[0][1] is not None, kv[0][1] or 0.0, kv[0][0])):
                w.writerow([a, "" if g is None else g, repr(v)])

    @classmethod
    def load(cls, path, **kwargs) -> "CriticalValueTable":
        table = cls(**kwargs)
        with Path(path).open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != ["alpha", "gamma", "value"]:
                raise ValueError(f"{path}: bad critical-value header {reader.fieldnames}")
            for row in reader:
                g = None if row["gamma"] == "" else round(float(row["gamma"]), 6)
                table.values[(round(float(row["alpha"]), 6), g)] = float(row["value"])
        return table

    @classmethod
    def cached(cls, path, alphas=ALPHAS, gammas=(0.0,), **kwargs) -> "CriticalValueTable":
        """Load ``path`` if it exists, otherwise simulate and write it."""
        path = Path(path)
        if path.exists():
            return cls.load(path, **kwargs)
        log.info("critical-value cache %s missing, regenerating", path)
        table = cls(**kwargs).fill(alphas, gammas)
        table.save(path)
        return table


@functools.lru_cache(maxsize=1)
def default_table() -> CriticalValueTable:
    """Process-wide table with the default Monte-Carlo settings."""
    return CriticalValueTable().fill()
