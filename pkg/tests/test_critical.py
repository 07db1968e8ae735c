import math

import numpy as np
import pytest
from scipy import optimize, stats

from sdwsn_cusum.critical import (
    CriticalValueTable,
    offline_critical_value,
    online_critical_value,
    simulate_sups,
)
from sdwsn_cusum.errors import ConfigError


def ks_cdf(x, terms=100):
    # P(sup|B| <= x) = 1 - 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)
    return 1 - 2 * sum((-1) ** (k - 1) * math.exp(-2 * k * k * x * x) for k in range(1, terms))


def sup_abs_w_cdf(x, terms=100):
    # P(sup_[0,1] |W| <= x) = 4/pi sum_k (-1)^k / (2k+1) exp(-pi^2 (2k+1)^2 / (8 x^2))
    return 4 / math.pi * sum(
        (-1) ** k / (2 * k + 1) * math.exp(-math.pi**2 * (2 * k + 1) ** 2 / (8 * x * x)) for k in range(terms)
    )


def analytic_quantile(cdf, p):
    return optimize.brentq(lambda x: cdf(x) - p, 0.3, 5.0, xtol=1e-12)


def test_analytic_oracles_agree_with_scipy():
    ks95 = analytic_quantile(ks_cdf, 0.95)
    assert ks95 == pytest.approx(stats.kstwobign.ppf(0.95), abs=1e-9)
    assert ks95 == pytest.approx(1.3581, abs=1e-4)
    assert analytic_quantile(sup_abs_w_cdf, 0.95) == pytest.approx(2.2414, abs=1e-4)


def test_offline_matches_ks(table):
    target = analytic_quantile(ks_cdf, 0.95)
    assert math.sqrt(table.offline(0.95)) == pytest.approx(target, abs=0.02)


def test_online_gamma0_matches_series(table):
    assert table.online(0.95, 0.0) == pytest.approx(analytic_quantile(sup_abs_w_cdf, 0.95), abs=0.02)
    assert table.online(0.99, 0.0) == pytest.approx(analytic_quantile(sup_abs_w_cdf, 0.99), abs=0.03)


def test_monotone_in_alpha(table):
    assert table.offline(0.99) > table.offline(0.95) > table.offline(0.90)
    assert table.online(0.99) > table.online(0.95) > table.online(0.90)


def test_online_increasing_in_gamma():
    qs = [online_critical_value(0.95, g, mc_paths=20_000, grid=1000) for g in (0.0, 0.25, 0.45)]
    assert qs[0] < qs[1] < qs[2]


def test_grid_refinement_stable():
    coarse = offline_critical_value(0.95, mc_paths=20_000, grid=500)
    fine = offline_critical_value(0.95, mc_paths=20_000, grid=2000)
    assert abs(coarse - fine) / fine < 0.01


def test_deterministic_and_seed_sensitive():
    simulate_sups.cache_clear()
    a = offline_critical_value(0.95, mc_paths=10_000, grid=500, seed=3)
    simulate_sups.cache_clear()
    assert offline_critical_value(0.95, mc_paths=10_000, grid=500, seed=3) == a
    assert offline_critical_value(0.95, mc_paths=10_000, grid=500, seed=4) != a


def test_validation():
    with pytest.raises(ConfigError):
        offline_critical_value(0.95, mc_paths=9_999)
    with pytest.raises(ConfigError):
        offline_critical_value(0.95, grid=499)
    with pytest.raises(ConfigError):
        online_critical_value(0.95, gamma=0.5)
    with pytest.raises(ConfigError):
        online_critical_value(1.0)


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "cv" / "critical_values.csv"
    kw = dict(mc_paths=10_000, grid=500)
    t = CriticalValueTable.cached(path, alphas=(0.9, 0.95), gammas=(0.0, 0.25), **kw)
    assert path.exists()
    lines = path.read_text().splitlines()
    assert lines[0] == "alpha,gamma,value"
    assert any(line.split(",")[1] == "" for line in lines[1:])
    loaded = CriticalValueTable.cached(path, **kw)
    assert loaded.values == t.values
    assert loaded.online(0.95, 0.25) == t.online(0.95, 0.25)
