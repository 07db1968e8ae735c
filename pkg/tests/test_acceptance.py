"""One test per acceptance criterion, each printing a PASS/FAIL line.

Criteria 7 to 13 share a single sweep (100-node FDFF and FNI with 20%
attackers, no-attack runs on both grids, 30 replications, full K x alpha
grid) run once per session through the experiment pipeline.
"""

import math
import statistics
import time

import numpy as np
import pytest
from scipy import optimize

from conftest import ACCEPTANCE_LINES
from sdwsn_cusum.critical import CriticalValueTable
from sdwsn_cusum.evaluation import mad
from sdwsn_cusum.experiment import ExperimentSpec, cell_suffix, run_sweep, trace_stems
from sdwsn_cusum.monitor import AttackHint, classify_attack_hint, read_events
from sdwsn_cusum.offline import cusum_path, offline_test
from sdwsn_cusum.online import OnlineConfig, monitor, step, train
from sdwsn_cusum.series import MetricKind
from sdwsn_cusum.sim import AttackKind, ScenarioConfig, SimTrace, attack_impact, read_trace_meta, read_trace_series, simulate

D, C = MetricKind.DELIVERY_RATE, MetricKind.CONTROL_OVERHEAD
REPS = 30


def report(n, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


# statistical core -------------------------------------------------------


def test_criterion_01_offline_size(table):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    rate = np.mean([offline_test(rng.normal(size=300), alpha=0.95, critical_values=table).reject_h0 for _ in range(1000)])
    dt = time.perf_counter() - t0
    report(1, 0.02 <= rate <= 0.08 and dt < 60, f"offline rejection rate {100 * rate:.1f}% in [2, 8]%, {dt:.1f}s < 60s")


def test_criterion_02_offline_location(table):
    rng = np.random.default_rng(102)
    errs = []
    for _ in range(500):
        x = rng.normal(size=300)
        x[150:] += 2.0
        r = offline_test(x, alpha=0.95, critical_values=table)
        errs.append(abs(r.cp_index - 150) if r.reject_h0 else 150)
    med = statistics.median(errs)
    report(2, med <= 5, f"median |cp - 150| = {med} <= 5")


def test_criterion_03_online_false_alarm(table):
    rng = np.random.default_rng(103)
    cfg = OnlineConfig(K=150, alpha=0.95, gamma=0.0)
    stops = sum(monitor(train(rng.normal(size=250), cfg, table), rng.normal(size=150), cfg)[0].stopped for _ in range(1000))
    report(3, stops / 1000 <= 0.08, f"H0 stopping frequency {stops / 10:.1f}% <= 8%")


def test_criterion_04_online_power(table):
    rng = np.random.default_rng(104)
    cfg = OnlineConfig(K=150, alpha=0.95, gamma=0.0)
    ks = []
    for _ in range(1000):
        s, _ = monitor(train(rng.normal(size=250), cfg, table), rng.normal(size=150) + 2.0, cfg)
        ks.append(s.stopped_at)
    hits = [k for k in ks if k is not None]
    freq, med = len(hits) / 1000, statistics.median(hits)
    report(4, freq >= 0.99 and med <= 25, f"detection frequency {100 * freq:.1f}% >= 99%, median k* {med} <= 25")


def _quantile(cdf, p):
    return optimize.brentq(lambda x: cdf(x) - p, 0.3, 5.0, xtol=1e-12)


def test_criterion_05_critical_value_oracles(table):
    def ks(x):
        return 1 - 2 * sum((-1) ** (k - 1) * math.exp(-2 * k * k * x * x) for k in range(1, 100))

    def sup_w(x):
        return 4 / math.pi * sum(
            (-1) ** k / (2 * k + 1) * math.exp(-math.pi**2 * (2 * k + 1) ** 2 / (8 * x * x)) for k in range(100)
        )

    w_mc, w_an = table.online(0.95, 0.0), _quantile(sup_w, 0.95)
    b_mc, b_an = math.sqrt(table.offline(0.95)), _quantile(ks, 0.95)
    ok = abs(w_mc - w_an) <= 0.02 and abs(b_mc - b_an) <= 0.02
    report(5, ok, f"sup|W| MC {w_mc:.4f} vs analytic {w_an:.4f}; sqrt offline MC {b_mc:.4f} vs KS {b_an:.4f} (tol 0.02)")


def test_criterion_06_hand_values(table):
    path_err = np.max(np.abs(cusum_path([1, 2, 3, 4]) - np.array([-0.75, -1.0, -0.75, 0.0])))
    cfg = OnlineConfig(K=5, min_training=4)
    s = train([1, 1, 1, 1], cfg, table, omega_hat=1.0)
    for x in (3, 3):
        s, _ = step(s, x, cfg)
    m = mad([2, 3, 5, 9])
    ok = path_err <= 1e-12 and abs(s.detector_value - 4.0) <= 1e-12 and m == 1.5
    report(6, ok, f"cusum_path err {path_err:.1e}, Gamma {s.detector_value!r}, mad {m!r}")


# sweep ------------------------------------------------------------------


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    specs = [
        ExperimentSpec(nodes=(100,), attacks=("fdff", "fni"), attacker_pcts=(20.0,), reps=REPS, out=out),
        ExperimentSpec(nodes=(36, 100), attacks=("none",), reps=REPS, out=out),
    ]
    t0 = time.perf_counter()
    tables = {}
    for spec in specs:
        tables.update(run_sweep(spec))
    elapsed = time.perf_counter() - t0
    return {"out": out, "spec": specs[0], "tables": tables, "elapsed": elapsed}


def _cell(tables, tag, kind, K, alpha):
    return next(c for c in tables[tag] if c.metric_kind is kind and c.K == K and c.alpha == alpha)


def _impacts(sweep, kind):
    spec = sweep["spec"]
    out = []
    for stem in trace_stems(spec.traces_dir):
        meta = read_trace_meta(spec.traces_dir / f"{stem}.meta.json")
        if meta["attack_kind"] != kind or meta["scenario"]["node_count"] != 100:
            continue
        tr = SimTrace(
            delivery_rate=read_trace_series(spec.traces_dir, stem, D),
            control_overhead=read_trace_series(spec.traces_dir, stem, C),
            attack_onset_index=meta["attack_onset_index"],
            per_window_counts=(),
            attackers=tuple(meta["attackers"]),
            seed=meta["seed"],
            attack_kind=AttackKind(kind),
        )
        out.append(attack_impact(tr))
    assert len(out) == REPS
    return statistics.mean(i.control_ratio for i in out), statistics.mean(i.delivery_drop_points for i in out)


def test_criterion_07_fdff_calibration(sweep):
    ratio, drop = _impacts(sweep, "fdff")
    report(7, 2.5 <= ratio <= 3.5 and 2 <= drop <= 4, f"FDFF control ratio {ratio:.2f} in [2.5, 3.5], delivery drop {drop:.2f} pts in [2, 4]")


def test_criterion_08_fni_calibration(sweep):
    ratio, drop = _impacts(sweep, "fni")
    report(8, 1.7 <= ratio <= 2.3 and 20 <= drop <= 70, f"FNI control ratio {ratio:.2f} in [1.7, 2.3], delivery drop {drop:.1f} pts in [20, 70]")


def test_criterion_09_fdff_detection(sweep):
    t = sweep["tables"]["n100_p20_fdff"]
    dr = _cell(sweep["tables"], "n100_p20_fdff", C, 100, 0.95).dr
    pairs = []
    for c in (c for c in t if c.metric_kind is C):
        d = _cell(sweep["tables"], "n100_p20_fdff", D, c.K, c.alpha)
        pairs.append((c.K, c.alpha, c.dtm, d.dtm))
    order_ok = all(cd is not None and (dd is None or cd <= dd) for _, _, cd, dd in pairs)
    cells = ", ".join(f"K{K}/{round(100 * a)}: {cd} vs {dd}" for K, a, cd, dd in pairs)
    report(9, dr >= 85 and order_ok, f"control DR {dr:.0f}% >= 85% at K=100/95; control vs delivery DTM {cells}")


def test_criterion_10_fni_detection(sweep):
    parts, ok = [], True
    for K in (50, 100):
        d = _cell(sweep["tables"], "n100_p20_fni", D, K, 0.95)
        c = _cell(sweep["tables"], "n100_p20_fni", C, K, 0.95)
        ok &= d.dr >= 90 and d.dtm is not None and (c.dtm is None or d.dtm < c.dtm)
        parts.append(f"K={K}: delivery DR {d.dr:.0f}%, DTM {d.dtm} vs control {c.dtm}")
    report(10, ok, "; ".join(parts))


def _hints(sweep, tag, Ks):
    spec = sweep["spec"]
    counts = {h: 0 for h in AttackHint}
    for stem in trace_stems(spec.traces_dir):
        if not stem.startswith(tag + "_rep"):
            continue
        for K in Ks:
            events = read_events(spec.events_dir / f"{stem}_{cell_suffix(K, 0.95)}.csv")
            if events:
                by = {k: [e for e in events if e.metric_kind is k] for k in MetricKind}
                counts[classify_attack_hint(by)] += 1
    return counts


def test_criterion_11_attack_hint(sweep):
    fd = _hints(sweep, "n100_p20_fdff", (100,))
    fn = _hints(sweep, "n100_p20_fni", (50, 100))
    r_fd = fd[AttackHint.FDFF_LIKE] / sum(fd.values())
    r_fn = fn[AttackHint.FNI_LIKE] / sum(fn.values())
    report(11, r_fd >= 0.8 and r_fn >= 0.8, f"FdffLike {100 * r_fd:.0f}% of FDFF runs, FniLike {100 * r_fn:.0f}% of FNI runs (>= 80%)")


def test_criterion_12_no_attack_fpr(sweep):
    worst = max(c.fpr for tag in ("n36_p0_none", "n100_p0_none") for c in sweep["tables"][tag])
    report(12, worst <= 10, f"max per-cell FPR over both grids {worst:.1f}% <= 10%")


def test_criterion_13_runtime(sweep):
    t0 = time.perf_counter()
    simulate(ScenarioConfig(node_count=100, attack_kind="fni", attacker_fraction=0.2, seed=0))
    single = time.perf_counter() - t0
    import os

    cores = os.cpu_count()
    report(
        13,
        sweep["elapsed"] < 600 and single < 5,
        f"sweep of criteria 9-12 {sweep['elapsed']:.0f}s < 600s on {cores} core(s); one 100-node run {single:.2f}s < 5s",
    )
