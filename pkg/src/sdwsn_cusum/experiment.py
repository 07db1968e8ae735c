"""Seeded simulate -> detect -> evaluate pipeline over a scenario grid.

Everything passes through files under one output directory::

    out/critical_values.csv
    out/traces/<tag>_rep007_delivery_rate.csv   (+ _control_overhead.csv, .meta.json)
    out/events/<tag>_rep007_K100_a95.csv
    out/tables/<tag>.csv                         (+ .txt rendering)

Replication ``i`` of every scenario uses seed ``base_seed + i``, so any single
replication can be rerun alone and results do not depend on the worker count.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .critical import CriticalValueTable
from .errors import ConfigError
from .evaluation import EvalCell, aggregate, classify_replication, render_table, write_table
from .monitor import MonitorConfig, read_events, run_monitor, write_events
from .series import BOOTSTRAP_SAMPLES, MetricKind, discard_bootstrap
from .sim import AttackKind, ScenarioConfig, read_trace_meta, read_trace_series, simulate, write_trace

KS = (50, 100, 150)
ALPHAS = (0.90, 0.95, 0.99)
# the first change-free training window must end before the attack: onset is
# sample 225 once the bootstrap prefix is gone
HARNESS_TRAINING = 200


def scenario_tag(cfg: ScenarioConfig) -> str:
    pct = 0 if cfg.attack_kind is AttackKind.NONE else round(100 * cfg.attacker_fraction, 6)
    return f"n{cfg.node_count}_p{pct:g}_{cfg.attack_kind.value}"


def cell_suffix(K: int, alpha: float) -> str:
    return f"K{K}_a{round(100 * alpha, 6):g}"


@dataclass(frozen=True)
class ExperimentSpec:
    nodes: tuple = (36, 100)
    attacker_pcts: tuple = (5.0, 20.0)
    attacks: tuple = ("fdff", "fni", "none")
    Ks: tuple = KS
    alphas: tuple = ALPHAS
    gamma: float = 0.0
    reps: int = 30
    seed: int = 0
    out: Path = Path("results")
    jobs: Optional[int] = None
    min_training: int = HARNESS_TRAINING
    d: int = 10
    # extra ScenarioConfig fields applied to every scenario
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "out", Path(self.out))
        for name in ("nodes", "attacker_pcts", "attacks", "Ks", "alphas"):
            vals = tuple(getattr(self, name))
            if not vals:
                raise ConfigError(f"empty grid: {name}")
            object.__setattr__(self, name, vals)
        if self.reps < 1:
            raise ConfigError("reps must be >= 1")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        for pct in self.attacker_pcts:
            if not 0.0 < pct <= 100.0:
                raise ConfigError(f"attacker percentage {pct} outside (0, 100]")
        for K, a in self.cells():
            self.monitor_config(K, a)
        self.scenarios()

    @property
    def traces_dir(self) -> Path:
        return self.out / "traces"

    @property
    def events_dir(self) -> Path:
        return self.out / "events"

    @property
    def tables_dir(self) -> Path:
        return self.out / "tables"

    @property
    def critical_path(self) -> Path:
        return self.out / "critical_values.csv"

    def cells(self):
        return list(itertools.product(self.Ks, self.alphas))

    def monitor_config(self, K: int, alpha: float) -> MonitorConfig:
        if not 0.0 < alpha < 1.0:
            raise ConfigError(f"alpha {alpha} outside (0, 1)")
        return MonitorConfig(
            K=int(K), alpha=float(alpha), gamma=self.gamma, d=self.d,
            min_training=self.min_training, start=self.min_training,
        )

    def scenarios(self) -> list[ScenarioConfig]:
        """One config per grid point; no-attack runs ignore the attacker share."""
        out, seen = [], set()
        for n, kind, pct in itertools.product(self.nodes, self.attacks, self.attacker_pcts):
            kind = AttackKind(kind)
            frac = 0.0 if kind is AttackKind.NONE else pct / 100.0
            cfg = ScenarioConfig.from_dict(
                {**self.overrides, "node_count": int(n), "attack_kind": kind.value, "attacker_fraction": frac}
            )
            tag = scenario_tag(cfg)
            if tag not in seen:
                seen.add(tag)
                out.append(cfg)
        return out

    def critical_values(self) -> CriticalValueTable:
        return CriticalValueTable.cached(self.critical_path, self.alphas, (self.gamma,))


def _pool_map(fn, tasks, jobs):
    if jobs == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs or os.cpu_count()) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * (jobs or os.cpu_count() or 1)))))


def _simulate_one(task):
    cfg, directory, stem = task
    write_trace(simulate(cfg), cfg, directory, stem)
    return stem


def run_simulate(spec: ExperimentSpec) -> list[str]:
    """Write two metric CSVs and a meta file per replication; returns the stems."""
    spec.traces_dir.mkdir(parents=True, exist_ok=True)
    tasks = []
    for base in spec.scenarios():
        tag = scenario_tag(base)
        for i in range(spec.reps):
            cfg = ScenarioConfig.from_dict({**base.to_dict(), "seed": spec.seed + i})
            tasks.append((cfg, spec.traces_dir, f"{tag}_rep{i:03d}"))
    return _pool_map(_simulate_one, tasks, spec.jobs)


def trace_stems(directory) -> list[str]:
    """Stems of all traces in ``directory``; a trace without meta file is an error."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"trace directory {directory} does not exist")
    stems = sorted(p.name[: -len("_delivery_rate.csv")] for p in directory.glob("*_delivery_rate.csv"))
    for s in stems:
        if not (directory / f"{s}.meta.json").exists():
            raise FileNotFoundError(f"missing meta file for trace {s}")
    if not stems:
        raise FileNotFoundError(f"no traces in {directory}")
    return stems


def _detect_one(task):
    spec, table, stem = task
    meta = read_trace_meta(spec.traces_dir / f"{stem}.meta.json")
    window = float(meta.get("scenario", {}).get("window", 120.0))
    series = {
        kind: discard_bootstrap(read_trace_series(spec.traces_dir, stem, kind, window)) for kind in MetricKind
    }
    written = []
    for K, a in spec.cells():
        cfg = spec.monitor_config(K, a)
        events = [e for kind in MetricKind for e in run_monitor(series[kind], cfg, table)]
        path = spec.events_dir / f"{stem}_{cell_suffix(K, a)}.csv"
        write_events(events, path)
        written.append(path)
    return written


def run_detect(spec: ExperimentSpec, table: Optional[CriticalValueTable] = None) -> list[Path]:
    """Run the monitor on every trace for every (K, alpha) cell."""
    stems = trace_stems(spec.traces_dir)
    table = table or spec.critical_values()
    spec.events_dir.mkdir(parents=True, exist_ok=True)
    results = _pool_map(_detect_one, [(spec, table, s) for s in stems], spec.jobs)
    return [p for paths in results for p in paths]


def evaluate(spec: ExperimentSpec) -> dict[str, list[EvalCell]]:
    """Score every replication and aggregate one table per scenario tag."""
    rows: dict[str, list] = {}
    for stem in trace_stems(spec.traces_dir):
        meta = read_trace_meta(spec.traces_dir / f"{stem}.meta.json")
        tag = stem.rsplit("_rep", 1)[0]
        onset = None
        if meta.get("attack_kind", "none") != AttackKind.NONE.value:
            onset = int(meta["attack_onset_index"]) - BOOTSTRAP_SAMPLES
        for K, a in spec.cells():
            path = spec.events_dir / f"{stem}_{cell_suffix(K, a)}.csv"
            if not path.exists():
                raise FileNotFoundError(f"missing event log {path}")
            events = read_events(path)
            for kind in MetricKind:
                outcome = classify_replication([e for e in events if e.metric_kind is kind], onset)
                rows.setdefault(tag, []).append((kind, K, a, outcome))
    return {tag: aggregate(r) for tag, r in sorted(rows.items())}


def run_evaluate(spec: ExperimentSpec) -> dict[str, list[EvalCell]]:
    tables = evaluate(spec)
    spec.tables_dir.mkdir(parents=True, exist_ok=True)
    for tag, cells in tables.items():
        write_table(cells, spec.tables_dir / f"{tag}.csv")
        (spec.tables_dir / f"{tag}.txt").write_text(render_table(cells))
    return tables


def run_sweep(spec: ExperimentSpec) -> dict[str, list[EvalCell]]:
    table = spec.critical_values()
    run_simulate(spec)
    run_detect(spec, table)
    return run_evaluate(spec)
