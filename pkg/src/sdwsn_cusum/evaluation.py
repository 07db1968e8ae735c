"""Detection-performance scoring over replications (DR, FPR, FNR, DTM, MAD)."""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import InsufficientDataError
from .monitor import ChangeEvent
from .series import MetricKind


@dataclass(frozen=True)
class TruePositive:
    delay: int


@dataclass(frozen=True)
class FalsePositive:
    pass


@dataclass(frozen=True)
class FalseNegative:
    pass


Outcome = Union[TruePositive, FalsePositive, FalseNegative]


def classify_replication(events: Sequence[ChangeEvent], onset: Optional[int]) -> Outcome:
    """Score one replication by its earliest event.

    ``onset=None`` means no attack took place, so any event is a false
    positive.
    """
    if not events:
        return FalseNegative()
    first = min(e.cp_index for e in events)
    if onset is None or first < onset:
        return FalsePositive()
    return TruePositive(first - onset)


def median(values: Iterable[float]) -> float:
    """Ordinary median; even counts average the two middle values."""
    vals = list(values)
    if not vals:
        raise InsufficientDataError("median of empty list")
    return statistics.median(vals)


def mad(times: Sequence[float]) -> float:
    """Median absolute deviation ``median(|x - median(x)|)``."""
    med = median(times)
    return median(abs(t - med) for t in times)


@dataclass(frozen=True)
class EvalCell:
    metric_kind: MetricKind
    K: int
    alpha: float
    dr: float
    fpr: float
    fnr: float
    dtm: Optional[float]
    mad: Optional[float]
    n_replications: int

    def rounded(self) -> tuple[int, int, int]:
        return round(self.dr), round(self.fpr), round(self.fnr)

    @property
    def rounding_flag(self) -> bool:
        """True when the rounded percentages do not add up to 100."""
        return sum(self.rounded()) != 100


def aggregate_cell(metric_kind: MetricKind, K: int, alpha: float, outcomes: Sequence[Outcome]) -> EvalCell:
    n = len(outcomes)
    if n == 0:
        raise InsufficientDataError("no replications for cell")
    delays = [o.delay for o in outcomes if isinstance(o, TruePositive)]
    n_fp = sum(isinstance(o, FalsePositive) for o in outcomes)
    n_fn = sum(isinstance(o, FalseNegative) for o in outcomes)
    return EvalCell(
        metric_kind=MetricKind(metric_kind),
        K=K,
        alpha=alpha,
        dr=100.0 * len(delays) / n,
        fpr=100.0 * n_fp / n,
        fnr=100.0 * n_fn / n,
        dtm=median(delays) if delays else None,
        mad=mad(delays) if delays else None,
        n_replications=n,
    )


def aggregate(results: Iterable[tuple[MetricKind, int, float, Outcome]]) -> list[EvalCell]:
    """Group ``(metric, K, alpha, outcome)`` rows into table cells."""
    groups: dict = {}
    for kind, K, alpha, outcome in results:
        groups.setdefault((MetricKind(kind), int(K), float(alpha)), []).append(outcome)
    order = {MetricKind.DELIVERY_RATE: 0, MetricKind.CONTROL_OVERHEAD: 1}
    return [
        aggregate_cell(kind, K, alpha, outs)
        for (kind, K, alpha), outs in sorted(groups.items(), key=lambda kv: (order[kv[0][0]], kv[0][1], kv[0][2]))
    ]


TABLE_HEADER = ["metric", "K", "alpha", "DTM", "MAD", "DR", "FPR", "FNR"]


def _fmt(v: Optional[float]) -> str:
    if v is None:
        return ""
    return str(int(v)) if float(v).is_integer() else f"{v:g}"


def write_table(cells: Sequence[EvalCell], path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        for c in cells:
            dr, fpr, fnr = c.rounded()
            w.writerow([c.metric_kind.value, c.K, _fmt(round(100 * c.alpha)), _fmt(c.dtm), _fmt(c.mad), dr, fpr, fnr])


def render_table(cells: Sequence[EvalCell]) -> str:
    """Aligned text in the layout of the published tables: one block per metric."""
    lines = []
    for kind in (MetricKind.DELIVERY_RATE, MetricKind.CONTROL_OVERHEAD):
        block = [c for c in cells if c.metric_kind is kind]
        if not block:
            continue
        lines.append(kind.value)
        rows = {
            "K": [str(c.K) for c in block],
            "alpha": [_fmt(round(100 * c.alpha)) for c in block],
            "DTM": [_fmt(c.dtm) or "-" for c in block],
            "MAD": [_fmt(c.mad) or "-" for c in block],
            "DR": [str(c.rounded()[0]) for c in block],
            "FPR": [str(c.rounded()[1]) for c in block],
            "FNR": [str(c.rounded()[2]) for c in block],
        }
        for name, vals in rows.items():
            lines.append(f"{name:<6}" + "".join(f"{v:>6}" for v in vals))
        flagged = [f"K={c.K}/a={_fmt(round(100 * c.alpha))}" for c in block if c.rounding_flag]
        if flagged:
            lines.append("rounding: percentages do not sum to 100 in " + ", ".join(flagged))
        lines.append("")
    return "\n".join(lines)
