"""Discrete-event simulator of a software-defined WSN on a square grid.

The model keeps what matters at two-minute aggregation and drops MAC timing:

* Every plain node sends a data packet to the data sink every ``data_period``
  seconds. Packets are forwarded hop by hop using per-node flow tables.
* A flow-table miss queues the packet and sends a flow request to the
  controller; the reply installs a rule (hard timeout ``rule_ttl``). Full
  tables reject new rules unless LRU eviction is enabled.
* Nodes report their neighbor lists to the controller every
  ``neighbor_report_period`` seconds. The controller keeps these claims as
  soft state, computes shortest-path routes to the data sink on the claimed
  graph and pushes a rule update to each node whose next hop changed.
* Control packets travel along a fixed shortest-path tree to the controller.
  Each hop of any packet succeeds with probability
  ``tx_success * (1 - link_loss)``.
* A time-varying interference level sets how many MAC retransmissions a hop
  needs. Retries are invisible in the delivery rate but every one of them is
  a control transmission, which is what makes the control count noisy.

Per window the simulator records legitimate data packets sent, how many of
those reached the sink, and control transmissions (every attempt counts).

A rule whose next hop is not a radio neighbor fails at the MAC layer; the
node then discards the rule, so the following packet triggers a new request.

FDFF attackers periodically hand each neighbor a data packet with a fresh
flow id, so the neighbor asks the controller and stores the resulting drop
rule. FNI attackers rewrite the neighbor list of every report they relay.
"""

from __future__ import annotations

import bisect
import dataclasses
import enum
import heapq
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError
from .series import MetricKind, MetricSeries, write_csv, read_csv

HOUR = 3600.0
DROP = -1
LEGIT_FLOW = 0

# event kinds
_DATA, _REPORT, _REPORT_ARRIVE, _RULE, _TIMEOUT, _FDFF, _PURGE = range(7)


class AttackKind(str, enum.Enum):
    NONE = "none"
    FDFF = "fdff"
    FNI = "fni"
    # false flow request: negligible impact, kept as a reserved name only
    FFR = "ffr"


class Role(str, enum.Enum):
    PLAIN = "plain"
    ATTACKER = "attacker"
    CONTROLLER = "controller"
    DATA_SINK = "data_sink"
    MANAGEMENT_SINK = "management_sink"


@dataclass(frozen=True)
class ScenarioConfig:
    node_count: int = 36
    attacker_fraction: float = 0.0
    attack_kind: AttackKind = AttackKind.NONE
    duration: float = 10 * HOUR
    attack_onset: float = 8 * HOUR
    window: float = 120.0
    data_period: float = 60.0
    neighbor_report_period: float = 120.0
    # fraction of the period by which each interval is randomly shortened or stretched
    jitter: float = 0.9
    tx_success: float = 1.0
    link_loss: float = 0.003
    hop_delay: float = 0.01
    flow_table_capacity: Optional[int] = 7
    lru_eviction: bool = False
    rule_ttl: float = 300.0
    request_timeout: float = 2.0
    queue_capacity: int = 8
    # consecutive MAC failures after which a node drops a rule and asks again
    repair_after: int = 1
    # per-attempt collision probability is redrawn from U(0, interference_max)
    # after exponential holding times of mean interference_hold seconds; every
    # retransmission of a control packet counts as overhead
    interference_max: float = 0.6
    interference_hold: float = 40.0
    neighbor_timeout: float = 1800.0
    eight_connected: bool = False
    fdff_period: float = 55.0
    fni_fake_neighbors: int = 1
    fni_tamper_prob: float = 0.002
    exclude_near_infrastructure: bool = False
    attackers: Optional[tuple] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "attack_kind", AttackKind(self.attack_kind))
        if self.attackers is not None:
            object.__setattr__(self, "attackers", tuple(int(a) for a in self.attackers))
        side = math.isqrt(self.node_count)
        if side * side != self.node_count or side < 3:
            raise ConfigError("node_count must be a square grid of side >= 3")
        if not 0.0 <= self.attacker_fraction <= 1.0:
            raise ConfigError("attacker_fraction must lie in [0, 1]")
        if not 0 < self.attack_onset < self.duration:
            raise ConfigError("attack_onset must lie inside (0, duration)")
        if self.window <= 0 or self.data_period <= 0 or self.neighbor_report_period <= 0:
            raise ConfigError("periods must be positive")
        if not 0.0 < self.tx_success <= 1.0:
            raise ConfigError("tx_success must lie in (0, 1]")
        if not 0.0 <= self.link_loss < 1.0:
            raise ConfigError("link_loss must lie in [0, 1)")
        if not 0.0 <= self.jitter < 1.0:
            raise ConfigError("jitter must lie in [0, 1)")
        if self.flow_table_capacity is not None and self.flow_table_capacity < 1:
            raise ConfigError("flow_table_capacity must be >= 1 or None")
        if self.attack_kind is AttackKind.FFR:
            raise ConfigError("the FFR attack is not implemented")
        if self.attack_kind is not AttackKind.NONE and self.attackers is None:
            if attacker_count(self) < 1 or self.attacker_fraction <= 0:
                raise ConfigError("an attack needs a positive attacker fraction")

    @property
    def side(self) -> int:
        return math.isqrt(self.node_count)

    @property
    def n_windows(self) -> int:
        return int(round(self.duration / self.window))

    @property
    def onset_index(self) -> int:
        return int(self.attack_onset // self.window)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["attack_kind"] = self.attack_kind.value
        if self.attackers is not None:
            d["attackers"] = list(self.attackers)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        d = dict(d)
        if d.get("attackers") is not None:
            d["attackers"] = tuple(d["attackers"])
        return cls(**d)


def load_scenario(path) -> ScenarioConfig:
    """Read a scenario from JSON or from ``key=value`` lines."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return ScenarioConfig.from_dict(json.loads(text))
    types = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _parse_value(raw)
    return ScenarioConfig.from_dict(out)


def _parse_value(raw: str):
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null", ""):
        return None
    if "," in raw:
        return tuple(int(v) for v in raw.split(",") if v.strip())
    for conv in (int, float):
        try:
            return conv(raw)
        except ValueError:
            pass
    return raw


@dataclass
class NodeState:
    id: int
    position: tuple
    role: Role
    flow_table: dict = field(default_factory=dict)
    pending_requests: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class SimTrace:
    delivery_rate: MetricSeries
    control_overhead: MetricSeries
    attack_onset_index: int
    per_window_counts: tuple
    attackers: tuple = ()
    seed: int = 0
    attack_kind: AttackKind = AttackKind.NONE

    def series(self, kind: MetricKind) -> MetricSeries:
        return self.delivery_rate if MetricKind(kind) is MetricKind.DELIVERY_RATE else self.control_overhead

    def __eq__(self, other):
        if not isinstance(other, SimTrace):
            return NotImplemented
        return (
            self.delivery_rate == other.delivery_rate
            and self.control_overhead == other.control_overhead
            and self.attack_onset_index == other.attack_onset_index
            and self.per_window_counts == other.per_window_counts
            and self.attackers == other.attackers
        )


def attacker_count(cfg: ScenarioConfig) -> int:
    """``round(fraction * nodes)`` with halves rounded up, at least one."""
    return max(1, int(math.floor(cfg.attacker_fraction * cfg.node_count + 0.5)))


def grid_neighbors(side: int, eight: bool = False) -> list[list[int]]:
    steps = [(-1, 0), (0, -1), (0, 1), (1, 0)]
    if eight:
        steps += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    out = []
    for r in range(side):
        for c in range(side):
            nbrs = [
                (r + dr) * side + (c + dc)
                for dr, dc in steps
                if 0 <= r + dr < side and 0 <= c + dc < side
            ]
            out.append(sorted(nbrs))
    return out


def infrastructure(side: int) -> tuple[int, int, int]:
    """Controller, data sink and management sink ids (one grid corner)."""
    return 0, 1, side


def select_attackers(cfg: ScenarioConfig, rng: random.Random) -> tuple[int, ...]:
    """Uniform choice of attacker ids among plain nodes."""
    if cfg.attack_kind is AttackKind.NONE:
        return ()
    if cfg.attacker_fraction <= 0:
        raise ConfigError("attacker_fraction must be positive for an attack")
    infra = set(infrastructure(cfg.side))
    excluded = set(infra)
    if cfg.exclude_near_infrastructure:
        nbrs = grid_neighbors(cfg.side, cfg.eight_connected)
        for v in infra:
            excluded.update(nbrs[v])
    eligible = [v for v in range(cfg.node_count) if v not in excluded]
    n = attacker_count(cfg)
    if n > len(eligible):
        raise ConfigError(f"need {n} attackers but only {len(eligible)} eligible nodes")
    return tuple(sorted(rng.sample(eligible, n)))


def bfs_tree(adj, root: int, n: int) -> tuple[list, list]:
    """Parents and hop distances of a BFS from ``root``; ties go to the lowest id."""
    parent = [None] * n
    dist = [-1] * n
    dist[root] = 0
    q = deque([root])
    while q:
        u = q.popleft()
        for w in sorted(adj[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = u
                q.append(w)
    return parent, dist


class Simulation:
    """One replication. Build, then call :meth:`run`."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        n = cfg.node_count
        side = cfg.side
        self.n = n
        self.rng = random.Random(cfg.seed)
        self.attack_rng = random.Random(f"{cfg.seed}:attack")
        self.ctrl, self.sink, self.msink = infrastructure(side)
        if cfg.attack_kind is AttackKind.NONE:
            attackers = ()
        elif cfg.attackers is not None:
            attackers = tuple(sorted(cfg.attackers))
            if set(attackers) & {self.ctrl, self.sink, self.msink}:
                raise ConfigError("controller and sinks cannot be attackers")
        else:
            attackers = select_attackers(cfg, random.Random(f"{cfg.seed}:attackers"))
        self.attackers = attackers
        self.is_attacker = [False] * n
        for a in attackers:
            self.is_attacker[a] = True

        self.nbrs = grid_neighbors(side, cfg.eight_connected)
        self.nbr_sets = [set(x) for x in self.nbrs]
        roles = {self.ctrl: Role.CONTROLLER, self.sink: Role.DATA_SINK, self.msink: Role.MANAGEMENT_SINK}
        self.nodes = [
            NodeState(v, divmod(v, side), roles.get(v, Role.ATTACKER if self.is_attacker[v] else Role.PLAIN))
            for v in range(n)
        ]
        self.sources = [v for v in range(n) if v not in roles]

        parent, dist = bfs_tree(self.nbrs, self.ctrl, n)
        self.ctrl_dist = dist
        # relays strictly between a node and the controller, in travel order
        self.ctrl_relays = []
        for v in range(n):
            path = []
            u = parent[v]
            while u is not None and u != self.ctrl:
                path.append(u)
                u = parent[u]
            self.ctrl_relays.append(path)

        self.p_hop = cfg.tx_success * (1.0 - cfg.link_loss)
        self.ttl = 2 * (2 * (side - 1))
        self.onset = cfg.attack_onset
        self.attack_active = False

        nw = cfg.n_windows
        self.sent = np.zeros(nw, dtype=np.int64)
        self.received = np.zeros(nw, dtype=np.int64)
        self.control = np.zeros(nw, dtype=np.int64)

        # controller state
        self.claims = [dict() for _ in range(n)]
        self.routes = [None] * n
        self.rule_until = [-math.inf] * n

        # piecewise-constant interference level; own streams so that it does
        # not perturb the traffic draws
        radio = random.Random(f"{cfg.seed}:radio")
        self.radio_np = np.random.default_rng(radio.getrandbits(64))
        self.if_times = [0.0]
        self.if_levels = [radio.uniform(0.0, cfg.interference_max)]
        while self.if_times[-1] < cfg.duration:
            self.if_times.append(self.if_times[-1] + radio.expovariate(1.0 / cfg.interference_hold))
            self.if_levels.append(radio.uniform(0.0, cfg.interference_max))

        self._queue = []
        self._seq = 0
        self._next_flow = 1

    # event plumbing -----------------------------------------------------

    def _push(self, t, kind, a=None, b=None, c=None):
        if t < self.cfg.duration:
            heapq.heappush(self._queue, (t, self._seq, kind, a, b, c))
            self._seq += 1

    def _interval(self, period):
        j = self.cfg.jitter
        return period * (1.0 + j * (2.0 * self.rng.random() - 1.0))

    def _count_control(self, t, hops):
        if hops:
            q = self.if_levels[bisect.bisect_right(self.if_times, t) - 1]
            if q > 0.0:
                hops += int(self.radio_np.negative_binomial(hops, 1.0 - q))
            w = int(t // self.cfg.window)
            if w < self.control.size:
                self.control[w] += hops

    def _control_trip(self, t, hops):
        """Send one control packet over ``hops`` hops; returns hops delivered."""
        p = self.p_hop
        rnd = self.rng.random
        done = 0
        while done < hops:
            done += 1
            if rnd() >= p:
                self._count_control(t, done)
                return done, False
        self._count_control(t, hops)
        return hops, True

    # flow tables ---------------------------------------------------------

    def _lookup(self, v, flow, t):
        table = self.nodes[v].flow_table
        entry = table.get(flow)
        if entry is None:
            return None
        if entry[1] <= t:
            del table[flow]
            return None
        entry[2] = t
        return entry[0]

    def _install(self, v, flow, next_hop, t) -> bool:
        table = self.nodes[v].flow_table
        # jittered lifetimes keep expiries from staying phase-locked after bootstrap
        expiry = t + self._interval(self.cfg.rule_ttl)
        if flow in table:
            table[flow] = [next_hop, expiry, t, 0]
            return True
        cap = self.cfg.flow_table_capacity
        if cap is not None and len(table) >= cap:
            for f in [f for f, e in table.items() if e[1] <= t]:
                del table[f]
            if len(table) >= cap:
                if not self.cfg.lru_eviction:
                    return False
                del table[min(table, key=lambda f: table[f][2])]
        table[flow] = [next_hop, expiry, t, 0]
        return True

    # data plane ----------------------------------------------------------

    def _forward(self, v, flow, ttl, t, w_sent):
        """Walk a packet from node ``v`` until delivery, loss or a table miss."""
        sink = self.sink
        nbr_sets = self.nbr_sets
        rnd = self.rng.random
        p = self.p_hop
        hop_delay = self.cfg.hop_delay
        while True:
            if v == sink and flow == LEGIT_FLOW:
                self.received[w_sent] += 1
                return
            if ttl <= 0:
                return
            nh = self._lookup(v, flow, t)
            if nh is None:
                self._miss(v, flow, ttl, t, w_sent)
                return
            if nh == DROP:
                return
            if nh not in nbr_sets[v]:
                # MAC gives up on an unreachable next hop: the rule is
                # discarded so the next packet asks the controller again
                table = self.nodes[v].flow_table
                table[flow][3] += 1
                if table[flow][3] >= self.cfg.repair_after:
                    del table[flow]
                return
            if rnd() >= p:
                return
            v = nh
            ttl -= 1
            t += hop_delay

    def _miss(self, v, flow, ttl, t, w_sent):
        pending = self.nodes[v].pending_requests
        q = pending.get(flow)
        if q is not None:
            if len(q) < self.cfg.queue_capacity:
                q.append((ttl, w_sent))
            return
        pending[flow] = [(ttl, w_sent)]
        hops = self.ctrl_dist[v]
        _, ok = self._control_trip(t, hops)
        if not ok:
            self._push(t + self.cfg.request_timeout, _TIMEOUT, v, flow)
            return
        t_ctrl = t + hops * self.cfg.hop_delay
        nh = self._controller_rule(v, flow, t_ctrl)
        _, ok = self._control_trip(t_ctrl, hops)
        if not ok:
            self._push(t + self.cfg.request_timeout, _TIMEOUT, v, flow)
            return
        self._push(t_ctrl + hops * self.cfg.hop_delay, _RULE, v, flow, nh)

    def _controller_rule(self, v, flow, t):
        if flow != LEGIT_FLOW:
            return DROP
        nh = self.routes[v]
        if nh is not None:
            self.rule_until[v] = t + self.cfg.rule_ttl
        return nh

    def _on_rule(self, t, v, flow, nh):
        pending = self.nodes[v].pending_requests.pop(flow, ())
        if nh is None or not self._install(v, flow, nh, t):
            return
        for ttl, w_sent in pending:
            self._forward(v, flow, ttl, t, w_sent)

    def _on_data(self, t, v):
        w = int(t // self.cfg.window)
        self.sent[w] += 1
        self._forward(v, LEGIT_FLOW, self.ttl, t, w)
        self._push(t + self._interval(self.cfg.data_period), _DATA, v)

    # control plane -------------------------------------------------------

    def _on_report(self, t, v):
        claimed = self.nbrs[v]
        hops = self.ctrl_dist[v]
        if hops == 0:
            self._on_report_arrive(t, v, claimed)
        else:
            relays = self.ctrl_relays[v]
            rnd = self.rng.random
            p = self.p_hop
            lost = False
            for i in range(hops):
                if rnd() >= p:
                    self._count_control(t, i + 1)
                    lost = True
                    break
                # relay i receives the report before forwarding hop i+1
                if i < len(relays) and self.attack_active and self.is_attacker[relays[i]]:
                    claimed = self.apply_fni(v, claimed)
            if not lost:
                self._count_control(t, hops)
                self._push(t + hops * self.cfg.hop_delay, _REPORT_ARRIVE, v, tuple(claimed))
        self._push(t + self._interval(self.cfg.neighbor_report_period), _REPORT, v)

    def apply_fni(self, v, claimed):
        """Relay-side rewrite of node ``v``'s neighbor list, or ``claimed`` unchanged."""
        cfg = self.cfg
        if cfg.attack_kind is not AttackKind.FNI:
            return claimed
        rng = self.attack_rng
        if rng.random() >= cfg.fni_tamper_prob:
            return claimed
        real = self.nbr_sets[v]
        fake = set()
        while len(fake) < cfg.fni_fake_neighbors:
            x = rng.randrange(self.n)
            if x != v and x not in real:
                fake.add(x)
        return sorted(fake)

    def _on_report_arrive(self, t, v, claimed):
        claims = self.claims[v]
        changed = False
        horizon = t - self.cfg.neighbor_timeout
        for x in [x for x, seen in claims.items() if seen < horizon]:
            del claims[x]
            changed = True
        for x in claimed:
            if x not in claims:
                changed = True
            claims[x] = t
        if changed:
            self._recompute_routes(t)

    def _on_purge(self, t):
        horizon = t - self.cfg.neighbor_timeout
        changed = False
        for claims in self.claims:
            stale = [x for x, seen in claims.items() if seen < horizon]
            for x in stale:
                del claims[x]
            changed = changed or bool(stale)
        if changed:
            self._recompute_routes(t)
        self._push(t + self.cfg.neighbor_report_period / 2, _PURGE)

    def _recompute_routes(self, t):
        adj = [set() for _ in range(self.n)]
        for u, claims in enumerate(self.claims):
            for x in claims:
                adj[u].add(x)
                adj[x].add(u)
        parent, _ = bfs_tree(adj, self.sink, self.n)
        old = self.routes
        self.routes = parent
        for v in range(self.n):
            nh = parent[v]
            if nh != old[v] and nh is not None and self.rule_until[v] > t:
                self._push_rule(t, v, nh)

    def _push_rule(self, t, v, nh):
        hops = self.ctrl_dist[v]
        _, ok = self._control_trip(t, hops)
        if ok:
            self.rule_until[v] = t + self.cfg.rule_ttl
            self._push(t + hops * self.cfg.hop_delay, _RULE, v, LEGIT_FLOW, nh)

    # attacks -------------------------------------------------------------

    def apply_fdff(self, t, a):
        """Attacker ``a`` hands every neighbor a packet with a fresh flow id."""
        flow = self._next_flow
        self._next_flow += 1
        rnd = self.rng.random
        for nb in self.nbrs[a]:
            if rnd() < self.p_hop:
                self._forward(nb, flow, self.ttl, t + self.cfg.hop_delay, -1)
        self._push(t + self._interval(self.cfg.fdff_period), _FDFF, a)

    # main loop -----------------------------------------------------------

    def run(self) -> SimTrace:
        cfg = self.cfg
        for v in self.sources:
            self._push(self.rng.random() * cfg.data_period, _DATA, v)
        for v in range(self.n):
            self._push(self.rng.random() * cfg.neighbor_report_period, _REPORT, v)
        self._push(cfg.neighbor_report_period / 2, _PURGE)
        if cfg.attack_kind is AttackKind.FDFF:
            for a in self.attackers:
                self._push(self.onset + self.attack_rng.random() * cfg.fdff_period, _FDFF, a)

        queue = self._queue
        pop = heapq.heappop
        while queue:
            t, _, kind, a, b, c = pop(queue)
            if not self.attack_active and t >= self.onset:
                self.attack_active = True
            if kind == _DATA:
                self._on_data(t, a)
            elif kind == _REPORT:
                self._on_report(t, a)
            elif kind == _REPORT_ARRIVE:
                self._on_report_arrive(t, a, b)
            elif kind == _RULE:
                self._on_rule(t, a, b, c)
            elif kind == _TIMEOUT:
                self.nodes[a].pending_requests.pop(b, None)
            elif kind == _FDFF:
                self.apply_fdff(t, a)
            elif kind == _PURGE:
                self._on_purge(t)
        return self._trace()

    def _trace(self) -> SimTrace:
        cfg = self.cfg
        sent = self.sent
        rate = np.divide(self.received, sent, out=np.zeros(sent.size), where=sent > 0)
        counts = tuple(
            (int(s), int(r), int(c)) for s, r, c in zip(sent, self.received, self.control)
        )
        return SimTrace(
            delivery_rate=MetricSeries(MetricKind.DELIVERY_RATE, rate, cfg.window),
            control_overhead=MetricSeries(MetricKind.CONTROL_OVERHEAD, self.control.astype(float), cfg.window),
            attack_onset_index=cfg.onset_index,
            per_window_counts=counts,
            attackers=self.attackers,
            seed=cfg.seed,
            attack_kind=cfg.attack_kind,
        )


def simulate(cfg: ScenarioConfig) -> SimTrace:
    return Simulation(cfg).run()


@dataclass(frozen=True)
class AttackImpact:
    control_ratio: float
    delivery_drop_points: float


def attack_impact(trace: SimTrace, discard: int = 15, settle: int = 10) -> AttackImpact:
    """Post/pre control ratio and delivery drop in percentage points.

    Pre-attack windows start after the bootstrap prefix; post-attack windows
    skip the first ``settle`` windows after onset.
    """
    on = trace.attack_onset_index
    d = trace.delivery_rate.values
    c = trace.control_overhead.values
    return AttackImpact(
        control_ratio=float(c[on + settle :].mean() / c[discard:on].mean()),
        delivery_drop_points=float(100.0 * (d[discard:on].mean() - d[on + settle :].mean())),
    )


# trace files -------------------------------------------------------------

def trace_paths(directory, stem: str) -> dict:
    directory = Path(directory)
    return {
        MetricKind.DELIVERY_RATE: directory / f"{stem}_delivery_rate.csv",
        MetricKind.CONTROL_OVERHEAD: directory / f"{stem}_control_overhead.csv",
        "meta": directory / f"{stem}.meta.json",
    }


def write_trace(trace: SimTrace, cfg: ScenarioConfig, directory, stem: str) -> dict:
    paths = trace_paths(directory, stem)
    write_csv(trace.delivery_rate, paths[MetricKind.DELIVERY_RATE])
    write_csv(trace.control_overhead, paths[MetricKind.CONTROL_OVERHEAD])
    meta = {
        "attack_onset_index": trace.attack_onset_index,
        "seed": trace.seed,
        "attack_kind": trace.attack_kind.value,
        "attackers": list(trace.attackers),
        "scenario": cfg.to_dict(),
    }
    paths["meta"].write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return paths


def read_trace_meta(path) -> dict:
    meta = json.loads(Path(path).read_text())
    for key in ("attack_onset_index", "seed"):
        if key not in meta:
            raise ValueError(f"{path}: meta file lacks {key!r}")
    return meta


def read_trace_series(directory, stem: str, kind: MetricKind, window: float = 120.0) -> MetricSeries:
    return read_csv(trace_paths(directory, stem)[MetricKind(kind)], MetricKind(kind), window)
