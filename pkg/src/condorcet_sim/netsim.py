"""Seeded discrete-event simulation of clients, the external network and gossip.

Time is measured in mean generation intervals. Each random quantity is
drawn from its own counter-based stream keyed by (seed, purpose), so a run
is a pure function of its config.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .attack import DEFAULT_GAP, AttackPlan, make_plan, pause_window, schedule
from .model import LocalOrdering, Origin, Transaction, ground_truth_order

_PURPOSES = {"generation": 1, "external": 2, "reorder": 3, "internal": 4, "ids": 5, "keys": 6}

DIRECT = "direct"
GOSSIP = "gossip"


class ConfigError(ValueError):
    pass


def derive_seed(*parts: int) -> int:
    """64-bit seed from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def stream(seed: int, purpose: str) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, _PURPOSES[purpose]])))


def exponential(gen: np.random.Generator, mean: float, size=None):
    """Inverse-CDF exponential sample."""
    u = gen.random(size)
    return -mean * np.log1p(-u)


@dataclass(frozen=True)
class AttackConfig:
    kind: str = "two_tx"
    pause: float = 10.0
    clones: int = 1
    gap: float = DEFAULT_GAP
    start: float = 0.0

    def plan(self, n: int) -> AttackPlan:
        return make_plan(self.kind, n, self.pause, self.clones)


@dataclass(frozen=True)
class SimConfig:
    n: int = 21
    r: float = 0.1
    r_internal: float = 0.1
    honest_count: int = 20
    reorder_p: float = 0.0
    broadcast: bool = False
    seed: int = 0
    attack: Optional[AttackConfig] = None
    orderings_used: Optional[int] = None
    honest_offset: float = 0.0
    opaque_ids: bool = True
    key_pool: int = 1
    adversary_shares_keys: bool = False
    gen_mean: float = 1.0

    def validate(self):
        finite = ("r", "r_internal", "reorder_p", "honest_offset", "gen_mean")
        for name in finite:
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.n < 3:
            raise ConfigError("n must be >= 3")
        if not self.r > 0:
            raise ConfigError("r must be > 0")
        if self.broadcast and not self.r_internal > 0:
            raise ConfigError("r_internal must be > 0 when broadcasting")
        if not 0 <= self.reorder_p <= 0.5:
            raise ConfigError("reorder_p must lie in [0, 0.5]")
        if self.honest_count < 0:
            raise ConfigError("honest_count must be >= 0")
        if self.honest_offset < 0:
            raise ConfigError("honest_offset must be >= 0")
        if self.key_pool < 1:
            raise ConfigError("key_pool must be >= 1")
        if self.orderings_used is not None and not 1 <= self.orderings_used <= self.n:
            raise ConfigError("orderings_used must lie in [1, n]")
        if self.attack is not None:
            a = self.attack
            if not (math.isfinite(a.pause) and a.pause > 0):
                raise ConfigError("attack pause must be finite and > 0")
            if not (math.isfinite(a.gap) and a.gap > 0):
                raise ConfigError("attack gap must be finite and > 0")
            if not (math.isfinite(a.start) and a.start >= 0):
                raise ConfigError("attack start must be finite and >= 0")
            if a.clones < 1:
                raise ConfigError("clones must be >= 1")
            try:
                a.plan(self.n)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc


@dataclass
class SimResult:
    config: SimConfig
    registry: tuple
    orderings: tuple
    delivery_log: list
    labels: dict = field(default_factory=dict)  # adversarial id -> plan label
    plan: Optional[AttackPlan] = None
    window: Optional[tuple] = None

    @property
    def by_id(self) -> dict:
        return {tx.id: tx for tx in self.registry}

    @property
    def honest_ids(self) -> list:
        return [tx.id for tx in self.registry if tx.honest]

    @property
    def adversarial_ids(self) -> list:
        return [tx.id for tx in self.registry if not tx.honest]

    @property
    def ground_truth(self) -> list:
        return ground_truth_order(self.registry, self.honest_ids)

    def used_orderings(self, orderings=None) -> list:
        orderings = list(self.orderings if orderings is None else orderings)
        k = self.config.orderings_used
        return orderings if k is None else orderings[:k]

    def projected(self, orderings=None) -> list:
        adv = set(self.adversarial_ids)
        return [o.without(adv) for o in (self.orderings if orderings is None else orderings)]

    def in_pause_window(self) -> list:
        if self.window is None:
            return []
        lo, hi = self.window
        return [tx.id for tx in self.registry if tx.honest and lo < tx.submit_time < hi]

    def delivery_csv(self) -> str:
        lines = ["node,tx,time,via"]
        lines += [f"{node},{tx},{t!r},{via}" for node, tx, t, via in self.delivery_log]
        return "\n".join(lines) + "\n"


def _tokens(gen: np.random.Generator, count: int, taken: set) -> list:
    out = []
    while len(out) < count:
        tok = format(int(gen.integers(0, 2**63)), "016x")
        if tok not in taken:
            taken.add(tok)
            out.append(tok)
    return out


def _swap_adjacent(seq: list, gen: np.random.Generator, p: float) -> list:
    seq = list(seq)
    if len(seq) < 2:
        return seq
    coins = gen.random(len(seq) - 1)
    for i, c in enumerate(coins):
        if c < p:
            seq[i], seq[i + 1] = seq[i + 1], seq[i]
    return seq


def run(config: SimConfig) -> SimResult:
    config.validate()
    n = config.n
    gen_stream = stream(config.seed, "generation")
    ext = stream(config.seed, "external")
    reorder = stream(config.seed, "reorder")
    internal = stream(config.seed, "internal")
    ids = stream(config.seed, "ids")
    keys = stream(config.seed, "keys")

    taken: set = set()
    registry = []
    events = []  # (time, tx id, node, via)

    m = config.honest_count
    times = config.honest_offset + np.concatenate(([0.0], np.cumsum(exponential(gen_stream, config.gen_mean, max(m - 1, 0)))))[:m]
    if config.opaque_ids:
        hids = _tokens(ids, m, taken)
    else:
        width = len(str(m))
        hids = [f"tx{i + 1:0{width}d}" for i in range(m)]
        taken.update(hids)
    pool = [f"k{j}" for j in range(config.key_pool)]
    picks = keys.integers(0, config.key_pool, size=m) if config.key_pool > 1 else np.zeros(m, dtype=int)
    for tid, t0, kidx in zip(hids, times, picks):
        registry.append(Transaction(tid, Origin.HONEST, float(t0), frozenset({pool[kidx]})))
        delays = exponential(ext, config.r, n)
        for node in range(n):
            events.append((float(t0 + delays[node]), tid, node, DIRECT))

    labels: dict = {}
    plan = window = None
    if config.attack is not None:
        a = config.attack
        plan = a.plan(n)
        window = pause_window(plan, a.start, a.gap)
        sends = schedule(plan, a.start, a.gap)
        names = plan.labels
        adv_ids = _tokens(ids, len(names), taken) if config.opaque_ids else list(names)
        if not config.opaque_ids and taken & set(adv_ids):
            raise ConfigError("attack labels collide with honest ids")
        label_to_id = dict(zip(names, adv_ids))
        labels = {v: k for k, v in label_to_id.items()}
        first_send = {}
        for s in sends:
            first_send.setdefault(s.tx, s.time)
        adv_keys = frozenset({pool[0]}) if config.adversary_shares_keys else frozenset({"adv"})
        for name in names:
            registry.append(
                Transaction(label_to_id[name], Origin.ADVERSARIAL, first_send[name], adv_keys, plan.clone_group(name))
            )
        bursts: dict = {}
        for s in sends:
            bursts.setdefault((s.phase, s.part), []).append(s)
        for phase in ("init", "finalize"):
            for part, members in enumerate(plan.partition.parts):
                burst = sorted(bursts.get((phase, part), []), key=lambda s: s.slot)
                if not burst:
                    continue
                send_at = {s.tx: s.time for s in burst}
                for node in sorted(members):
                    raw = np.sort(np.array([s.time for s in burst]) + exponential(ext, config.r, len(burst)))
                    order = _swap_adjacent([s.tx for s in burst], reorder, config.reorder_p)
                    prev = -math.inf
                    for slot, name in enumerate(order):
                        # FIFO slots; a swapped-forward tx still cannot arrive before it was sent
                        t = max(float(raw[slot]), send_at[name], prev)
                        prev = t
                        events.append((t, label_to_id[name], node, DIRECT))

    heapq.heapify(events)
    seen = [set() for _ in range(n)]
    sequences = [[] for _ in range(n)]
    log = []
    while events:
        t, tid, node, via = heapq.heappop(events)
        if tid in seen[node]:
            continue
        seen[node].add(tid)
        sequences[node].append(tid)
        log.append((node, tid, t, via))
        if config.broadcast and via == DIRECT:
            delays = exponential(internal, config.r_internal, n)
            for peer in range(n):
                if peer != node:
                    heapq.heappush(events, (t + float(delays[peer]), tid, peer, GOSSIP))

    orderings = tuple(LocalOrdering(i, seq) for i, seq in enumerate(sequences))
    return SimResult(config, tuple(registry), orderings, log, labels, plan, window)


def attack_run_pair(config: SimConfig) -> tuple:
    """One attacked run plus its orderings with the adversarial ids deleted."""
    if config.attack is None:
        raise ConfigError("attack_run_pair needs an attack in the config")
    result = run(config)
    return result, result.projected()
