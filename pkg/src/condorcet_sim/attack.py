"""Condorcet attack plans, their transmission schedule, and the reversal adversary."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .model import LocalOrdering, Partition

DEFAULT_GAP = 0.01


@dataclass(frozen=True)
class AttackPlan:
    partition: Partition
    init: tuple  # per part, ids sent before the pause
    finalize: tuple  # per part, ids sent after the pause
    pause: float
    clones: int = 1
    kind: str = "custom"
    clone_of: tuple = ()  # (clone id, logical id) pairs

    def __post_init__(self):
        object.__setattr__(self, "init", tuple(tuple(s) for s in self.init))
        object.__setattr__(self, "finalize", tuple(tuple(s) for s in self.finalize))
        k = len(self.partition.parts)
        if len(self.init) != k or len(self.finalize) != k:
            raise ValueError("need one init and one finalize sequence per part")
        if not self.pause > 0:
            raise ValueError("pause must be positive")
        for i, (a, b) in enumerate(zip(self.init, self.finalize)):
            if len(set(a) | set(b)) != len(a) + len(b):
                raise ValueError(f"part {i}: an attack transaction is sent twice")

    @property
    def labels(self) -> list:
        """Adversarial ids in first-appearance order."""
        seen: dict = {}
        for seq in self.init + self.finalize:
            for tid in seq:
                seen.setdefault(tid, None)
        return list(seen)

    def clone_group(self, label: str) -> str:
        return dict(self.clone_of).get(label, label)


def two_tx_plan(n: int, pause: float) -> AttackPlan:
    if n < 3:
        raise ValueError("the two-transaction attack needs n >= 3")
    return AttackPlan(
        Partition.even(n, 3),
        init=(("A", "B"), ("B",), ()),
        finalize=((), ("A",), ("A", "B")),
        pause=pause,
        kind="two_tx",
    )


def four_tx_plan(n: int, pause: float) -> AttackPlan:
    if n < 4:
        raise ValueError("the four-transaction attack needs n >= 4")
    return AttackPlan(
        Partition.even(n, 4),
        init=(("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")),
        finalize=(("C", "D"), ("D", "A"), ("A", "B"), ("B", "C")),
        pause=pause,
        kind="four_tx",
    )


def clone_plan(plan: AttackPlan, k: int) -> AttackPlan:
    """Replace each logical id X by the run X1..Xk, keeping the pattern."""
    if k < 1:
        raise ValueError("clone count must be >= 1")
    if k == 1:
        return plan
    clone_of = tuple((f"{x}{c}", plan.clone_group(x)) for x in plan.labels for c in range(1, k + 1))

    def expand(seq):
        return tuple(f"{x}{c}" for x in seq for c in range(1, k + 1))

    return replace(
        plan,
        init=tuple(expand(s) for s in plan.init),
        finalize=tuple(expand(s) for s in plan.finalize),
        clones=plan.clones * k,
        clone_of=clone_of,
    )


def make_plan(kind: str, n: int, pause: float, clones: int = 1) -> AttackPlan:
    builders = {"two_tx": two_tx_plan, "four_tx": four_tx_plan}
    if kind not in builders:
        raise ValueError(f"unknown attack kind {kind!r}")
    return clone_plan(builders[kind](n, pause), clones)


@dataclass(frozen=True)
class Transmission:
    time: float
    part: int
    tx: str
    phase: str  # "init" | "finalize"
    slot: int  # position within its burst


def schedule(plan: AttackPlan, start_time: float = 0.0, gap: float = DEFAULT_GAP) -> list:
    """Expand a plan into timed transmissions, one per (part, tx).

    Parts transmit in parallel. Within a burst consecutive sends are ``gap``
    apart; the finalize bursts all begin at ``start_time + pause``.
    """
    if not gap > 0:
        raise ValueError("gap must be positive")
    out = []
    for phase, seqs, t0 in (("init", plan.init, start_time), ("finalize", plan.finalize, start_time + plan.pause)):
        for part, seq in enumerate(seqs):
            for slot, tid in enumerate(seq):
                out.append(Transmission(t0 + slot * gap, part, tid, phase, slot))
    out.sort(key=lambda tr: (tr.time, tr.part, tr.phase))
    return out


def pause_window(plan: AttackPlan, start_time: float = 0.0, gap: float = DEFAULT_GAP) -> tuple:
    """Open interval between the last initialization send and the first finalization send."""
    longest = max((len(s) for s in plan.init), default=0)
    return (start_time + max(longest - 1, 0) * gap, start_time + plan.pause)


def reverse_orderings(orderings: Sequence[LocalOrdering], adversarial: Iterable[int]) -> list:
    bad = set(adversarial)
    return [o.reversed() if o.node in bad else o for o in orderings]


def reversal_adversary_count(n: int) -> int:
    """Largest tolerated adversary: a quarter of the nodes, minus one."""
    return max(n // 4 - 1, 0)
