"""Core domain types: transactions, node orderings, partitions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class InconsistentRegistry(ValueError):
    """An id was referenced that the transaction registry does not know."""


class Origin(str, enum.Enum):
    HONEST = "honest"
    ADVERSARIAL = "adversarial"


@dataclass(frozen=True)
class Transaction:
    id: str
    origin: Origin
    submit_time: float
    keys: frozenset = field(default_factory=frozenset)
    clone_group: Optional[str] = None

    def __post_init__(self):
        if not math.isfinite(self.submit_time) or self.submit_time < 0:
            raise ValueError(f"submit_time must be finite and >= 0, got {self.submit_time!r}")
        object.__setattr__(self, "keys", frozenset(self.keys))

    @property
    def honest(self) -> bool:
        return self.origin is Origin.HONEST

    def to_record(self) -> str:
        """Line record ``id,origin,submit_time,keys,clone_group`` for CSV dumps."""
        keys = ";".join(sorted(self.keys))
        return f"{self.id},{self.origin.value},{self.submit_time!r},{keys},{self.clone_group or ''}"

    @classmethod
    def from_record(cls, line: str) -> "Transaction":
        tid, origin, t, keys, group = line.rstrip("\n").split(",")
        return cls(
            id=tid,
            origin=Origin(origin),
            submit_time=float(t),
            keys=frozenset(k for k in keys.split(";") if k),
            clone_group=group or None,
        )


TRANSACTION_HEADER = "id,origin,submit_time,keys,clone_group"


@dataclass(frozen=True)
class LocalOrdering:
    node: int
    sequence: tuple

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if len(set(self.sequence)) != len(self.sequence):
            raise ValueError(f"node {self.node}: duplicate ids in local ordering")

    def __len__(self):
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    def without(self, ids) -> "LocalOrdering":
        ids = set(ids)
        return LocalOrdering(self.node, tuple(t for t in self.sequence if t not in ids))

    def reversed(self) -> "LocalOrdering":
        return LocalOrdering(self.node, self.sequence[::-1])


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        seen = set()
        for p in parts:
            if not p:
                raise ValueError("partition parts must be nonempty")
            if seen & p:
                raise ValueError("partition parts must be disjoint")
            seen |= p
        if seen != set(range(len(seen))):
            raise ValueError("partition must cover nodes 0..n-1")

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    def sizes(self) -> list:
        return [len(p) for p in self.parts]

    def part_of(self, node: int) -> int:
        for i, p in enumerate(self.parts):
            if node in p:
                return i
        raise KeyError(node)

    @classmethod
    def even(cls, n: int, k: int) -> "Partition":
        """Split nodes 0..n-1 into k contiguous parts whose sizes differ by at most one."""
        if n < k:
            raise ValueError(f"cannot split {n} nodes into {k} nonempty parts")
        base, extra = divmod(n, k)
        parts, start = [], 0
        for i in range(k):
            size = base + (1 if i < extra else 0)
            parts.append(range(start, start + size))
            start += size
        return cls(tuple(parts))


def ground_truth_order(registry: Iterable[Transaction], subset: Optional[Iterable[str]] = None) -> list:
    """Ids sorted by submit time, ties broken by id.

    If ``subset`` is given only those ids are returned; an id unknown to the
    registry raises :class:`InconsistentRegistry`.
    """
    by_id = {tx.id: tx for tx in registry}
    if subset is None:
        chosen = list(by_id.values())
    else:
        chosen = []
        for tid in subset:
            if tid not in by_id:
                raise InconsistentRegistry(f"unknown transaction id {tid!r}")
            chosen.append(by_id[tid])
    chosen.sort(key=lambda tx: (tx.submit_time, tx.id))
    return [tx.id for tx in chosen]


def honest_ids(registry: Sequence[Transaction]) -> list:
    return [tx.id for tx in registry if tx.honest]


def adversarial_ids(registry: Sequence[Transaction]) -> list:
    return [tx.id for tx in registry if not tx.honest]
