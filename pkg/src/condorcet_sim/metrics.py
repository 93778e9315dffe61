"""Evaluation quantities: cycle statistics, trapped transactions, success, accuracy."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Iterable, Optional, Sequence

from .attack import reverse_orderings
from .batchorder import order_tournament
from .depgraph import WeightedTournament, build_tournament, condorcet_cycles, scc_decompose
from .netsim import SimResult

CSV_COLUMNS = (
    "trial", "seed", "n", "r", "r_internal", "p", "tau", "scheme",
    "cycles", "txs_in_cycles", "trapped", "success_any", "success_all", "accuracy",
)


def pair_accuracy(final: Sequence, truth: Sequence) -> float:
    """Fraction of pairs in ``truth`` that keep their relative order in ``final``."""
    pos = {tid: i for i, tid in enumerate(final)}
    missing = [t for t in truth if t not in pos]
    if missing:
        raise KeyError(f"ids missing from final order: {missing[:5]}")
    m = len(truth)
    if m < 2:
        return 1.0
    ranks = [pos[t] for t in truth]
    # count inversions by merge sort
    inversions = _count_inversions(ranks)
    total = m * (m - 1) // 2
    return (total - inversions) / total


def _count_inversions(xs: list) -> int:
    if len(xs) < 2:
        return 0
    mid = len(xs) // 2
    left, right = xs[:mid], xs[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    left.sort()
    right.sort()
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            i += 1
        else:
            inv += len(left) - i
            j += 1
    return inv


def cycle_stats(t: WeightedTournament) -> tuple:
    sizes = [len(c) for c in condorcet_cycles(t)]
    return len(sizes), sizes, sum(sizes)


def trapped_between(attacked: WeightedTournament, baseline: WeightedTournament, honest: Iterable) -> set:
    """Honest ids inside a cycle of ``attacked`` but in no cycle of ``baseline``."""
    inside = set().union(*condorcet_cycles(attacked))
    before = set().union(*condorcet_cycles(baseline))
    return {h for h in honest if h in inside and h not in before}


def trapped_set(result: SimResult) -> set:
    if result.plan is None:
        raise ValueError("trapped transactions are only defined for attacked runs")
    attacked = build_tournament(result.used_orderings())
    baseline = build_tournament(result.used_orderings(result.projected()))
    return trapped_between(attacked, baseline, result.honest_ids)


def trapped_honest(result: SimResult) -> int:
    return len(trapped_set(result))


def success(result: SimResult, trapped: Optional[set] = None) -> tuple:
    """``(any, all)``: some honest tx trapped; every pause-window honest tx trapped."""
    trapped = trapped_set(result) if trapped is None else trapped
    return len(trapped) >= 1, set(result.in_pause_window()) <= trapped


@dataclass
class TrialMetrics:
    trial: int
    seed: int
    n: int
    r: float
    r_internal: float
    p: float
    tau: float
    scheme: str
    cycles: int
    txs_in_cycles: int
    trapped: int
    success_any: bool
    success_all: bool
    accuracy: float
    setting: str = ""

    def row(self) -> list:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool):
                out.append("1" if v else "0")
            elif isinstance(v, float):
                out.append("" if math.isnan(v) else repr(v))
            else:
                out.append(str(v))
        return out


def evaluate(
    result: SimResult,
    schemes: Sequence[str] = (),
    trial: int = 0,
    accuracy_scope: str = "all",
    reversed_nodes: Iterable[int] = (),
    setting: str = "",
) -> list:
    """Per-scheme metric rows for one simulated trial.

    With ``reversed_nodes`` the listed nodes report their orderings backwards
    and trapped counts compare against the truthful reports. With an attack,
    trapped counts compare against the adversary-free projection.
    ``accuracy_scope`` is ``all`` (every honest pair) or ``cycles`` (honest
    pairs that ended up inside a Condorcet cycle).
    """
    cfg = result.config
    reversed_nodes = list(reversed_nodes)
    honest = result.honest_ids
    orderings = result.used_orderings()
    if reversed_nodes:
        reported = result.used_orderings(reverse_orderings(result.orderings, reversed_nodes))
        tournament = build_tournament(reported)
        baseline = build_tournament(orderings)
    else:
        tournament = build_tournament(orderings)
        baseline = build_tournament(result.used_orderings(result.projected())) if result.plan else None

    cond = scc_decompose(tournament)
    count, sizes, in_cycles = cycle_stats(tournament)
    trapped = trapped_between(tournament, baseline, honest) if baseline is not None else set()
    if result.plan is not None:
        any_ok, all_ok = success(result, trapped)
    else:
        any_ok, all_ok = len(trapped) >= 1, False

    if accuracy_scope == "all":
        truth = result.ground_truth
    elif accuracy_scope == "cycles":
        cyc = set().union(*(set(c) for c in cond.components if len(c) > 1))
        truth = [h for h in result.ground_truth if h in cyc]
    else:
        raise ValueError(f"unknown accuracy scope {accuracy_scope!r}")

    registry = result.by_id
    tau = cfg.attack.pause if cfg.attack is not None else float("nan")
    base = dict(
        trial=trial, seed=cfg.seed, n=cfg.n, r=cfg.r,
        r_internal=cfg.r_internal,
        p=cfg.reorder_p, tau=tau, cycles=count, txs_in_cycles=in_cycles,
        trapped=len(trapped), success_any=any_ok, success_all=all_ok, setting=setting,
    )
    if not schemes:
        return [TrialMetrics(scheme="-", accuracy=float("nan"), **base)]
    rows = []
    for scheme in schemes:
        final = order_tournament(tournament, scheme, registry, cond)
        rows.append(TrialMetrics(scheme=scheme, accuracy=pair_accuracy(final, truth), **base))
    return rows
