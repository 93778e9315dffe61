import itertools
import random

import numpy as np
import pytest

from condorcet_sim.depgraph import WeightedTournament
from condorcet_sim.model import LocalOrdering
from condorcet_sim.netsim import AttackConfig, SimConfig

# attacked orderings of a three node committee, one node per part
THREE_NODE = [
    ["A", "B", "tx1", "tx2", "tx3"],
    ["B", "tx1", "tx2", "tx3", "A"],
    ["tx1", "tx2", "tx3", "A", "B"],
]

# a committee of three with negligible latency reproduces those orderings
THREE_NODE_CFG = SimConfig(n=3, r=0.001, honest_count=3, honest_offset=1.0, opaque_ids=False,
                         attack=AttackConfig("two_tx", pause=50.0), seed=3)


def orderings(seqs):
    return [LocalOrdering(i, s) for i, s in enumerate(seqs)]


@pytest.fixture
def three_node():
    return orderings(THREE_NODE)


def random_tournament(rng: random.Random, k: int, n_orderings: int = 5) -> WeightedTournament:
    """Tournament with random weights; each pair sums to ``n_orderings``."""
    verts = [f"v{i:02d}" for i in range(k)]
    weights = {}
    for u, v in itertools.combinations(verts, 2):
        a = rng.randint(0, n_orderings)
        weights[(u, v)] = a
        weights[(v, u)] = n_orderings - a
    return WeightedTournament.from_weights(verts, weights, n_orderings)


def reachability(adj: np.ndarray) -> np.ndarray:
    """Floyd-Warshall transitive closure, reflexive."""
    k = adj.shape[0]
    reach = adj.copy() | np.eye(k, dtype=bool)
    reach = [list(map(bool, row)) for row in reach]
    for m in range(k):
        for i in range(k):
            if reach[i][m]:
                for j in range(k):
                    if reach[m][j]:
                        reach[i][j] = True
    return np.array(reach)


def oracle_components(t: WeightedTournament) -> set:
    reach = reachability(np.array(t.adj))
    mutual = reach & reach.T
    return {frozenset(t.vertices[j] for j in np.flatnonzero(mutual[i])) for i in range(len(t))}


def is_strong(t: WeightedTournament) -> bool:
    return bool(reachability(np.array(t.adj)).all())


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    def _report(criterion: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def unanimous_honest_instance(rng: random.Random):
    """Orderings that all agree on the honest subset.

    Each node sees a rotation of (adversarial ids..., honest block), with
    some adversarial ids moved to random spots, which yields strongly
    connected tournaments often enough to sample from.
    """
    n = rng.choice([3, 4, 5, 7, 9])
    honest = [f"h{i}" for i in range(rng.randint(2, 8))]
    adv = [f"a{i}" for i in range(rng.randint(1, 4))]
    base = adv + [None]
    seqs = []
    for _ in range(n):
        r = rng.randrange(len(base))
        seq = []
        for x in base[r:] + base[:r]:
            seq.extend(honest if x is None else [x])
        for a in adv:
            if rng.random() < 0.3:
                seq.remove(a)
                seq.insert(rng.randint(0, len(seq)), a)
        seqs.append(seq)
    return orderings(seqs), honest
