"""Linearising Condorcet batches and assembling the final order.

Every scheme takes a tournament restricted to one strongly connected
component and returns its vertices as a list. ``final_ordering`` runs the
whole pipeline: tournament, condensation, then a scheme per component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .depgraph import NotATournament, WeightedTournament, build_tournament, scc_decompose
from .model import Transaction


class NotStronglyConnected(ValueError):
    pass


ARBITRARY = "arbitrary"
WEAKEST_LINK = "weakest"


@dataclass(frozen=True)
class BatchScheme:
    kind: str  # alphabetical | hamiltonian | ranked-pairs | post-decryption
    break_policy: Optional[str] = None
    inner: Optional["BatchScheme"] = None

    def __post_init__(self):
        if self.kind == "post-decryption":
            if self.inner is None or self.inner.kind == "post-decryption":
                raise ValueError("post-decryption needs a non post-decryption inner scheme")
        if self.kind == "hamiltonian" and self.break_policy not in (ARBITRARY, WEAKEST_LINK):
            raise ValueError(f"unknown break policy {self.break_policy!r}")

    @property
    def name(self) -> str:
        if self.kind == "hamiltonian":
            return f"hamiltonian-{self.break_policy}"
        if self.kind == "post-decryption":
            return f"post-decryption:{self.inner.name}"
        return self.kind

    @classmethod
    def parse(cls, name: str) -> "BatchScheme":
        name = name.strip()
        if name == "alphabetical":
            return cls("alphabetical")
        if name == "ranked-pairs":
            return cls("ranked-pairs")
        if name == "hamiltonian-arbitrary":
            return cls("hamiltonian", ARBITRARY)
        if name == "hamiltonian-weakest":
            return cls("hamiltonian", WEAKEST_LINK)
        if name.startswith("post-decryption:"):
            return cls("post-decryption", inner=cls.parse(name.split(":", 1)[1]))
        raise ValueError(f"unknown batch scheme {name!r}")


SCHEME_NAMES = ("alphabetical", "hamiltonian-arbitrary", "hamiltonian-weakest", "ranked-pairs")


def order_alphabetical(component) -> list:
    return sorted(component)


def _check_tournament(adj: np.ndarray):
    k = adj.shape[0]
    both = adj & adj.T
    either = adj | adj.T
    off = ~np.eye(k, dtype=bool)
    if both.any() or not either[off].all() or adj.diagonal().any():
        raise NotATournament("every pair of distinct vertices needs exactly one edge")


def _path_indices(adj: np.ndarray) -> list:
    path: list = []
    for v in range(adj.shape[0]):
        if not path or adj[path[-1], v]:
            path.append(v)
            continue
        # path[-1] -> v fails, so some gap u -> v -> w exists, or v beats path[0]
        for pos in range(1, len(path)):
            if adj[path[pos - 1], v] and adj[v, path[pos]]:
                path.insert(pos, v)
                break
        else:
            path.insert(0, v)
    return path


def hamiltonian_path(t: WeightedTournament) -> list:
    """Insertion construction over vertices in id order.

    A vertex is appended when the current tail beats it, otherwise it goes
    into the earliest gap ``u -> v -> w``, otherwise in front.
    """
    _check_tournament(t.adj)
    return [t.vertices[i] for i in _path_indices(t.adj)]


def _cycle_indices(adj: np.ndarray) -> list:
    """Hamiltonian cycle of a strong tournament on >= 3 vertices.

    Seeds with a cycle closed from a Hamiltonian path, then grows it: a
    vertex with both in- and out-neighbours on the cycle is spliced between
    some c_i -> x -> c_{i+1}; when none remains, an edge u -> d from the
    cycle-dominated side to the dominating side replaces the last cycle
    vertex, lengthening the cycle by one.
    """
    k = adj.shape[0]
    path = _path_indices(adj)
    first = path[0]
    closing = [j for j in range(2, k) if adj[path[j], first]]
    if not closing:
        raise NotStronglyConnected("tournament is not strongly connected")
    cycle = path[: closing[-1] + 1]
    while len(cycle) < k:
        on = np.zeros(k, dtype=bool)
        on[cycle] = True
        rest = [x for x in range(k) if not on[x]]
        spliced = False
        for x in rest:
            into = adj[cycle, x]  # c -> x
            if into.any() and not into.all():
                m = len(cycle)
                for i in range(m):
                    if adj[cycle[i], x] and adj[x, cycle[(i + 1) % m]]:
                        cycle.insert(i + 1, x)
                        break
                spliced = True
                break
        if spliced:
            continue
        dominated = [x for x in rest if adj[cycle, x].all()]
        dominating = [x for x in rest if not adj[cycle, x].any()]
        bridge = next(((u, d) for u in dominated for d in dominating if adj[u, d]), None)
        if bridge is None:
            raise NotStronglyConnected("tournament is not strongly connected")
        cycle = cycle[:-1] + list(bridge)
    return cycle


def hamiltonian_cycle(t: WeightedTournament) -> list:
    """Vertices of a Hamiltonian cycle, listed from the vertex after the closing edge."""
    _check_tournament(t.adj)
    if len(t) < 3:
        raise NotStronglyConnected("a tournament cycle needs at least 3 vertices")
    return [t.vertices[i] for i in _cycle_indices(t.adj)]


def order_hamiltonian(t: WeightedTournament, break_policy: str = ARBITRARY) -> list:
    k = len(t)
    if k <= 2:
        return hamiltonian_path(t)
    cycle = _cycle_indices(t.adj)
    m = len(cycle)
    cycle_edges = [(cycle[i], cycle[(i + 1) % m]) for i in range(m)]
    if break_policy == ARBITRARY:
        # vertex indices follow id order, so index 0 is the smallest id
        cut = next(i for i, (_, v) in enumerate(cycle_edges) if v == 0)
    elif break_policy == WEAKEST_LINK:
        cut = min(range(m), key=lambda i: (t.weight[cycle_edges[i]], cycle_edges[i]))
    else:
        raise ValueError(f"unknown break policy {break_policy!r}")
    start = (cut + 1) % m
    return [t.vertices[cycle[(start + i) % m]] for i in range(m)]


def ranked_pairs_indices(weight: np.ndarray, adj: np.ndarray, check=False) -> list:
    """Lock edges by descending weight, skipping any that closes a cycle.

    ``reach[v]`` is a bitmask of everything the locked edges let ``v`` reach;
    a candidate ``u -> v`` is skipped when ``v`` already reaches ``u``.
    """
    k = adj.shape[0]
    rows, cols = np.nonzero(adj)
    wts = weight[rows, cols]
    # descending weight, then ascending source, then ascending target
    order = np.lexsort((cols, rows, -wts))
    reach = [0] * k
    for e in order:
        u, v = int(rows[e]), int(cols[e])
        if reach[v] >> u & 1:
            continue
        gained = reach[v] | (1 << v)
        ubit = 1 << u
        for x in range(k):
            if x == u or reach[x] & ubit:
                reach[x] |= gained
        if check:
            assert not any(reach[x] >> x & 1 for x in range(k)), "locked relation became cyclic"
    # locked closure is a total order: earlier vertices reach more
    return sorted(range(k), key=lambda x: -bin(reach[x]).count("1"))


def order_ranked_pairs(t: WeightedTournament) -> list:
    return [t.vertices[i] for i in ranked_pairs_indices(t.weight, t.adj)]


def dependency_groups(component, registry: Mapping[str, Transaction]) -> list:
    """Connected components of the key-sharing relation, ordered by smallest member."""
    members = sorted(component)
    parent = {v: v for v in members}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    owner: dict = {}
    for v in members:
        for key in sorted(registry[v].keys):
            if key in owner:
                a, b = find(owner[key]), find(v)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[key] = v
    groups: dict = {}
    for v in members:
        groups.setdefault(find(v), []).append(v)
    return [set(groups[r]) for r in sorted(groups)]


def group_tournament(t: WeightedTournament, groups: Sequence) -> WeightedTournament:
    """Tournament over groups, labelled by least member id, with summed pairwise weights."""
    labels = [min(g) for g in groups]
    idx = [[t.index(v) for v in g] for g in groups]
    weights = {}
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            if a != b:
                weights[(labels[a], labels[b])] = int(t.weight[np.ix_(ia, ib)].sum())
    return WeightedTournament.from_weights(labels, weights, t.n_orderings)


def order_post_decryption(t: WeightedTournament, registry: Mapping[str, Transaction], inner: BatchScheme) -> list:
    groups = dependency_groups(t.vertices, registry)
    if len(groups) == 1:
        return order_component(t, inner, registry)
    by_label = {min(g): g for g in groups}
    group_order = order_ranked_pairs(group_tournament(t, groups))
    out: list = []
    for label in group_order:
        out.extend(order_component(t.subtournament(by_label[label]), inner, registry))
    return out


def order_component(t: WeightedTournament, scheme: BatchScheme, registry: Optional[Mapping] = None) -> list:
    if len(t) == 1:
        return list(t.vertices)
    if scheme.kind == "alphabetical":
        return order_alphabetical(t.vertices)
    if scheme.kind == "hamiltonian":
        return order_hamiltonian(t, scheme.break_policy)
    if scheme.kind == "ranked-pairs":
        return order_ranked_pairs(t)
    if scheme.kind == "post-decryption":
        if registry is None:
            raise ValueError("post-decryption ordering needs the transaction registry")
        return order_post_decryption(t, registry, scheme.inner)
    raise ValueError(f"unknown scheme kind {scheme.kind!r}")


def order_tournament(t: WeightedTournament, scheme, registry: Optional[Mapping] = None, condensation=None) -> list:
    if isinstance(scheme, str):
        scheme = BatchScheme.parse(scheme)
    cond = condensation if condensation is not None else scc_decompose(t)
    out: list = []
    for comp in cond.components:
        if len(comp) == 1:
            out.append(comp[0])
        else:
            out.extend(order_component(t.subtournament(comp), scheme, registry))
    return out


def final_ordering(orderings, scheme, registry: Optional[Mapping] = None) -> list:
    """Fair total order: condensation order across batches, ``scheme`` within each."""
    return order_tournament(build_tournament(orderings), scheme, registry)
