"""Majority dependency tournaments, SCC decomposition and Condorcet cycles.

Vertices are transaction ids kept in lexicographic order, so an index
comparison is also an id comparison. Weights live in a dense integer matrix:
``weight[i, j]`` counts the orderings that place vertex ``i`` before ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .model import LocalOrdering


class OrderingMismatch(ValueError):
    """Local orderings do not cover the same transaction set."""


class NotATournament(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WeightedTournament:
    vertices: tuple
    weight: np.ndarray
    n_orderings: int

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})
        w = self.weight
        # tie goes to the lexicographically smaller source, i.e. the smaller index
        upper = np.triu(np.ones_like(w, dtype=bool), k=1)
        adj = (w > w.T) | ((w == w.T) & upper)
        np.fill_diagonal(adj, False)
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)

    def __len__(self):
        return len(self.vertices)

    def index(self, v) -> int:
        return self._index[v]

    def w(self, u, v) -> int:
        return int(self.weight[self._index[u], self._index[v]])

    def has_edge(self, u, v) -> bool:
        return bool(self.adj[self._index[u], self._index[v]])

    def edges(self) -> list:
        """All directed edges ``(u, v, weight)`` in (source, target) id order."""
        rows, cols = np.nonzero(self.adj)
        return [(self.vertices[i], self.vertices[j], int(self.weight[i, j])) for i, j in zip(rows, cols)]

    def successors(self, v) -> list:
        return [self.vertices[j] for j in np.flatnonzero(self.adj[self._index[v]])]

    def subtournament(self, vertices: Iterable) -> "WeightedTournament":
        idx = sorted(self._index[v] for v in vertices)
        sub = self.weight[np.ix_(idx, idx)]
        return WeightedTournament(tuple(self.vertices[i] for i in idx), sub, self.n_orderings)

    @classmethod
    def from_weights(cls, vertices: Sequence, weights: dict, n_orderings: int) -> "WeightedTournament":
        """Build from an explicit ``{(u, v): w}`` map; missing pairs get weight 0."""
        verts = tuple(sorted(vertices))
        index = {v: i for i, v in enumerate(verts)}
        mat = np.zeros((len(verts), len(verts)), dtype=np.int64)
        for (u, v), val in weights.items():
            mat[index[u], index[v]] = val
        return cls(verts, mat, n_orderings)

    def to_dot(self, adversarial: Iterable = (), name: str = "dependency", labels: Optional[dict] = None) -> str:
        """Graphviz source; edge labels are weights, adversarial vertices drawn in red."""
        adversarial = set(adversarial)
        labels = labels or {}
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            color = "red" if v in adversarial else "blue"
            lines.append(f'  "{v}" [label="{labels.get(v, v)}", shape=circle, color={color}, fontcolor={color}];')
        for u, v, wt in self.edges():
            color = ' color=red' if u in adversarial or v in adversarial else ''
            lines.append(f'  "{u}" -> "{v}" [label="{wt}"{color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Condensation:
    components: tuple
    dag: tuple  # (i, j) component index pairs

    def __len__(self):
        return len(self.components)


def build_tournament(orderings: Sequence[LocalOrdering]) -> WeightedTournament:
    """Count, for every ordered pair, how many local orderings put one before the other."""
    if not orderings:
        raise ValueError("need at least one local ordering")
    seqs = [o.sequence if isinstance(o, LocalOrdering) else tuple(o) for o in orderings]
    vertices = tuple(sorted(seqs[0]))
    vset = set(vertices)
    for s in seqs:
        if len(s) != len(vertices) or set(s) != vset:
            raise OrderingMismatch("all local orderings must contain the identical transaction set")
        if len(set(s)) != len(s):
            raise OrderingMismatch("duplicate id in local ordering")
    index = {v: i for i, v in enumerate(vertices)}
    k = len(vertices)
    pos = np.empty((len(seqs), k), dtype=np.int64)
    for r, s in enumerate(seqs):
        pos[r, [index[v] for v in s]] = np.arange(k)
    weight = np.zeros((k, k), dtype=np.int64)
    for row in pos:
        weight += row[:, None] < row[None, :]
    return WeightedTournament(vertices, weight, len(seqs))


def _tarjan(adj: np.ndarray) -> list:
    """Iterative Tarjan; returns SCCs as index lists in reverse topological order."""
    k = adj.shape[0]
    succ = [np.flatnonzero(adj[i]).tolist() for i in range(k)]
    index = [-1] * k
    low = [0] * k
    on_stack = [False] * k
    stack, out = [], []
    counter = 0
    for root in range(k):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def scc_decompose(t: WeightedTournament) -> Condensation:
    """Strongly connected components in topological order of the condensation."""
    comps = _tarjan(t.adj)[::-1]
    owner = np.empty(len(t), dtype=np.int64)
    for ci, comp in enumerate(comps):
        owner[comp] = ci
    rows, cols = np.nonzero(t.adj)
    dag = sorted({(int(owner[i]), int(owner[j])) for i, j in zip(rows, cols) if owner[i] != owner[j]})
    components = tuple(tuple(t.vertices[i] for i in comp) for comp in comps)
    return Condensation(components, tuple(dag))


def condorcet_cycles(t: WeightedTournament, condensation: Optional[Condensation] = None) -> list:
    cond = condensation if condensation is not None else scc_decompose(t)
    return [set(c) for c in cond.components if len(c) > 1]


def vertices_in_cycles(t: WeightedTournament) -> set:
    out = set()
    for c in condorcet_cycles(t):
        out |= c
    return out
