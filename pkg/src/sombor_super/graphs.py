"""Graphs defined on finite groups, super graphs and generalized joins."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .groups import FiniteGroup, VertexPartition

__all__ = [
    "SimpleGraph",
    "Complete",
    "Empty",
    "JoinSkeleton",
    "power_graph",
    "enhanced_power_graph",
    "commuting_graph",
    "base_graph",
    "super_graph",
    "compressed_graph",
    "generalized_join",
    "complete_graph",
    "empty_graph",
    "star_graph",
    "to_edgelist",
    "from_edgelist",
    "GRAPH_KINDS",
]


class SimpleGraph:
    """Undirected loop-free graph stored as a read-only boolean matrix."""

    __slots__ = ("_adj", "labels")

    def __init__(self, adjacency, labels: Sequence[str] | None = None):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if adj.diagonal().any():
            raise ValueError("graph must be loop-free")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        adj.setflags(write=False)
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != adj.shape[0]:
                raise ValueError("label count must equal vertex count")
        self._adj = adj
        self.labels = labels

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "SimpleGraph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            adj[i, j] = adj[j, i] = True
        return cls(adj, labels)

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def vertex_count(self) -> int:
        return self._adj.shape[0]

    def __len__(self) -> int:
        return self.vertex_count

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1).astype(np.int64)

    def neighbors(self, v: int) -> set[int]:
        return set(np.flatnonzero(self._adj[v]).tolist())

    def closed_neighborhood(self, v: int) -> set[int]:
        return self.neighbors(v) | {v}

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self._adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def edge_count(self) -> int:
        return int(self._adj.sum()) // 2

    def is_subgraph_of(self, other: "SimpleGraph") -> bool:
        """Spanning-subgraph test on a shared vertex set."""
        return self.vertex_count == other.vertex_count and not (self._adj & ~other._adj).any()

    def induced(self, vertices: Sequence[int]) -> "SimpleGraph":
        idx = list(vertices)
        labels = [self.labels[v] for v in idx] if self.labels else None
        return SimpleGraph(self._adj[np.ix_(idx, idx)], labels)

    def is_connected(self) -> bool:
        n = self.vertex_count
        if n == 0:
            return True
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = seen.copy()
        while frontier.any():
            reach = self._adj[frontier].any(axis=0) & ~seen
            seen |= reach
            frontier = reach
        return bool(seen.all())

    def is_clique(self, vertices: Iterable[int]) -> bool:
        idx = list(vertices)
        sub = self._adj[np.ix_(idx, idx)]
        return bool(sub.sum() == len(idx) * (len(idx) - 1))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        idx = list(vertices)
        return not self._adj[np.ix_(idx, idx)].any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash(self._adj.tobytes())

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.vertex_count}, m={self.edge_count})"


@dataclass(frozen=True)
class Complete:
    size: int


@dataclass(frozen=True)
class Empty:
    size: int


Part = Union[Complete, Empty]


@dataclass(frozen=True)
class JoinSkeleton:
    skeleton: SimpleGraph
    parts: tuple[Part, ...]

    def __init__(self, skeleton: SimpleGraph, parts: Sequence[Part]):
        parts = tuple(parts)
        if skeleton.vertex_count < 1:
            raise ValueError("a join skeleton needs at least one vertex")
        if len(parts) != skeleton.vertex_count:
            raise ValueError("one part descriptor is needed per skeleton vertex")
        if any(p.size < 1 for p in parts):
            raise ValueError("part sizes must be positive")
        object.__setattr__(self, "skeleton", skeleton)
        object.__setattr__(self, "parts", parts)


def _group_graph(g: FiniteGroup, adj: np.ndarray) -> SimpleGraph:
    np.fill_diagonal(adj, False)
    return SimpleGraph(adj, g.labels())


def power_graph(g: FiniteGroup) -> SimpleGraph:
    n = g.order
    adj = np.zeros((n, n), dtype=bool)
    for y, sub in enumerate(g.cyclic_subgroups):
        for x in sub:
            adj[x, y] = adj[y, x] = True
    return _group_graph(g, adj)


def enhanced_power_graph(g: FiniteGroup) -> SimpleGraph:
    n = g.order
    adj = np.zeros((n, n), dtype=bool)
    for sub in set(g.cyclic_subgroups):
        idx = np.fromiter(sub, dtype=np.int64)
        adj[np.ix_(idx, idx)] = True
    return _group_graph(g, adj)


def commuting_graph(g: FiniteGroup) -> SimpleGraph:
    n = g.order
    adj = np.zeros((n, n), dtype=bool)
    els = g.elements
    for i in range(n):
        for j in range(i + 1, n):
            if g.commute(els[i], els[j]):
                adj[i, j] = adj[j, i] = True
    return _group_graph(g, adj)


GRAPH_KINDS = {
    "power": power_graph,
    "enhanced": enhanced_power_graph,
    "commuting": commuting_graph,
}


def base_graph(g: FiniteGroup, kind: str) -> SimpleGraph:
    try:
        return GRAPH_KINDS[kind](g)
    except KeyError:
        raise ValueError(f"unknown graph kind {kind!r}; expected one of {sorted(GRAPH_KINDS)}") from None


def _class_indicator(base: SimpleGraph, p: VertexPartition) -> np.ndarray:
    if p.size != base.vertex_count:
        raise ValueError(f"partition covers {p.size} vertices but the graph has {base.vertex_count}")
    ind = np.zeros((len(p), base.vertex_count), dtype=np.int64)
    for k, c in enumerate(p.classes):
        ind[k, list(c)] = 1
    return ind


def compressed_graph(base: SimpleGraph, p: VertexPartition) -> SimpleGraph:
    ind = _class_indicator(base, p)
    between = (ind @ base.adjacency.astype(np.int64) @ ind.T) > 0
    np.fill_diagonal(between, False)
    labels = None
    if base.labels:
        labels = ["{" + ",".join(base.labels[v] for v in c) + "}" for c in p.classes]
    return SimpleGraph(between, labels)


def super_graph(base: SimpleGraph, p: VertexPartition) -> SimpleGraph:
    ind = _class_indicator(base, p)
    between = (ind @ base.adjacency.astype(np.int64) @ ind.T) > 0
    np.fill_diagonal(between, True)
    owner = np.array(p.class_of())
    adj = between[np.ix_(owner, owner)].copy()
    np.fill_diagonal(adj, False)
    return SimpleGraph(adj, base.labels)


def generalized_join(j: JoinSkeleton) -> SimpleGraph:
    sizes = [p.size for p in j.parts]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    owner = np.repeat(np.arange(len(sizes)), sizes)
    adj = j.skeleton.adjacency[np.ix_(owner, owner)].copy()
    for k, part in enumerate(j.parts):
        lo, hi = offsets[k], offsets[k + 1]
        adj[lo:hi, lo:hi] = isinstance(part, Complete)
    np.fill_diagonal(adj, False)
    return SimpleGraph(adj)


def complete_graph(m: int) -> SimpleGraph:
    adj = np.ones((m, m), dtype=bool)
    np.fill_diagonal(adj, False)
    return SimpleGraph(adj)


def empty_graph(m: int) -> SimpleGraph:
    return SimpleGraph(np.zeros((m, m), dtype=bool))


def star_graph(leaves: int) -> SimpleGraph:
    """K_{1,leaves} with the center at vertex 0."""
    return SimpleGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def to_edgelist(g: SimpleGraph) -> str:
    lines = [f"p {g.vertex_count}"]
    lines += [f"e {i} {j}" for i, j in g.edges()]
    if g.labels:
        lines += [f"l {i} {name}" for i, name in enumerate(g.labels)]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> SimpleGraph:
    n = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, *rest = line.split(None, 2)
        try:
            if tag == "p":
                if n is not None:
                    raise ValueError("duplicate header")
                n = int(rest[0])
            elif tag == "e":
                i, j = map(int, rest[0:1] + rest[1].split()[:1])
                edges.append((i, j))
            elif tag == "l":
                labels[int(rest[0])] = rest[1] if len(rest) > 1 else ""
            else:
                raise ValueError(f"unknown record {tag!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"edge list line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("edge list is missing its 'p <vertexCount>' header")
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) is out of range for {n} vertices")
    label_list = None
    if labels:
        if set(labels) != set(range(n)):
            raise ValueError("labels must be given for every vertex or none")
        label_list = [labels[i] for i in range(n)]
    return SimpleGraph.from_edges(n, edges, label_list)
