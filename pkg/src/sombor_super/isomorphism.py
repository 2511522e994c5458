"""Isomorphism test for small graphs by colour refinement and backtracking.

Both graphs are refined together so colour names are comparable.  When the
refined colourings agree but are not discrete, one vertex of the smallest
non-singleton class in the first graph is pinned against each candidate of
the same colour in the second graph and the refinement is rerun.
"""

from __future__ import annotations

import numpy as np

from .graphs import SimpleGraph

__all__ = ["is_isomorphic", "find_isomorphism", "IsomorphismLimitError", "MAX_ISO_VERTICES"]

MAX_ISO_VERTICES = 64


class IsomorphismLimitError(ValueError):
    pass


def _refine(adj: np.ndarray, colours: list[int]) -> list[int]:
    """Equitable refinement of the vertex colouring on a (union) graph."""
    n = len(colours)
    nbrs = [np.flatnonzero(adj[v]).tolist() for v in range(n)]
    while True:
        sigs = [
            (colours[v], tuple(sorted(colours[u] for u in nbrs[v])))
            for v in range(n)
        ]
        names = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [names[s] for s in sigs]
        if len(names) == len(set(colours)):
            return new
        colours = new


def _search(adj: np.ndarray, n: int, colours: list[int]) -> list[int] | None:
    colours = _refine(adj, colours)
    left, right = colours[:n], colours[n:]
    if sorted(left) != sorted(right):
        return None
    counts: dict[int, int] = {}
    for c in left:
        counts[c] = counts.get(c, 0) + 1
    if all(k == 1 for k in counts.values()):
        where = {c: v for v, c in enumerate(right)}
        mapping = [where[c] for c in left]
        a1, a2 = adj[:n, :n], adj[n:, n:]
        return mapping if np.array_equal(a1, a2[np.ix_(mapping, mapping)]) else None
    target = min((k, c) for c, k in counts.items() if k > 1)[1]
    v = left.index(target)
    fresh = max(colours) + 1
    for w in (i for i, c in enumerate(right) if c == target):
        trial = list(colours)
        trial[v] = fresh
        trial[n + w] = fresh
        found = _search(adj, n, trial)
        if found is not None:
            return found
    return None


def find_isomorphism(g1: SimpleGraph, g2: SimpleGraph) -> list[int] | None:
    """Return ``m`` with ``g1.adjacent(i, j) == g2.adjacent(m[i], m[j])``, or None."""
    for g in (g1, g2):
        if g.vertex_count > MAX_ISO_VERTICES:
            raise IsomorphismLimitError(
                f"isomorphism search is limited to {MAX_ISO_VERTICES} vertices, got {g.vertex_count}"
            )
    n = g1.vertex_count
    if n != g2.vertex_count or g1.edge_count != g2.edge_count:
        return None
    if n == 0:
        return []
    if sorted(g1.degrees().tolist()) != sorted(g2.degrees().tolist()):
        return None
    union = np.zeros((2 * n, 2 * n), dtype=bool)
    union[:n, :n] = g1.adjacency
    union[n:, n:] = g2.adjacency
    return _search(union, n, [0] * (2 * n))


def is_isomorphic(g1: SimpleGraph, g2: SimpleGraph) -> bool:
    return find_isomorphism(g1, g2) is not None
