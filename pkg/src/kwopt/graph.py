"""Keyword co-occurrence graph and geodesic relevance.

Relevance between two keywords is the inverse of their hop distance on the
pool graph. All subsets handled elsewhere (seed set, target sets, campaign
and adgroup sets) are node subsets of one pool graph, and distances are
always measured on the full pool graph rather than an induced subgraph.
"""

from __future__ import annotations

import numbers
from collections import deque
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Sequence

import numpy as np

from .errors import KwoptError

KeywordId = int
KeywordSet = frozenset  # frozenset[KeywordId]


class GraphError(KwoptError):
    """Invalid graph construction or a query on an unknown keyword."""


@dataclass(frozen=True, eq=False)
class KeywordGraph:
    """Binary undirected graph over keyword ids ``0..node_count-1``."""

    node_count: int
    adjacency: tuple[frozenset[int], ...]
    _bfs_cache: dict[int, dict[int, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.node_count < 0 or len(self.adjacency) != self.node_count:
            raise GraphError("adjacency length must equal node_count")
        for u, nbrs in enumerate(self.adjacency):
            if u in nbrs:
                raise GraphError(f"self-loop on keyword {u}")
            for v in nbrs:
                if not 0 <= v < self.node_count:
                    raise GraphError(f"edge {u}-{v} references unknown keyword")
                if u not in self.adjacency[v]:
                    raise GraphError(f"adjacency not symmetric for {u}-{v}")

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> "KeywordGraph":
        """Build a graph; duplicate and reversed edges collapse to one."""
        nbrs: list[set[int]] = [set() for _ in range(node_count)]
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop on keyword {a}")
            if not (0 <= a < node_count and 0 <= b < node_count):
                raise GraphError(f"edge {a}-{b} references unknown keyword")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return cls(node_count, tuple(frozenset(s) for s in nbrs))

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(range(self.node_count))

    def edges(self) -> list[tuple[int, int]]:
        """Each undirected edge once as ``(low, high)``, sorted."""
        return sorted((u, v) for u in range(self.node_count) for v in self.adjacency[u] if u < v)

    def __contains__(self, k: object) -> bool:
        return isinstance(k, numbers.Integral) and 0 <= k < self.node_count

    def check(self, k: int) -> None:
        if k not in self:
            raise GraphError(f"unknown keyword id {k!r}")

    def distances_from(self, source: int) -> dict[int, int]:
        """Hop counts to every node reachable from ``source`` (BFS, memoized)."""
        cached = self._bfs_cache.get(source)
        if cached is not None:
            return cached
        self.check(source)
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in self.adjacency[u]:
                if v not in dist:
                    dist[v] = du
                    queue.append(v)
        # a racing writer stores an identical dict, so plain assignment is safe
        self._bfs_cache[source] = dist
        return dist


def geodesic_distance(g: KeywordGraph, a: int, b: int) -> int | None:
    """Shortest path length between ``a`` and ``b``, or ``None`` if unreachable."""
    g.check(a)
    g.check(b)
    return g.distances_from(a).get(b)


def pair_relevance(g: KeywordGraph, a: int, b: int) -> float:
    """``1/d(a, b)``; 0.0 for disconnected pairs. Undefined for ``a == b``."""
    if a == b:
        raise GraphError(f"relevance of keyword {a} to itself is undefined")
    d = geodesic_distance(g, a, b)
    return 0.0 if d is None else 1.0 / d


def neighbor_vector(g: KeywordGraph, k: int, universe: AbstractSet[int]) -> list[float]:
    """Relevance of ``k`` to each member of ``universe`` in ascending id order.

    The self position holds 1.0.
    """
    if k not in universe:
        raise GraphError(f"keyword {k} not in universe")
    g.check(k)
    dist = g.distances_from(k)
    out = []
    for u in sorted(universe):
        g.check(u)
        d = dist.get(u)
        out.append(1.0 if u == k else (0.0 if d is None else 1.0 / d))
    return out


def relevance_matrix(g: KeywordGraph, ids: Sequence[int]) -> np.ndarray:
    """Pairwise relevance among ``ids`` (in the given order), 1.0 on the diagonal.

    Row ``i`` equals ``neighbor_vector(g, ids[i], set(ids))`` when ``ids`` is sorted.
    """
    index = {k: i for i, k in enumerate(ids)}
    if len(index) != len(ids):
        raise GraphError("duplicate keyword ids")
    R = np.zeros((len(ids), len(ids)))
    for i, k in enumerate(ids):
        for u, d in g.distances_from(k).items():
            j = index.get(u)
            if j is not None:
                R[i, j] = 1.0 if d == 0 else 1.0 / d
    return R


def one_hop_closure(g: KeywordGraph, s: AbstractSet[int]) -> frozenset[int]:
    """``s`` together with every node adjacent to a member of ``s``."""
    out = set(s)
    for k in s:
        g.check(k)
        out.update(g.adjacency[k])
    return frozenset(out)
