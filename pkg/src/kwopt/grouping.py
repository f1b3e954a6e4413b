"""Adgroup-level grouping: k-means over neighbour-relevance vectors, and scoring.

A campaign's keywords are embedded by their relevance to every other keyword
of the campaign and split into ``n3`` adgroups with k-means. The partition is
scored by how well each adgroup relates to the rest of the campaign (cross)
and how tightly its own members relate (intra).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import AbstractSet, Sequence

import numpy as np

from .errors import StructuralError
from .graph import KeywordGraph, relevance_matrix

MAX_LLOYD_ROUNDS = 100

Partition = tuple  # tuple[frozenset[int], ...], ordered by smallest member


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia_history: list[float] = field(default_factory=list)
    n_rounds: int = 0
    converged: bool = False


def _sq_dists(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def inertia(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    """Within-cluster sum of squares."""
    return float(((X - centroids[labels]) ** 2).sum())


def kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(X)
    chosen = [int(rng.integers(n))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            cum = np.cumsum(d2)
            idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            # all remaining points coincide with a centre
            idx = next(i for i in range(n) if i not in chosen)
        chosen.append(idx)
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].astype(float)


def _repair_empty(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray, k: int) -> None:
    """Refill empty clusters with the point farthest from its centroid (in place)."""
    while True:
        counts = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if len(empty) == 0:
            return
        e = int(empty[0])
        d = ((X - centroids[labels]) ** 2).sum(axis=1)
        d[counts[labels] <= 1] = -1.0
        p = int(np.argmax(d))
        labels[p] = e
        centroids[e] = X[p]


def kmeans(X: np.ndarray, k: int, rng: np.random.Generator,
           max_rounds: int = MAX_LLOYD_ROUNDS) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding; stops when assignments repeat.

    ``inertia_history`` holds the within-cluster sum of squares after each
    round's centroid update.
    """
    X = np.asarray(X, dtype=float)
    n = len(X)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n points, got k={k}, n={n}")
    centroids = kmeans_pp_init(X, k, rng)
    res = KMeansResult(labels=np.zeros(n, dtype=int), centroids=centroids)
    labels = None
    for _ in range(max_rounds):
        new = np.argmin(_sq_dists(X, centroids), axis=1)
        _repair_empty(X, new, centroids, k)
        if labels is not None and np.array_equal(new, labels):
            res.converged = True
            break
        labels = new
        centroids = np.stack([X[labels == j].mean(axis=0) for j in range(k)])
        res.inertia_history.append(inertia(X, labels, centroids))
        res.n_rounds += 1
    res.labels, res.centroids = labels, centroids
    return res


def embed(y: AbstractSet[int], g: KeywordGraph) -> tuple[list[int], np.ndarray]:
    """Neighbour-relevance vectors of ``y`` (rows and columns in ascending id order)."""
    ids = sorted(y)
    return ids, relevance_matrix(g, ids)


def kmeans_partition(y: AbstractSet[int], n3: int, g: KeywordGraph,
                     seed: int | np.random.SeedSequence) -> Partition:
    """Split ``y`` into ``n3`` nonempty adgroups."""
    if n3 < 1 or len(y) < n3:
        raise StructuralError(f"cannot form {n3} nonempty adgroups from {len(y)} keywords")
    ids, X = embed(y, g)
    res = kmeans(X, n3, np.random.default_rng(seed))
    groups = [frozenset(ids[i] for i in np.flatnonzero(res.labels == j)) for j in range(n3)]
    return tuple(sorted(groups, key=min))


def validate_partition(y: AbstractSet[int], groups: Sequence[AbstractSet[int]]) -> None:
    seen: set[int] = set()
    for z in groups:
        if not z:
            raise StructuralError("empty adgroup")
        if seen & z:
            raise StructuralError(f"keywords in more than one adgroup: {sorted(seen & z)}")
        seen |= z
    if seen != set(y):
        raise StructuralError("adgroups do not cover the campaign keyword set exactly")


def _intra(R: np.ndarray, idx: np.ndarray) -> float:
    m = len(idx)
    if m < 2:
        return 0.0
    sub = R[np.ix_(idx, idx)]
    return float(sub[np.triu_indices(m, k=1)].sum()) / (m * (m - 1) / 2)


def _group_to_campaign(R: np.ndarray, idx: np.ndarray) -> float:
    n = R.shape[0]
    if n < 2:
        return 0.0
    # drop each member's diagonal self term
    total = float(R[idx].sum()) - float(R[idx, idx].sum())
    return total / (len(idx) * (n - 1))


def _indices(ids: list[int], groups: Sequence[AbstractSet[int]]) -> list[np.ndarray]:
    pos = {k: i for i, k in enumerate(ids)}
    return [np.array([pos[k] for k in sorted(z)], dtype=int) for z in groups]


def intra_group_relevance(z: AbstractSet[int], g: KeywordGraph) -> float:
    """Mean relevance over unordered member pairs; 0 for a singleton."""
    if not z:
        raise StructuralError("empty adgroup")
    ids = sorted(z)
    return _intra(relevance_matrix(g, ids), np.arange(len(ids)))


def group_campaign_relevance(z: AbstractSet[int], y: AbstractSet[int], g: KeywordGraph) -> float:
    """Mean relevance between each adgroup member and every other campaign keyword."""
    if not z <= y:
        raise StructuralError("adgroup not inside the campaign keyword set")
    ids = sorted(y)
    return _group_to_campaign(relevance_matrix(g, ids), _indices(ids, [z])[0])


def cross_relevance(y: AbstractSet[int], p: Sequence[AbstractSet[int]], g: KeywordGraph) -> float:
    """Mean over adgroups of the adgroup-to-campaign relevance."""
    validate_partition(y, p)
    ids = sorted(y)
    R = relevance_matrix(g, ids)
    return math.fsum(_group_to_campaign(R, idx) for idx in _indices(ids, p)) / len(p)


@dataclass(frozen=True)
class GroupScore:
    cross: float
    intra: float
    total: float

    @classmethod
    def zero(cls) -> "GroupScore":
        return cls(0.0, 0.0, 0.0)


def adgroup_level_score(y: AbstractSet[int], p: Sequence[AbstractSet[int]],
                        g: KeywordGraph) -> GroupScore:
    """Cross relevance plus the mean intra-adgroup relevance."""
    validate_partition(y, p)
    ids = sorted(y)
    R = relevance_matrix(g, ids)
    idxs = _indices(ids, p)
    cross = math.fsum(_group_to_campaign(R, i) for i in idxs) / len(p)
    intra = math.fsum(_intra(R, i) for i in idxs) / len(p)
    return GroupScore(cross, intra, cross + intra)
