"""Test builders and independent oracles.

The oracles deliberately avoid the library's own machinery: distances come
from Floyd-Warshall over an adjacency matrix, relevance is exact rational,
knapsack optima come from subset enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from kwopt.assignment import CampaignSpec, MarketSpec
from kwopt.dataio import Dataset, KeywordRecord, SynthConfig, synthesize
from kwopt.economics import EconConfig, keyword_cost
from kwopt.graph import KeywordGraph
from kwopt.money import to_micros
from kwopt.solver import AccountPlan

M = 1_000_000


def rec(i, clicks=10, cpc="1", rpc="2", impressions=None, text=None):
    imps = impressions if impressions is not None else max(clicks * 10, 1)
    return KeywordRecord(
        id=i, text=text or f"kw{i}", impressions=imps, clicks=clicks,
        cpc_micros=to_micros(cpc), ctr=clicks / imps if imps else 0.0,
        rpc_micros=to_micros(rpc),
    )


def make_dataset(n, edges, records=None):
    records = records or [rec(i) for i in range(n)]
    return Dataset(tuple(records), KeywordGraph.from_edges(n, edges))


def path_graph(n):
    return KeywordGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def clique_edges(nodes):
    return list(itertools.combinations(nodes, 2))


def two_cliques(a, b):
    """Disjoint cliques on ``0..a-1`` and ``a..a+b-1``."""
    return KeywordGraph.from_edges(a + b, clique_edges(range(a)) + clique_edges(range(a, a + b)))


# ---- oracles -----------------------------------------------------------------

def floyd_warshall(n, edges):
    D = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        D[i][i] = 0
    for a, b in edges:
        D[a][b] = D[b][a] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return D


def rel_oracle(D, a, b):
    return Fraction(0) if D[a][b] == math.inf else Fraction(1, D[a][b])


def intra_oracle(D, z):
    pairs = list(itertools.combinations(sorted(z), 2))
    if not pairs:
        return Fraction(0)
    return sum(rel_oracle(D, a, b) for a, b in pairs) / len(pairs)


def cross_oracle(D, y, groups):
    per_group = []
    for z in groups:
        terms = [rel_oracle(D, a, b) for a in z for b in y if b != a]
        per_group.append(sum(terms) / len(terms) if terms else Fraction(0))
    return sum(per_group) / len(groups)


def knapsack_oracle(items, budget):
    """Best total value over all subsets of ``(id, cost, value)`` within budget."""
    best = Fraction(0)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            if sum(c for _, c, _ in combo) <= budget:
                best = max(best, sum((Fraction(v) for _, _, v in combo), Fraction(0)))
    return best


def components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i)
    return sorted((frozenset(s) for s in groups.values()), key=min)


# ---- random solver instances ------------------------------------------------------

def random_plan(seed, n_range=(50, 300), gamma=0.0):
    """A planted-partition pool plus an account plan that always admits a structure.

    Every campaign's theme seeds sit in the seed set, and its budget covers the
    ``n_adgroups`` most expensive keywords, so each knapsack returns at least
    ``n_adgroups`` keywords.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = int(rng.integers(2, 6))
    intra = float(rng.uniform(0.04, 0.25))
    cfg = SynthConfig(
        n_keywords=n, rng_seed=int(rng.integers(2**31)), n_clusters=k,
        intra_edge_prob=intra, inter_edge_prob=float(rng.uniform(0, intra / 10)),
        clicks_range=(0, 200), cpc_range=(0.2, 2.0), rpc_range=(0.1, 3.0), price_tick=0.05,
    )
    ds = synthesize(cfg)
    costs = sorted((keyword_cost(r) for r in ds.records), reverse=True)
    n_seeds = int(rng.integers(2, 5))
    seeds = [int(s) for s in rng.choice(n, size=n_seeds, replace=False)]
    n_campaigns = int(rng.integers(1, 4))
    campaigns = []
    for j in range(n_campaigns):
        theme = [int(s) for s in rng.choice(seeds, size=int(rng.integers(1, 3)), replace=False)]
        n3 = int(rng.integers(1, len(theme) + 1))
        floor = max(sum(costs[:n3]), M)
        budget = int(rng.integers(floor, max(floor, sum(costs) // 3) + 1))
        campaigns.append(CampaignSpec(f"c{j}", "m0", frozenset(theme), budget, n3))
    total = sum(c.budget_micros for c in campaigns)
    market = MarketSpec("m0", total, tuple(campaigns))
    return AccountPlan(ds, frozenset(seeds), total, (market,), EconConfig(gamma))
