"""Campaign-level keyword assignment as independent 0/1 knapsacks.

Each campaign picks, from the market's target set, the keywords that maximize
total relevance to its theme seeds while the summed keyword cost stays within
the campaign budget. A keyword may land in several campaigns.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import AbstractSet, Sequence

import numpy as np

from .dataio import Dataset
from .economics import keyword_cost
from .errors import ConfigError, DataError
from .graph import KeywordGraph
from .money import format_micros

log = logging.getLogger(__name__)

DP_CELL_CAP = 10_000_000
# value ties closer than this count as equal, so lower ids win
TIE_TOL = 1e-9


@dataclass(frozen=True)
class CampaignSpec:
    campaign_id: str
    market_id: str
    theme_seeds: frozenset[int]
    budget_micros: int
    n_adgroups: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "theme_seeds", frozenset(self.theme_seeds))
        if not self.theme_seeds:
            raise ConfigError(f"campaign {self.campaign_id}: theme_seeds is empty")
        if self.budget_micros <= 0:
            raise ConfigError(f"campaign {self.campaign_id}: budget must be positive")
        if self.n_adgroups < 1:
            raise ConfigError(f"campaign {self.campaign_id}: n_adgroups must be >= 1")


@dataclass(frozen=True)
class MarketSpec:
    market_id: str
    budget_micros: int
    campaigns: tuple[CampaignSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "campaigns", tuple(self.campaigns))
        total = sum(c.budget_micros for c in self.campaigns)
        if total > self.budget_micros:
            raise ConfigError(
                f"market {self.market_id}: campaign budgets sum to {format_micros(total)} "
                f"> market budget {format_micros(self.budget_micros)} "
                "(constraint: sum of campaign budgets <= market budget)"
            )
        ids = [c.campaign_id for c in self.campaigns]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"market {self.market_id}: duplicate campaign ids")


def campaign_relevance(k: int, c: CampaignSpec, g: KeywordGraph) -> float:
    """Mean relevance of ``k`` to the campaign's theme seeds (self term 1.0)."""
    if not c.theme_seeds:
        raise ConfigError(f"campaign {c.campaign_id}: theme_seeds is empty")
    dist = g.distances_from(k)
    total = 0.0
    for s in sorted(c.theme_seeds):
        g.check(s)
        d = dist.get(s)
        total += 1.0 if d == 0 else (0.0 if d is None else 1.0 / d)
    return total / len(c.theme_seeds)


@dataclass(frozen=True)
class KnapsackResult:
    selected: frozenset[int]
    value: float
    cost: int
    exact: bool
    cells: int


def solve_knapsack(items: Sequence[tuple[int, int, float]], budget: int,
                   cell_cap: int = DP_CELL_CAP) -> KnapsackResult:
    """0/1 knapsack over ``(id, cost, value)`` with integer costs.

    Exact DP when ``(capacity + 1) * n_items <= cell_cap``, where costs and
    budget are divided by the gcd of the positive costs and the capacity is
    capped at the total cost; otherwise greedy by value per
    cost. Among optimal subsets the DP prefers including lower ids.
    """
    items = sorted((i for i in items if i[1] <= budget), key=lambda t: t[0])
    if not items:
        return KnapsackResult(frozenset(), 0.0, 0, True, 0)
    positive = [w for _, w, _ in items if w > 0]
    g = math.gcd(*positive) if positive else 1
    weights = [w // g for _, w, _ in items]
    # capacity beyond the total weight changes nothing
    cap = min(budget // g, sum(weights))
    cells = (cap + 1) * len(items)

    if cells > cell_cap:
        log.info("knapsack needs %d cells (cap %d); using greedy", cells, cell_cap)
        order = sorted(
            range(len(items)),
            key=lambda i: (-(math.inf if items[i][1] == 0 else items[i][2] / items[i][1]),
                           items[i][0]),
        )
        chosen, left = [], budget
        for i in order:
            if items[i][1] <= left:
                chosen.append(i)
                left -= items[i][1]
        return _result(items, chosen, exact=False, cells=cells)

    n = len(items)
    best = np.zeros(cap + 1)  # best value over items[i+1:] with capacity c
    keep = np.zeros((n, cap + 1), dtype=bool)
    for i in range(n - 1, -1, -1):
        w, v = weights[i], items[i][2]
        take = np.full(cap + 1, -np.inf)
        take[w:] = best[: cap + 1 - w] + v
        keep[i] = take >= best - TIE_TOL
        best = np.where(keep[i], take, best)

    chosen, c = [], cap
    for i in range(n):
        if keep[i, c]:
            chosen.append(i)
            c -= weights[i]
    return _result(items, chosen, exact=True, cells=cells)


def _result(items, chosen, exact: bool, cells: int) -> KnapsackResult:
    return KnapsackResult(
        selected=frozenset(items[i][0] for i in chosen),
        value=math.fsum(items[i][2] for i in chosen),
        cost=sum(items[i][1] for i in chosen),
        exact=exact,
        cells=cells,
    )


def knapsack_items(x: AbstractSet[int], c: CampaignSpec,
                   dataset: Dataset) -> list[tuple[int, int, float]]:
    """Candidate ``(id, cost, relevance)`` triples; zero-relevance keywords dropped."""
    items = []
    for k in sorted(x):
        if k not in dataset.graph:
            raise DataError(f"keyword {k} not in pool")
        rel = campaign_relevance(k, c, dataset.graph)
        if rel > 0:
            items.append((k, keyword_cost(dataset[k]), rel))
    return items


def assign_campaign_detailed(x: AbstractSet[int], c: CampaignSpec,
                             dataset: Dataset) -> KnapsackResult:
    return solve_knapsack(knapsack_items(x, c, dataset), c.budget_micros)


def assign_campaign(x: AbstractSet[int], c: CampaignSpec, dataset: Dataset) -> frozenset[int]:
    """Keywords of ``x`` assigned to campaign ``c`` under its budget."""
    return assign_campaign_detailed(x, c, dataset).selected


def assign_market(x: AbstractSet[int], m: MarketSpec, dataset: Dataset) -> list[frozenset[int]]:
    """One keyword set per campaign, in campaign order. Sets may overlap."""
    return [assign_campaign(x, c, dataset) for c in m.campaigns]
