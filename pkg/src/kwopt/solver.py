"""Closed-loop solver: targeting, assignment, grouping and scoring per iteration.

Each iteration grows and trims the target set, assigns it to every campaign of
every market, clusters each campaign into adgroups, and scores the result.
The loop stops when the payoff increment drops to ``epsilon`` or below, when
the target set stops changing, or at the iteration cap.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import AbstractSet, Sequence

import numpy as np

from .assignment import CampaignSpec, MarketSpec, assign_campaign
from .dataio import Dataset
from .economics import EconConfig, set_cost, set_payoff, set_revenue
from .errors import ConfigError, StructuralError
from .graph import KeywordGraph
from .grouping import GroupScore, adgroup_level_score, intra_group_relevance, kmeans_partition
from .money import format_micros
from .targeting import TargetingState, targeting_step

TRACE_FIELDS = ["iteration", "target_size", "payoff", "delta", "f1", "terminated_reason"]

FIXED_POINT = "fixed_point"
DELTA = "delta"
MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class AccountPlan:
    dataset: Dataset
    seeds: frozenset[int]
    budget_micros: int
    markets: tuple[MarketSpec, ...]
    econ: EconConfig = field(default_factory=EconConfig)

    def __post_init__(self) -> None:
        object.__setattr__(self, "seeds", frozenset(self.seeds))
        object.__setattr__(self, "markets", tuple(self.markets))
        self.validate()

    def validate(self) -> None:
        if not self.seeds and len(self.dataset) > 0:
            raise ConfigError("seed set is empty")
        outside = sorted(k for k in self.seeds if k not in self.dataset.graph)
        if outside:
            raise ConfigError(f"seeds outside the pool: {outside}")
        total = sum(m.budget_micros for m in self.markets)
        if total > self.budget_micros:
            raise ConfigError(
                f"market budgets sum to {format_micros(total)} > account budget "
                f"{format_micros(self.budget_micros)} "
                "(constraint: sum of market budgets <= account budget)"
            )
        seen: set[str] = set()
        for c in self.campaigns:
            if c.campaign_id in seen:
                raise ConfigError(f"duplicate campaign id {c.campaign_id!r}")
            seen.add(c.campaign_id)
            bad = sorted(k for k in c.theme_seeds if k not in self.dataset.graph)
            if bad:
                raise ConfigError(f"campaign {c.campaign_id}: theme seeds outside the pool: {bad}")

    @property
    def campaigns(self) -> list[CampaignSpec]:
        return [c for m in self.markets for c in m.campaigns]


@dataclass(frozen=True)
class SolveConfig:
    epsilon_micros: int = 0
    max_iterations: int = 100
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.epsilon_micros < 0:
            raise ConfigError("epsilon must be >= 0")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")


@dataclass(frozen=True)
class CampaignResult:
    campaign_id: str
    keywords: frozenset[int]
    adgroups: tuple[frozenset[int], ...]
    score: GroupScore


@dataclass(frozen=True)
class MarketResult:
    market_id: str
    target: frozenset[int]
    campaigns: tuple[CampaignResult, ...]
    score: float


@dataclass(frozen=True)
class KeywordStructure:
    target: frozenset[int]
    markets: tuple[MarketResult, ...]
    f1: float
    payoff: int
    revenue: int
    cost: int

    def campaign(self, campaign_id: str) -> CampaignResult:
        for m in self.markets:
            for c in m.campaigns:
                if c.campaign_id == campaign_id:
                    return c
        raise KeyError(campaign_id)

    def validate(self, pool: AbstractSet[int]) -> None:
        if not self.target <= pool:
            raise StructuralError("target set leaves the pool")
        for m in self.markets:
            if not m.target <= pool:
                raise StructuralError(f"market {m.market_id}: target set leaves the pool")
            for c in m.campaigns:
                if not c.keywords <= m.target:
                    raise StructuralError(f"campaign {c.campaign_id}: keywords outside target")
                covered: set[int] = set()
                for z in c.adgroups:
                    if covered & z or not z:
                        raise StructuralError(f"campaign {c.campaign_id}: adgroups not a partition")
                    covered |= z
                if covered != c.keywords:
                    raise StructuralError(f"campaign {c.campaign_id}: adgroups do not cover keywords")

    def to_dict(self, g: KeywordGraph | None = None) -> dict:
        markets = []
        for m in self.markets:
            campaigns = []
            for c in m.campaigns:
                adgroups = []
                for l, z in enumerate(c.adgroups, 1):
                    ag = {"adgroup_id": f"adgroup-{l}", "keywords": sorted(z)}
                    if g is not None:
                        ag["intra"] = intra_group_relevance(z, g)
                    adgroups.append(ag)
                campaigns.append({
                    "campaign_id": c.campaign_id,
                    "keywords": sorted(c.keywords),
                    "score": {"cross": c.score.cross, "intra": c.score.intra,
                              "total": c.score.total},
                    "adgroups": adgroups,
                })
            markets.append({"market_id": m.market_id, "score": m.score,
                            "target": sorted(m.target), "campaigns": campaigns})
        return {
            "payoff": format_micros(self.payoff),
            "revenue": format_micros(self.revenue),
            "cost": format_micros(self.cost),
            "f1": self.f1,
            "target": sorted(self.target),
            "markets": markets,
        }

    def to_json(self, g: KeywordGraph | None = None) -> str:
        return json.dumps(self.to_dict(g), indent=2) + "\n"

    def allocation(self) -> dict[str, dict[str, list[int]]]:
        """``campaign_id -> adgroup_id -> keyword ids``, the fixed-structure file layout."""
        return {
            c.campaign_id: {f"adgroup-{l}": sorted(z) for l, z in enumerate(c.adgroups, 1)}
            for m in self.markets for c in m.campaigns
        }


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    target_size: int
    payoff: int
    delta: int
    f1: float
    campaign_sizes: tuple[int, ...]
    terminated_reason: str = ""


@dataclass
class SolveTrace:
    initial_payoff: int
    rows: list[TraceRow] = field(default_factory=list)

    @property
    def terminated_reason(self) -> str:
        return self.rows[-1].terminated_reason if self.rows else ""

    @property
    def deltas(self) -> list[int]:
        return [r.delta for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_FIELDS)
        for r in self.rows:
            w.writerow([r.iteration, r.target_size, format_micros(r.payoff),
                        format_micros(r.delta), repr(r.f1), r.terminated_reason])
        return buf.getvalue()


def score_campaign(c: CampaignSpec, keywords: AbstractSet[int],
                   adgroups: Sequence[AbstractSet[int]], g: KeywordGraph) -> CampaignResult:
    keywords = frozenset(keywords)
    groups = tuple(frozenset(z) for z in adgroups)
    score = adgroup_level_score(keywords, groups, g) if keywords else GroupScore.zero()
    return CampaignResult(c.campaign_id, keywords, groups, score)


def score_market(x: AbstractSet[int], m: MarketSpec, dataset: Dataset,
                 seed: int | Sequence[int] = 0) -> MarketResult:
    """Assign, cluster and score every campaign of one market over target ``x``.

    Campaign ``j`` clusters with the RNG stream ``SeedSequence([*seed, j])``.
    """
    x = frozenset(x)
    if not x:
        raise StructuralError(f"market {m.market_id}: empty target set")
    base = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    g = dataset.graph
    campaigns = []
    for j, c in enumerate(m.campaigns):
        y = assign_campaign(x, c, dataset)
        if len(y) < c.n_adgroups:
            raise StructuralError(
                f"campaign {c.campaign_id}: {len(y)} keywords assigned, "
                f"fewer than its {c.n_adgroups} adgroups"
            )
        groups = kmeans_partition(y, c.n_adgroups, g, np.random.SeedSequence([*base, j]))
        campaigns.append(score_campaign(c, y, groups, g))
    return MarketResult(m.market_id, x, tuple(campaigns),
                        math.fsum(c.score.total for c in campaigns))


def build_structure(dataset: Dataset, target: AbstractSet[int],
                    markets: Sequence[MarketResult]) -> KeywordStructure:
    target = frozenset(target)
    return KeywordStructure(
        target=target,
        markets=tuple(markets),
        f1=math.fsum(m.score for m in markets),
        payoff=set_payoff(target, dataset),
        revenue=set_revenue(target, dataset),
        cost=set_cost(target, dataset),
    )


def solve(plan: AccountPlan, cfg: SolveConfig) -> tuple[KeywordStructure, SolveTrace]:
    ds = plan.dataset
    state = TargetingState.initial(plan.seeds)
    prev_payoff = set_payoff(plan.seeds, ds)
    trace = SolveTrace(initial_payoff=prev_payoff)
    if len(ds) == 0:
        empty = [MarketResult(m.market_id, frozenset(), (), 0.0) for m in plan.markets]
        return build_structure(ds, frozenset(), empty), trace
    structure = None
    for it in range(1, cfg.max_iterations + 1):
        state = targeting_step(ds, state, plan.econ, plan.seeds)
        x = state.h_curr
        markets = [score_market(x, m, ds, (cfg.rng_seed, it, i))
                   for i, m in enumerate(plan.markets)]
        structure = build_structure(ds, x, markets)
        delta = structure.payoff - prev_payoff
        if state.h_curr == state.h_prev:
            reason = FIXED_POINT
        elif delta <= cfg.epsilon_micros:
            reason = DELTA
        elif it == cfg.max_iterations:
            reason = MAX_ITERATIONS
        else:
            reason = ""
        trace.rows.append(TraceRow(
            iteration=it,
            target_size=len(x),
            payoff=structure.payoff,
            delta=delta,
            f1=structure.f1,
            campaign_sizes=tuple(len(c.keywords) for m in markets for c in m.campaigns),
            terminated_reason=reason,
        ))
        if reason:
            break
        prev_payoff = structure.payoff
    return structure, trace
