"""Baseline strategies and the strategy comparison table.

``BASE2-Ratio`` replaces targeting with the top-n keywords by CTR/CPC and
reuses the assignment and grouping machinery unchanged. ``BASE1-Origin``
keeps the optimizer's target set but takes its campaign/adgroup layout from
an externally supplied file.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Mapping

import numpy as np

from .dataio import Dataset, KeywordRecord
from .errors import ConfigError, DataError
from .grouping import GroupScore
from .money import format_micros
from .solver import (
    AccountPlan,
    CampaignResult,
    KeywordStructure,
    MarketResult,
    SolveConfig,
    build_structure,
    score_campaign,
    score_market,
    solve,
)

MKOF = "MKOF"
BASE2 = "BASE2-Ratio"
BASE1 = "BASE1-Origin"
COMPARISON_FIELDS = ["strategy", "payoff", "revenue", "cost", "f1", "target_size"]

Allocation = Mapping[str, Mapping[str, list[int]]]


@dataclass(frozen=True)
class StrategyReport:
    strategy: str
    payoff: int
    revenue: int
    cost: int
    f1: float
    target_size: int
    campaign_sizes: tuple[int, ...] = ()

    @classmethod
    def from_structure(cls, name: str, s: KeywordStructure) -> "StrategyReport":
        return cls(name, s.payoff, s.revenue, s.cost, s.f1, len(s.target),
                   tuple(len(c.keywords) for m in s.markets for c in m.campaigns))

    @classmethod
    def zero(cls, name: str) -> "StrategyReport":
        return cls(name, 0, 0, 0, 0.0, 0)


def empty_structure(plan: AccountPlan) -> KeywordStructure:
    markets = [
        MarketResult(m.market_id, frozenset(),
                     tuple(CampaignResult(c.campaign_id, frozenset(), (), GroupScore.zero())
                           for c in m.campaigns), 0.0)
        for m in plan.markets
    ]
    return build_structure(plan.dataset, frozenset(), markets)


def ctr_cpc_ratio(r: KeywordRecord) -> Fraction | float:
    """Observed CTR over CPC; zero CPC ranks first when CTR is positive."""
    if r.impressions == 0 or r.clicks == 0:
        return Fraction(0)
    if r.cpc_micros == 0:
        return float("inf")
    return Fraction(r.clicks * 1_000_000, r.impressions * r.cpc_micros)


def top_n_by_ratio(dataset: Dataset, n: int) -> frozenset[int]:
    ranked = sorted(dataset.records, key=lambda r: (-ctr_cpc_ratio(r), r.id))
    return frozenset(r.id for r in ranked[:n])


def base2_ratio(dataset: Dataset, n: int, plan: AccountPlan,
                seed: int = 0) -> tuple[KeywordStructure, StrategyReport]:
    if not 0 <= n <= len(dataset):
        raise ConfigError(f"base2 n={n} outside 0..{len(dataset)} (pool size)")
    if n == 0:
        s = empty_structure(plan)
        return s, StrategyReport.from_structure(BASE2, s)
    target = top_n_by_ratio(dataset, n)
    # iteration slot 0 is never used by the solver's own streams
    markets = [score_market(target, m, dataset, (seed, 0, i)) for i, m in enumerate(plan.markets)]
    s = build_structure(dataset, target, markets)
    return s, StrategyReport.from_structure(BASE2, s)


def load_allocation(path: str | os.PathLike) -> dict[str, dict[str, list[int]]]:
    """Read a fixed-structure file: ``campaign_id -> adgroup_id -> [keyword ids]``."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError(f"{path}: expected an object of campaigns")
    for cid, groups in raw.items():
        if not isinstance(groups, dict):
            raise DataError(f"{path}: campaign {cid!r} must map adgroup ids to keyword lists")
        for aid, kws in groups.items():
            if not isinstance(kws, list) or not all(
                isinstance(k, int) and not isinstance(k, bool) for k in kws
            ):
                raise DataError(f"{path}: campaign {cid!r} adgroup {aid!r} must list integer ids")
    return raw


def base1_fixed(dataset: Dataset, fixed_structure: Allocation | str | os.PathLike,
                target: AbstractSet[int], plan: AccountPlan,
                allow_unassigned: bool = False) -> tuple[KeywordStructure, StrategyReport]:
    """Score a given allocation of ``target`` into campaigns and adgroups.

    Every target keyword must appear in at least one campaign (unless
    ``allow_unassigned``) and in at most one adgroup per campaign.
    """
    alloc = fixed_structure
    if not isinstance(alloc, Mapping):
        alloc = load_allocation(alloc)
    target = frozenset(target)
    known = {c.campaign_id for c in plan.campaigns}
    unknown = sorted(set(alloc) - known)
    if unknown:
        raise DataError(f"fixed structure names unknown campaigns: {unknown}")

    mapped: set[int] = set()
    groups_by_campaign: dict[str, list[frozenset[int]]] = {}
    for cid, groups in alloc.items():
        seen: set[int] = set()
        out = []
        for aid, kws in groups.items():
            z = frozenset(kws)
            if not z:
                raise DataError(f"campaign {cid} adgroup {aid}: empty adgroup")
            outside = sorted(z - target)
            if outside:
                raise DataError(f"campaign {cid} adgroup {aid}: keywords not in target set: {outside}")
            dup = sorted(seen & z) or sorted(k for k in set(kws) if kws.count(k) > 1)
            if dup:
                raise DataError(f"campaign {cid}: keywords {dup} placed in more than one adgroup")
            seen |= z
            out.append(z)
        mapped |= seen
        groups_by_campaign[cid] = sorted(out, key=min)
    unmapped = sorted(target - mapped)
    if unmapped and not allow_unassigned:
        raise DataError(f"target keywords not mapped to any campaign: {unmapped}")

    g = dataset.graph
    markets = []
    for m in plan.markets:
        camps = []
        for c in m.campaigns:
            groups = groups_by_campaign.get(c.campaign_id, [])
            camps.append(score_campaign(c, frozenset().union(*groups), groups, g))
        markets.append(MarketResult(m.market_id, target, tuple(camps),
                                    math.fsum(c.score.total for c in camps)))
    s = build_structure(dataset, target, markets)
    return s, StrategyReport.from_structure(BASE1, s)


def random_allocation(target: AbstractSet[int], plan: AccountPlan,
                      seed: int) -> dict[str, dict[str, list[int]]]:
    """Shuffle ``target`` and deal it round-robin over every (campaign, adgroup) slot."""
    slots = [(c.campaign_id, f"adgroup-{l}")
             for c in plan.campaigns for l in range(1, c.n_adgroups + 1)]
    if len(target) < len(slots):
        raise ConfigError("target set smaller than the number of adgroups")
    kws = sorted(target)
    np.random.default_rng(seed).shuffle(kws)
    out: dict[str, dict[str, list[int]]] = {}
    for i, k in enumerate(kws):
        cid, aid = slots[i % len(slots)]
        out.setdefault(cid, {}).setdefault(aid, []).append(int(k))
    return {cid: {aid: sorted(v) for aid, v in groups.items()} for cid, groups in out.items()}


def compare(plan: AccountPlan, cfg: SolveConfig, n_for_base2: int | None = None,
            base1: Allocation | str | os.PathLike | None = None) -> list[StrategyReport]:
    """MKOF, then BASE2-Ratio, then (if a fixed structure is given) BASE1-Origin.

    ``n_for_base2=None`` sizes the BASE2 target set like the MKOF target set.
    """
    ds = plan.dataset
    if n_for_base2 is not None and not 0 <= n_for_base2 <= len(ds):
        raise ConfigError(f"base2 n={n_for_base2} outside 0..{len(ds)} (pool size)")
    if len(ds) == 0:
        rows = [StrategyReport.zero(MKOF), StrategyReport.zero(BASE2)]
        return rows + ([StrategyReport.zero(BASE1)] if base1 is not None else [])
    structure, _ = solve(plan, cfg)
    rows = [StrategyReport.from_structure(MKOF, structure)]
    if n_for_base2 is None:
        n_for_base2 = len(structure.target)
    rows.append(base2_ratio(ds, n_for_base2, plan, cfg.rng_seed)[1])
    if base1 is not None:
        rows.append(base1_fixed(ds, base1, structure.target, plan)[1])
    return rows


def comparison_csv(rows: list[StrategyReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARISON_FIELDS)
    for r in rows:
        w.writerow([r.strategy, format_micros(r.payoff), format_micros(r.revenue),
                    format_micros(r.cost), repr(r.f1), r.target_size])
    return buf.getvalue()
