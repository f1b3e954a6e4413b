import json
from fractions import Fraction

import pytest

from kwopt.assignment import CampaignSpec, MarketSpec
from kwopt.baselines import (
    BASE1,
    BASE2,
    MKOF,
    base1_fixed,
    base2_ratio,
    compare,
    comparison_csv,
    ctr_cpc_ratio,
    random_allocation,
    top_n_by_ratio,
)
from kwopt.errors import ConfigError, DataError
from kwopt.solver import AccountPlan, SolveConfig, solve

from helpers import M, clique_edges, make_dataset, random_plan, rec
from conftest import BENCHMARK


def plan_for(ds, seeds, n3=1, budget=1000 * M):
    c = CampaignSpec("c1", "m", frozenset(seeds), budget, n3)
    return AccountPlan(ds, frozenset(seeds), budget, (MarketSpec("m", budget, (c,)),))


def ratio_dataset():
    recs = [
        rec(0, clicks=10, impressions=100, cpc="0.2"),  # 0.5
        rec(1, clicks=10, impressions=100, cpc="0.5"),  # 0.2
        rec(2, clicks=9, impressions=100, cpc="0.1"),   # 0.9
    ]
    return make_dataset(3, clique_edges(range(3)), recs)


def test_ctr_cpc_ratio_exact():
    ds = ratio_dataset()
    assert [ctr_cpc_ratio(r) for r in ds.records] == [Fraction(1, 2), Fraction(1, 5), Fraction(9, 10)]
    assert ctr_cpc_ratio(rec(0, clicks=0)) == 0
    assert ctr_cpc_ratio(rec(0, clicks=5, cpc="0")) == float("inf")


def test_top_n():
    ds = ratio_dataset()
    assert top_n_by_ratio(ds, 2) == {0, 2}
    assert top_n_by_ratio(ds, 3) == {0, 1, 2}
    tied = make_dataset(3, [], [rec(i) for i in range(3)])
    assert top_n_by_ratio(tied, 2) == {0, 1}


def test_base2_sizes():
    ds = ratio_dataset()
    plan = plan_for(ds, {0})
    s, report = base2_ratio(ds, 3, plan)
    assert s.target == {0, 1, 2} and report.strategy == BASE2
    s, report = base2_ratio(ds, 0, plan)
    assert s.target == frozenset() and report.payoff == 0 and report.f1 == 0.0
    with pytest.raises(ConfigError):
        base2_ratio(ds, 4, plan)


def test_base1_mirror_matches_solver():
    plan = random_plan(5, n_range=(60, 100))
    structure, _ = solve(plan, SolveConfig(rng_seed=3))
    s, report = base1_fixed(plan.dataset, structure.allocation(), structure.target, plan,
                            allow_unassigned=True)
    assert s.f1 == structure.f1 and s.payoff == structure.payoff
    assert report.strategy == BASE1


def test_base1_random_allocation_keeps_payoff():
    ds = make_dataset(8, clique_edges(range(4)) + clique_edges(range(4, 8)))
    c1 = CampaignSpec("c1", "m", frozenset({0}), 100 * M, 1)
    c2 = CampaignSpec("c2", "m", frozenset({4}), 100 * M, 1)
    plan = AccountPlan(ds, {0, 4}, 200 * M, (MarketSpec("m", 200 * M, (c1, c2)),))
    structure, _ = solve(plan, SolveConfig())
    assert structure.f1 == 4.0
    shuffled = {"c1": {"adgroup-1": [0, 1, 4, 5]}, "c2": {"adgroup-1": [2, 3, 6, 7]}}
    s, _ = base1_fixed(ds, shuffled, structure.target, plan)
    assert s.payoff == structure.payoff and s.f1 < structure.f1
    alloc = random_allocation(structure.target, plan, seed=1)
    assert sorted(k for g in alloc.values() for z in g.values() for k in z) == sorted(structure.target)


def test_base1_rejects_bad_allocations(tmp_path):
    ds = make_dataset(4, clique_edges(range(4)))
    plan = plan_for(ds, {0}, n3=2)
    target = frozenset(range(4))
    bad = [
        {"c1": {"a": [0, 1], "b": [1, 2, 3]}},
        {"c1": {"a": [0, 0, 1], "b": [2, 3]}},
        {"c1": {"a": [0, 1], "b": []}},
        {"cX": {"a": [0, 1, 2, 3]}},
        {"c1": {"a": [0, 1]}},
        {"c1": {"a": [0, 1, 2, 3], "b": [9]}},
    ]
    for alloc in bad:
        with pytest.raises(DataError):
            base1_fixed(ds, alloc, target, plan)
    path = tmp_path / "fixed.json"
    path.write_text(json.dumps({"c1": {"a": [0, 1], "b": [2, 3]}}))
    s, _ = base1_fixed(ds, path, target, plan)
    assert s.campaign("c1").adgroups == (frozenset({0, 1}), frozenset({2, 3}))
    path.write_text("{not json")
    with pytest.raises(DataError):
        base1_fixed(ds, path, target, plan)


def test_compare_rows():
    ds = ratio_dataset()
    plan = plan_for(ds, {0})
    rows = compare(plan, SolveConfig(), 2)
    assert [r.strategy for r in rows] == [MKOF, BASE2]
    rows = compare(plan, SolveConfig(), None, {"c1": {"adgroup-1": [0, 1, 2]}})
    assert [r.strategy for r in rows] == [MKOF, BASE2, BASE1]
    with pytest.raises(ConfigError):
        compare(plan, SolveConfig(), 4)


def test_compare_single_keyword():
    ds = make_dataset(1, [])
    rows = compare(plan_for(ds, {0}), SolveConfig(), 1)
    assert rows[0].payoff == rows[1].payoff and rows[0].target_size == 1


def test_compare_empty_pool():
    ds = make_dataset(0, [], [])
    plan = AccountPlan(ds, set(), 0, ())
    rows = compare(plan, SolveConfig(), 0)
    assert [(r.strategy, r.payoff, r.f1) for r in rows] == [(MKOF, 0, 0.0), (BASE2, 0, 0.0)]
    assert comparison_csv(rows).splitlines()[1] == "MKOF,0,0,0,0.0,0"


def test_fixture_ordering(benchmark_run):
    rows = compare(benchmark_run.plan, benchmark_run.solve, None, BENCHMARK / "base1.json")
    mkof, base2, base1 = rows
    assert mkof.f1 >= base1.f1 and mkof.payoff >= base2.payoff
    assert comparison_csv(rows) == (BENCHMARK / "golden" / "comparison.csv").read_text()
