"""Run configuration: one JSON document describing data files and the account plan.

Example::

    {
      "keywords": "keywords.csv",
      "edges": "edges.csv",
      "seeds": ["keyword 0003", 17],
      "budget": "6000",
      "econ": {"gamma": 0},
      "solve": {"epsilon": "0", "max_iterations": 50, "rng_seed": 7},
      "markets": [
        {"market_id": "m1", "budget": "6000",
         "campaigns": [{"campaign_id": "c1", "theme_seeds": [3], "budget": "2000",
                        "adgroups": 2}]}
      ]
    }

Relative paths resolve against the config file's directory. Seeds given as
strings are looked up by keyword text, integers are keyword ids.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .assignment import CampaignSpec, MarketSpec
from .dataio import Dataset, load_dataset
from .economics import EconConfig
from .errors import ConfigError, DataError
from .money import to_micros
from .solver import AccountPlan, SolveConfig

TOP_KEYS = {"keywords", "edges", "seeds", "budget", "econ", "solve", "markets", "base2_n"}


@dataclass(frozen=True)
class RunConfig:
    keywords_path: Path
    edges_path: Path
    plan: AccountPlan
    solve: SolveConfig
    base2_n: int | None = None

    @property
    def dataset(self) -> Dataset:
        return self.plan.dataset

    def with_seed(self, seed: int | None) -> "RunConfig":
        if seed is None:
            return self
        return replace(self, solve=replace(self.solve, rng_seed=seed))


def _money(value, where: str) -> int:
    try:
        return to_micros(value)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _resolve_keywords(items, dataset: Dataset, where: str) -> frozenset[int]:
    if not isinstance(items, list):
        raise ConfigError(f"{where} must be a list")
    out = set()
    for it in items:
        if isinstance(it, bool):
            raise ConfigError(f"{where}: invalid keyword reference {it!r}")
        if isinstance(it, int):
            if it not in dataset.graph:
                raise ConfigError(f"{where}: unknown keyword id {it}")
            out.add(it)
        elif isinstance(it, str):
            try:
                out.add(dataset.id_for_text(it))
            except DataError:
                raise ConfigError(f"{where}: unknown keyword text {it!r}") from None
        else:
            raise ConfigError(f"{where}: invalid keyword reference {it!r}")
    return frozenset(out)


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing field {key!r}")
    return d[key]


def parse_run_config(raw: dict, base_dir: Path) -> RunConfig:
    """Build a RunConfig from parsed JSON; loads the referenced dataset."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    kw_path = base_dir / str(_require(raw, "keywords", "config"))
    edge_path = base_dir / str(_require(raw, "edges", "config"))
    dataset = load_dataset(kw_path, edge_path)

    markets = []
    for mi, m in enumerate(_require(raw, "markets", "config")):
        where = f"markets[{mi}]"
        if not isinstance(m, dict):
            raise ConfigError(f"{where} must be an object")
        mid = str(_require(m, "market_id", where))
        campaigns = []
        for ci, c in enumerate(m.get("campaigns", [])):
            cwhere = f"{where}.campaigns[{ci}]"
            if not isinstance(c, dict):
                raise ConfigError(f"{cwhere} must be an object")
            adgroups = c.get("adgroups", 1)
            if isinstance(adgroups, bool) or not isinstance(adgroups, int):
                raise ConfigError(f"{cwhere}: adgroups must be an integer")
            campaigns.append(CampaignSpec(
                campaign_id=str(_require(c, "campaign_id", cwhere)),
                market_id=mid,
                theme_seeds=_resolve_keywords(_require(c, "theme_seeds", cwhere), dataset,
                                              f"{cwhere}.theme_seeds"),
                budget_micros=_money(_require(c, "budget", cwhere), f"{cwhere}.budget"),
                n_adgroups=adgroups,
            ))
        markets.append(MarketSpec(mid, _money(_require(m, "budget", where), f"{where}.budget"),
                                  tuple(campaigns)))

    econ_raw = raw.get("econ", {})
    solve_raw = raw.get("solve", {})
    if not isinstance(econ_raw, dict) or not isinstance(solve_raw, dict):
        raise ConfigError("econ and solve must be objects")
    try:
        econ = EconConfig(gamma=float(econ_raw.get("gamma", 0.0)))
        solve = SolveConfig(
            epsilon_micros=_money(solve_raw.get("epsilon", 0), "solve.epsilon"),
            max_iterations=int(solve_raw.get("max_iterations", 100)),
            rng_seed=int(solve_raw.get("rng_seed", 0)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"econ/solve: {exc}") from None

    plan = AccountPlan(
        dataset=dataset,
        seeds=_resolve_keywords(_require(raw, "seeds", "config"), dataset, "seeds"),
        budget_micros=_money(_require(raw, "budget", "config"), "budget"),
        markets=tuple(markets),
        econ=econ,
    )
    base2_n = raw.get("base2_n")
    if base2_n is not None and (isinstance(base2_n, bool) or not isinstance(base2_n, int)):
        raise ConfigError("base2_n must be an integer")
    return RunConfig(kw_path, edge_path, plan, solve, base2_n)


def load_run_config(path: str | os.PathLike) -> RunConfig:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return parse_run_config(raw, path.parent)
