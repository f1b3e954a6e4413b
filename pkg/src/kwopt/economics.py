"""Per-keyword cost, revenue and profit, and set payoff, in micro-units."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .dataio import Dataset, KeywordRecord
from .errors import ConfigError, DataError

Records = Union[Dataset, Sequence[KeywordRecord], Mapping[int, KeywordRecord]]


@dataclass(frozen=True)
class EconConfig:
    """``gamma`` is the minimum profit per unit of spend a keyword must return."""

    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not self.gamma >= 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")


def keyword_cost(r: KeywordRecord) -> int:
    return r.clicks * r.cpc_micros


def keyword_revenue(r: KeywordRecord) -> int:
    return r.clicks * r.rpc_micros


def keyword_profit(r: KeywordRecord) -> int:
    return r.clicks * (r.rpc_micros - r.cpc_micros)


def return_ratio(r: KeywordRecord) -> Fraction | float:
    """Profit over cost, exact. Zero cost maps to +inf if profitable, else 0."""
    cost = keyword_cost(r)
    profit = keyword_profit(r)
    if cost == 0:
        return float("inf") if profit > 0 else Fraction(0)
    return Fraction(profit, cost)


def passes_trim(r: KeywordRecord, gamma: float) -> bool:
    """Profitable and returning at least ``gamma`` per unit of spend."""
    if keyword_profit(r) <= 0:
        return False
    ratio = return_ratio(r)
    # decimal reading of gamma, so 0.05 means exactly 1/20
    bar = Fraction(repr(gamma)) if isinstance(gamma, float) else Fraction(gamma)
    return ratio == float("inf") or ratio >= bar


def _lookup(records: Records, k: int) -> KeywordRecord:
    try:
        return records[k]
    except (KeyError, IndexError):
        raise DataError(f"no record for keyword {k}") from None


def set_payoff(s: Iterable[int], records: Records) -> int:
    """Total profit of a keyword set."""
    return sum(keyword_profit(_lookup(records, k)) for k in s)


def set_revenue(s: Iterable[int], records: Records) -> int:
    return sum(keyword_revenue(_lookup(records, k)) for k in s)


def set_cost(s: Iterable[int], records: Records) -> int:
    return sum(keyword_cost(_lookup(records, k)) for k in s)
