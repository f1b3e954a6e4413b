"""Market-level targeting: grow the reference set along the pool graph, then trim."""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet

from .dataio import Dataset
from .economics import EconConfig, passes_trim
from .errors import DataError
from .graph import one_hop_closure


@dataclass(frozen=True)
class TargetingState:
    h_prev: frozenset[int]
    h_expanded: frozenset[int]
    h_curr: frozenset[int]
    iteration: int = 0

    @classmethod
    def initial(cls, seeds: AbstractSet[int]) -> "TargetingState":
        s = frozenset(seeds)
        return cls(s, s, s, 0)


def _check_members(pool: Dataset, s: AbstractSet[int], what: str) -> None:
    outside = [k for k in s if k not in pool.graph]
    if outside:
        raise DataError(f"{what} contains keywords outside the pool: {sorted(outside)}")


def expand(pool: Dataset, h_prev: AbstractSet[int]) -> frozenset[int]:
    """One-hop neighbourhood closure of ``h_prev`` on the pool graph."""
    _check_members(pool, h_prev, "reference set")
    return one_hop_closure(pool.graph, h_prev)


def trim(pool: Dataset, h_exp: AbstractSet[int], econ: EconConfig,
         seeds: AbstractSet[int]) -> frozenset[int]:
    """Keep seeds plus every keyword with positive profit and return ratio >= gamma."""
    _check_members(pool, h_exp, "expanded set")
    return frozenset(k for k in h_exp if k in seeds or passes_trim(pool[k], econ.gamma))


def targeting_step(pool: Dataset, state: TargetingState, econ: EconConfig,
                   seeds: AbstractSet[int]) -> TargetingState:
    h_prev = state.h_curr
    h_exp = expand(pool, h_prev)
    return TargetingState(h_prev, h_exp, trim(pool, h_exp, econ, seeds), state.iteration + 1)
