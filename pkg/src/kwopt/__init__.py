"""Multi-level keyword optimization for sponsored search accounts."""

from .assignment import CampaignSpec, MarketSpec, assign_campaign, assign_market, campaign_relevance
from .baselines import base1_fixed, base2_ratio, compare
from .dataio import Dataset, KeywordRecord, SynthConfig, load_dataset, synthesize, write_dataset
from .economics import EconConfig, keyword_cost, keyword_profit, set_payoff
from .errors import ConfigError, DataError, StructuralError
from .graph import (
    KeywordGraph,
    geodesic_distance,
    neighbor_vector,
    one_hop_closure,
    pair_relevance,
)
from .grouping import adgroup_level_score, cross_relevance, intra_group_relevance, kmeans_partition
from .solver import AccountPlan, KeywordStructure, SolveConfig, SolveTrace, score_market, solve
from .targeting import TargetingState, expand, targeting_step, trim

__version__ = "0.1.0"
