"""Agent-based simulator of IO vs. RBV market-entry strategies."""

from .model import (
    Firm,
    Market,
    ProfitBreakdown,
    ResourceBundle,
    SfmState,
    SimConfig,
    Strategy,
    bundle_value,
    total_asset_value,
)
from .strategy import (
    Action,
    MarketChoice,
    io_choose_market,
    rbv_choose_market,
    resource_shortfall,
)
from .engine import World, allocate_market_profit, sfm_buy, sfm_sell
from .metrics import (
    RbvProfile,
    StrategySnapshot,
    classify_rbv,
    instant_roa,
    relative_diff,
    top_k_snapshot,
    total_performance,
)
from .experiment import BatchConfig, RunSummary, derive_seed, run_batch, run_one

__all__ = [
    "Action",
    "BatchConfig",
    "Firm",
    "Market",
    "MarketChoice",
    "ProfitBreakdown",
    "RbvProfile",
    "ResourceBundle",
    "RunSummary",
    "SfmState",
    "SimConfig",
    "Strategy",
    "StrategySnapshot",
    "World",
    "allocate_market_profit",
    "bundle_value",
    "classify_rbv",
    "derive_seed",
    "instant_roa",
    "io_choose_market",
    "rbv_choose_market",
    "relative_diff",
    "resource_shortfall",
    "run_batch",
    "run_one",
    "sfm_buy",
    "sfm_sell",
    "top_k_snapshot",
    "total_asset_value",
    "total_performance",
]
