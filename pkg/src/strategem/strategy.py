"""Entry-strategy decision rules.

IO firms rank markets by expected per-occupant profit and re-choose every
cycle. RBV firms rank markets by how little resource investment entry would
take, pick once, and are locked in for good; before entering they weigh
entry against liquidating their largest resource holding or selling output
off-market.

Both choosers are pure functions of the snapshots they are given; the
engine supplies optional per-market noise factors for the imperfect-
information model, and tests call them noise-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .model import Firm, Market, ResourceBundle, SfmState


class Action(Enum):
    ENTER = "enter"
    SELL_RESOURCE = "sell_resource"
    SELL_OUTPUT = "sell_output"
    STAY = "stay"
    NONE = "none"


@dataclass
class MarketChoice:
    """Outcome of one firm's choice phase.

    `score` is the expected per-cycle profit for IO choices and for RBV
    the value of the selected action (entry distance feeds candidate
    selection but the score reports the action's value estimate).
    """

    market: int | None
    score: float
    action: Action


def pos(x: float) -> float:
    """Positive part: x when x >= 0, else 0."""
    return x if x >= 0.0 else 0.0


def market_attractiveness(market: Market) -> float:
    """Expected per-occupant profit: shares * value / occupant count.

    An empty market promises its full value to a sole entrant, so the
    divisor is floored at 1.
    """
    return market.shares * market.share_value / max(market.occupants, 1)


def io_choose_market(
    firm: Firm,
    markets: Sequence[Market],
    noise: Sequence[float] | None = None,
) -> MarketChoice:
    """Pick the market with the highest expected per-occupant profit.

    Ties break toward the lowest market id (the scan keeps the first
    maximum). `noise` optionally multiplies each market's estimate.
    """
    if not markets:
        raise ValueError("io_choose_market requires at least one market")
    best = None
    best_score = -math.inf
    for idx, market in enumerate(markets):
        score = market_attractiveness(market)
        if noise is not None:
            score *= noise[idx]
        if score > best_score or (score == best_score and best is not None and market.id < best.id):
            best = market
            best_score = score
    return MarketChoice(market=best.id, score=best_score, action=Action.ENTER)


def resource_shortfall(
    firm: Firm,
    market: Market,
    literal_sign: bool = False,
) -> float:
    """Clamped Euclidean distance from the firm's bundle to the barrier.

    Components where the firm already meets the barrier contribute nothing.
    `literal_sign` flips the orientation to pos(holding - barrier), kept
    only for comparison runs.
    """
    r, g, b = firm.resources.red, firm.resources.green, firm.resources.blue
    barrier = market.barrier
    if literal_sign:
        dr = pos(r - barrier.red)
        dg = pos(g - barrier.green)
        db = pos(b - barrier.blue)
    else:
        dr = pos(barrier.red - r)
        dg = pos(barrier.green - g)
        db = pos(barrier.blue - b)
    return math.sqrt(dr * dr + dg * dg + db * db)


def shortfall_bundle(firm: Firm, market: Market) -> ResourceBundle:
    """Per-type deficit between the firm's bundle and the market barrier."""
    return ResourceBundle(
        pos(market.barrier.red - firm.resources.red),
        pos(market.barrier.green - firm.resources.green),
        pos(market.barrier.blue - firm.resources.blue),
    )


def shortfall_cost(firm: Firm, market: Market, sfm: SfmState) -> float:
    """Purchase cost, at current prices, of closing the barrier deficit."""
    deficit = shortfall_bundle(firm, market)
    return (
        deficit.red * sfm.price_red
        + deficit.green * sfm.price_green
        + deficit.blue * sfm.price_blue
    )


def rbv_candidate(
    firm: Firm,
    markets: Sequence[Market],
    literal_sign: bool = False,
) -> tuple[Market, float]:
    """Market minimizing the resource shortfall, ties toward the lowest id."""
    best = None
    best_dist = math.inf
    for market in markets:
        dist = resource_shortfall(firm, market, literal_sign)
        if dist < best_dist or (dist == best_dist and best is not None and market.id < best.id):
            best = market
            best_dist = dist
    return best, best_dist


def rbv_choose_market(
    firm: Firm,
    markets: Sequence[Market],
    sfm: SfmState,
    output_fraction: float = 0.5,
    noise: float = 1.0,
    literal_sign: bool = False,
) -> MarketChoice:
    """RBV step: find the best-fitting market, then value the three actions.

    A firm already attached to a market stays there (lock-in). Otherwise the
    candidate is the shortfall-minimizing market, and the firm picks the
    highest-valued action among:

    - entering the candidate (expected profit share with itself counted in,
      net of the resource purchase needed to pass the barrier; requires the
      purchase to fit within cash),
    - liquidating its most abundant resource type on the factor market,
    - selling output off-market at `output_fraction` of the entry estimate.

    When no action has positive value the firm does nothing (a wallflower).
    `noise` scales the profit estimates, not the shortfall.
    """
    if firm.market is not None:
        return MarketChoice(market=firm.market, score=0.0, action=Action.STAY)
    if not markets:
        return MarketChoice(market=None, score=0.0, action=Action.NONE)

    candidate, _dist = rbv_candidate(firm, markets, literal_sign)
    expected_profit = candidate.shares * candidate.share_value / (candidate.occupants + 1)
    expected_profit *= noise

    cost = shortfall_cost(firm, candidate, sfm)
    enter_value = expected_profit - cost if cost <= firm.cash else -math.inf

    res = firm.resources
    sell_resource_value = max(
        res.red * sfm.price_red,
        res.green * sfm.price_green,
        res.blue * sfm.price_blue,
    )
    sell_output_value = output_fraction * expected_profit

    best_value = max(enter_value, sell_resource_value, sell_output_value)
    if best_value <= 0.0:
        return MarketChoice(market=None, score=best_value, action=Action.NONE)
    if enter_value == best_value:
        return MarketChoice(market=candidate.id, score=enter_value, action=Action.ENTER)
    if sell_resource_value == best_value:
        return MarketChoice(market=None, score=sell_resource_value, action=Action.SELL_RESOURCE)
    return MarketChoice(market=candidate.id, score=sell_output_value, action=Action.SELL_OUTPUT)
