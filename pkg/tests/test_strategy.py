"""Chooser examples, brute-force oracles, and invariance properties."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategem.model import Firm, Market, ResourceBundle, SfmState, Strategy
from strategem.strategy import (
    Action,
    io_choose_market,
    market_attractiveness,
    rbv_candidate,
    rbv_choose_market,
    resource_shortfall,
    shortfall_bundle,
    shortfall_cost,
)


def make_market(mid, shares, value, barrier=(0, 0, 0), occupants=0):
    m = Market(mid, shares, value, ResourceBundle(*barrier))
    m.occupants = occupants
    return m


def make_firm(strategy=Strategy.IO, cash=1000.0, resources=(0, 0, 0)):
    return Firm(0, strategy, cash, ResourceBundle(*resources))


def make_sfm(pr=1.0, pg=1.0, pb=1.0):
    return SfmState(ResourceBundle(1e6, 1e6, 1e6), pr, pg, pb)


class TestIoChooser:
    def test_prefers_higher_expected_profit(self):
        a = make_market(0, 10, 2.0, occupants=4)   # 10*2/4 = 5
        b = make_market(1, 100, 1.0, occupants=50)  # 100*1/50 = 2
        choice = io_choose_market(make_firm(), [a, b])
        assert choice.market == 0
        assert choice.score == pytest.approx(5.0)
        assert choice.action is Action.ENTER

    def test_empty_market_divisor_floored_at_one(self):
        m = make_market(0, 10, 1.0, occupants=0)
        choice = io_choose_market(make_firm(), [m])
        assert choice.market == 0
        assert choice.score == pytest.approx(10.0)

    def test_tie_breaks_to_lowest_id(self):
        a = make_market(3, 10, 1.0, occupants=1)
        b = make_market(1, 10, 1.0, occupants=1)
        assert io_choose_market(make_firm(), [a, b]).market == 1

    def test_requires_markets(self):
        with pytest.raises(ValueError):
            io_choose_market(make_firm(), [])

    def test_matches_brute_force_argmax(self):
        rng = np.random.Generator(np.random.PCG64(1))
        for _ in range(500):
            markets = [
                make_market(
                    j,
                    int(rng.choice([10, 100, 1000])),
                    float(rng.uniform(0.1, 3.0)),
                    occupants=int(rng.integers(0, 30)),
                )
                for j in range(20)
            ]
            choice = io_choose_market(make_firm(), markets)
            scores = [market_attractiveness(m) for m in markets]
            best = max(scores)
            oracle = min(m.id for m, s in zip(markets, scores) if s == best)
            assert choice.market == oracle

    @given(st.floats(0.1, 100.0))
    def test_invariant_under_value_rescaling(self, scale):
        markets = [
            make_market(0, 10, 1.3, occupants=2),
            make_market(1, 100, 0.4, occupants=7),
            make_market(2, 1000, 0.9, occupants=40),
        ]
        base = io_choose_market(make_firm(), markets).market
        for m in markets:
            m.share_value *= scale
        assert io_choose_market(make_firm(), markets).market == base


class TestResourceShortfall:
    def test_zero_when_firm_dominates(self):
        firm = make_firm(resources=(5, 5, 5))
        market = make_market(0, 10, 1.0, barrier=(3, 3, 3))
        assert resource_shortfall(firm, market) == 0.0

    def test_clamped_euclidean(self):
        firm = make_firm(resources=(5, 2, 0))
        market = make_market(0, 10, 1.0, barrier=(3, 4, 2))
        assert resource_shortfall(firm, market) == pytest.approx(math.sqrt(8))

    def test_zero_zero(self):
        firm = make_firm(resources=(0, 0, 0))
        market = make_market(0, 10, 1.0, barrier=(0, 0, 0))
        assert resource_shortfall(firm, market) == 0.0

    def test_literal_sign_flips_orientation(self):
        firm = make_firm(resources=(5, 2, 0))
        market = make_market(0, 10, 1.0, barrier=(3, 4, 2))
        # surplus components: (5-3, 0, 0) -> 2
        assert resource_shortfall(firm, market, literal_sign=True) == pytest.approx(2.0)

    def test_shortfall_bundle_and_cost(self):
        firm = make_firm(resources=(5, 2, 0))
        market = make_market(0, 10, 1.0, barrier=(3, 4, 2))
        deficit = shortfall_bundle(firm, market)
        assert deficit.as_tuple() == (0.0, 2.0, 2.0)
        assert shortfall_cost(firm, market, make_sfm(1, 3, 5)) == pytest.approx(16.0)


class TestRbvChooser:
    def test_lock_in(self):
        firm = make_firm(Strategy.RBV)
        firm.market = 7
        choice = rbv_choose_market(firm, [make_market(0, 10, 1.0)], make_sfm())
        assert choice.action is Action.STAY
        assert choice.market == 7

    def test_exact_barrier_match_enters(self):
        firm = make_firm(Strategy.RBV, resources=(3, 3, 3))
        markets = [
            make_market(0, 10, 1.0, barrier=(9, 9, 9)),
            make_market(1, 10, 1.0, barrier=(3, 3, 3)),
        ]
        choice = rbv_choose_market(firm, markets, make_sfm())
        assert choice.action is Action.ENTER
        assert choice.market == 1

    def test_none_when_no_markets(self):
        choice = rbv_choose_market(make_firm(Strategy.RBV), [], make_sfm())
        assert choice.action is Action.NONE
        assert choice.market is None

    def test_unaffordable_entry_falls_back(self):
        # Entry costs 300 > cash 10; liquidating the bundle is worth 5,
        # selling output is worth output_fraction * expected profit.
        firm = make_firm(Strategy.RBV, cash=10.0, resources=(5, 0, 0))
        markets = [make_market(0, 100, 1.0, barrier=(100, 100, 105))]
        choice = rbv_choose_market(
            firm, markets, make_sfm(), output_fraction=0.0
        )
        assert choice.action is Action.SELL_RESOURCE
        assert choice.score == pytest.approx(5.0)

    def test_candidate_matches_brute_force_argmin(self):
        rng = np.random.Generator(np.random.PCG64(2))
        for _ in range(500):
            firm = make_firm(Strategy.RBV, resources=tuple(rng.uniform(0, 100, 3)))
            markets = [
                make_market(j, 10, 1.0, barrier=tuple(rng.uniform(0, 100, 3)))
                for j in range(20)
            ]
            candidate, dist = rbv_candidate(firm, markets)
            dists = [resource_shortfall(firm, m) for m in markets]
            best = min(dists)
            oracle = min(m.id for m, d in zip(markets, dists) if d == best)
            assert candidate.id == oracle
            assert dist == pytest.approx(best)

    @given(st.floats(0.0, 50.0))
    @settings(max_examples=30)
    def test_candidate_invariant_under_common_translation(self, shift):
        firm = make_firm(Strategy.RBV, resources=(10, 40, 5))
        barriers = [(30, 20, 50), (5, 60, 10), (45, 45, 0)]
        markets = [make_market(j, 10, 1.0, barrier=b) for j, b in enumerate(barriers)]
        base = rbv_candidate(firm, markets)[0].id
        firm2 = make_firm(
            Strategy.RBV, resources=tuple(c + shift for c in (10, 40, 5))
        )
        markets2 = [
            make_market(j, 10, 1.0, barrier=tuple(c + shift for c in b))
            for j, b in enumerate(barriers)
        ]
        assert rbv_candidate(firm2, markets2)[0].id == base

    def test_dominating_firm_gets_zero_shortfall_candidate(self):
        rng = np.random.Generator(np.random.PCG64(3))
        for _ in range(200):
            barriers = [tuple(rng.uniform(0, 100, 3)) for _ in range(10)]
            dominated = barriers[int(rng.integers(0, 10))]
            firm = make_firm(
                Strategy.RBV, resources=tuple(c + 1.0 for c in dominated)
            )
            markets = [make_market(j, 10, 1.0, barrier=b) for j, b in enumerate(barriers)]
            _, dist = rbv_candidate(firm, markets)
            assert dist == 0.0
