"""Single-run simulation engine.

One `World` owns all mutable state for a run and a private RNG stream;
`step_cycle` advances it one period in a fixed order, so two worlds built
from the same config and seed produce bit-identical histories.

Cycle order: firms act (choose / trade / enter) in ascending id, markets
pay out, costs are charged, share values and factor prices update, ROA and
survival are settled, ages tick, and a report is emitted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO

import numpy as np

from .model import (
    Firm,
    Market,
    ProfitBreakdown,
    ResourceBundle,
    SfmState,
    SimConfig,
    Strategy,
    total_asset_value,
)
from .strategy import (
    Action,
    io_choose_market,
    rbv_choose_market,
    shortfall_bundle,
)

# Component-wise slack allowed when checking a bundle against a barrier;
# buying an exact deficit can land one ulp short.
_BARRIER_TOL = 1e-9

TRACE_COLUMNS = (
    "run_id",
    "cycle",
    "firm_id",
    "strategy",
    "market_id",
    "cash",
    "red",
    "green",
    "blue",
    "tr",
    "tc",
    "profit",
    "roa",
    "total_perf",
    "alive",
)


@dataclass
class PurchaseResult:
    """Outcome of a factor-market buy: what moved and what it cost."""

    bought: ResourceBundle
    cost: float


@dataclass
class SaleResult:
    """Outcome of a factor-market sale."""

    sold: ResourceBundle
    proceeds: float


@dataclass
class CycleReport:
    """Per-cycle trace record: firm rows plus market and SFM snapshots."""

    cycle: int
    firm_rows: list[tuple]
    market_states: list[tuple[int, int, float]]
    sfm_prices: tuple[float, float, float]
    sfm_stock: tuple[float, float, float]


def allocate_market_profit(market: Market) -> float:
    """Equal per-occupant revenue share: shares * value / occupants.

    Markets with no occupants allocate nothing.
    """
    if market.occupants < 1:
        return 0.0
    return market.shares * market.share_value / market.occupants


def update_share_value(
    market: Market,
    crowding: float,
    noise: float,
    floor: float,
) -> float:
    """Share value reverts to its initial level, depressed by crowding.

    v = v0 / (1 + crowding * occupants) * noise, clamped to a positive
    floor. With no occupants and unit noise the value returns to v0.
    """
    value = market.initial_value / (1.0 + crowding * market.occupants) * noise
    return max(value, floor)


def sfm_buy(firm: Firm, wanted: ResourceBundle, sfm: SfmState) -> PurchaseResult:
    """Buy up to `wanted` from the factor market within cash and stock.

    Transfers min(wanted, stock) per type when the full cost fits within
    cash; otherwise the largest affordable uniform fraction of that amount.
    Never drives cash below zero.
    """
    stock = sfm.stock
    qr = min(wanted.red, stock.red)
    qg = min(wanted.green, stock.green)
    qb = min(wanted.blue, stock.blue)
    cost = qr * sfm.price_red + qg * sfm.price_green + qb * sfm.price_blue
    if cost <= 0.0:
        return PurchaseResult(ResourceBundle(), 0.0)
    if cost > firm.cash:
        if firm.cash <= 0.0:
            return PurchaseResult(ResourceBundle(), 0.0)
        frac = firm.cash / cost
        qr *= frac
        qg *= frac
        qb *= frac
        cost = firm.cash
    stock.red -= qr
    stock.green -= qg
    stock.blue -= qb
    res = firm.resources
    res.red += qr
    res.green += qg
    res.blue += qb
    firm.cash -= cost
    if firm.cash < 0.0:  # guard against rounding in the fractional branch
        firm.cash = 0.0
    return PurchaseResult(ResourceBundle(qr, qg, qb), cost)


def sfm_sell(firm: Firm, offered: ResourceBundle, sfm: SfmState) -> SaleResult:
    """Sell `offered` to the factor market at current prices.

    Offers exceeding the firm's holdings are rejected.
    """
    res = firm.resources
    if offered.red > res.red or offered.green > res.green or offered.blue > res.blue:
        raise ValueError("cannot sell more than the firm holds")
    proceeds = (
        offered.red * sfm.price_red
        + offered.green * sfm.price_green
        + offered.blue * sfm.price_blue
    )
    res.red -= offered.red
    res.green -= offered.green
    res.blue -= offered.blue
    stock = sfm.stock
    stock.red += offered.red
    stock.green += offered.green
    stock.blue += offered.blue
    firm.cash += proceeds
    return SaleResult(offered.copy(), proceeds)


def update_sfm_prices(
    sfm: SfmState,
    demand: tuple[float, float, float],
    supply: tuple[float, float, float],
    alpha: float,
    noise: tuple[float, float, float],
    floor: float,
) -> None:
    """Move each price by the relative demand/supply imbalance, with noise.

    price' = price * (1 + alpha * (D - S) / (D + S + 1)) * noise, clamped
    to a positive floor. Balanced trade with unit noise leaves the price
    unchanged.
    """
    prices = []
    for price, d, s, n in zip(sfm.prices, demand, supply, noise):
        new = price * (1.0 + alpha * (d - s) / (d + s + 1.0)) * n
        prices.append(max(new, floor))
    sfm.price_red, sfm.price_green, sfm.price_blue = prices


def survival_check(firm: Firm, asset_value: float, grace: int) -> bool:
    """A firm dies when its assets hit zero or cash stays non-positive
    for `grace` consecutive cycles."""
    if asset_value <= 0.0:
        return False
    if firm.cash <= 0.0:
        firm.negative_cash_streak += 1
        if firm.negative_cash_streak >= grace:
            return False
    else:
        firm.negative_cash_streak = 0
    return True


class World:
    """All mutable state for one run plus its RNG stream."""

    def __init__(self, config: SimConfig, rng: np.random.Generator, run_id: int = 0):
        config.validate()
        self.config = config
        self.rng = rng
        self.run_id = run_id
        self.cycle = 0
        self.markets = self._init_markets()
        self.firms = self._init_firms()
        self.sfm = SfmState(
            stock=ResourceBundle(
                config.initial_stock, config.initial_stock, config.initial_stock
            ),
            price_red=config.initial_price,
            price_green=config.initial_price,
            price_blue=config.initial_price,
        )
        self._demand_red = self._demand_green = self._demand_blue = 0.0
        self._supply_red = self._supply_green = self._supply_blue = 0.0
        self._demand_eps_weight = 0.0
        self._demand_units = 0.0

    def _init_markets(self) -> list[Market]:
        cfg = self.config
        rng = self.rng
        lo, hi = cfg.barrier_range
        vlo, vhi = cfg.share_value_range
        sizes = list(cfg.market_size_choices)
        markets = []
        for j in range(cfg.n_markets):
            shares = sizes[rng.integers(0, len(sizes))]
            value = rng.uniform(vlo, vhi)
            if cfg.barrier_sum_range is not None:
                slo, shi = cfg.barrier_sum_range
                total = rng.uniform(slo, shi)
                a = cfg.barrier_mix_alpha
                mix = rng.dirichlet((a, a, a))
                barrier = ResourceBundle(
                    total * mix[0], total * mix[1], total * mix[2]
                )
            else:
                barrier = ResourceBundle(
                    rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)
                )
            markets.append(Market(j, int(shares), value, barrier))
        return markets

    def _init_firms(self) -> list[Firm]:
        cfg = self.config
        rng = self.rng
        lo, hi = cfg.resource_init_range
        half = cfg.n_firms // 2
        tags = np.array([0] * half + [1] * (cfg.n_firms - half))
        rng.shuffle(tags)
        firms = []
        for i in range(cfg.n_firms):
            if cfg.resource_sum_range is not None:
                slo, shi = cfg.resource_sum_range
                total = rng.uniform(slo, shi)
                a = cfg.resource_mix_alpha
                mix = rng.dirichlet((a, a, a))
                bundle = ResourceBundle(
                    total * mix[0], total * mix[1], total * mix[2]
                )
            else:
                bundle = ResourceBundle(
                    rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)
                )
            strategy = Strategy.IO if tags[i] == 0 else Strategy.RBV
            firms.append(Firm(i, strategy, cfg.initial_cash, bundle))
        return firms

    # -- per-cycle machinery -------------------------------------------------

    def _estimate_epsilon(self, firm: Firm) -> float:
        """Age-linked estimation error: older firms estimate better."""
        return self.config.noise_amplitude / (1.0 + firm.age)

    def _attempt_entry(self, firm: Firm, market: Market) -> bool:
        """Buy the barrier deficit and join the market if it is then met.

        Leaving the previous market happens only on a successful join, so a
        failed attempt leaves the firm where it was.
        """
        deficit = shortfall_bundle(firm, market)
        if deficit.red > 0 or deficit.green > 0 or deficit.blue > 0:
            # A firm that cannot afford (or the market cannot supply) the
            # whole deficit stays out this cycle and retries later; no
            # partial siege purchases.
            stock = self.sfm.stock
            if (
                deficit.red > stock.red
                or deficit.green > stock.green
                or deficit.blue > stock.blue
            ):
                return False
            cost = (
                deficit.red * self.sfm.price_red
                + deficit.green * self.sfm.price_green
                + deficit.blue * self.sfm.price_blue
            )
            if cost > firm.cash:
                return False
            purchase = sfm_buy(firm, deficit, self.sfm)
            firm.cycle_purchases += purchase.cost
            self._demand_red += purchase.bought.red
            self._demand_green += purchase.bought.green
            self._demand_blue += purchase.bought.blue
            units = purchase.bought.red + purchase.bought.green + purchase.bought.blue
            self._demand_eps_weight += units * self._estimate_epsilon(firm)
            self._demand_units += units
        if not firm.resources.dominates(market.barrier, _BARRIER_TOL):
            return False
        if firm.market is not None:
            self.markets[firm.market].occupants -= 1
        firm.market = market.id
        market.occupants += 1
        return True

    def step_cycle(self) -> CycleReport:
        cfg = self.config
        rng = self.rng
        markets = self.markets
        sfm = self.sfm
        self.cycle += 1

        self._demand_red = self._demand_green = self._demand_blue = 0.0
        self._supply_red = self._supply_green = self._supply_blue = 0.0
        self._demand_eps_weight = 0.0
        self._demand_units = 0.0
        pending_output_revenue: dict[int, float] = {}

        # (1)-(3) firms act in ascending id against live market state: each
        # decision sees the occupancy left by every earlier mover in the
        # same cycle, so a crowd disperses instead of piling onto one
        # opportunity.
        for firm in self.firms:
            if not firm.alive:
                continue
            firm.cycle_purchases = 0.0
            eps = self._estimate_epsilon(firm)
            if firm.strategy is Strategy.IO:
                if eps > 0.0:
                    noise = 1.0 + eps * (2.0 * rng.random(len(markets)) - 1.0)
                else:
                    noise = None
                choice = io_choose_market(firm, markets, noise)
                if choice.market == firm.market:
                    continue
            else:
                if firm.market is not None:
                    continue  # locked in
                noise = 1.0 + eps * (2.0 * rng.random() - 1.0) if eps > 0.0 else 1.0
                choice = rbv_choose_market(
                    firm,
                    markets,
                    sfm,
                    output_fraction=cfg.output_fraction,
                    noise=noise,
                    literal_sign=cfg.literal_distance_sign,
                )
                if choice.action is Action.NONE:
                    continue
            if choice.action is Action.ENTER:
                self._attempt_entry(firm, markets[choice.market])
            elif choice.action is Action.SELL_RESOURCE:
                res = firm.resources
                values = (
                    res.red * sfm.price_red,
                    res.green * sfm.price_green,
                    res.blue * sfm.price_blue,
                )
                kind = values.index(max(values))
                offer = ResourceBundle(
                    res.red if kind == 0 else 0.0,
                    res.green if kind == 1 else 0.0,
                    res.blue if kind == 2 else 0.0,
                )
                sale = sfm_sell(firm, offer, sfm)
                self._supply_red += sale.sold.red
                self._supply_green += sale.sold.green
                self._supply_blue += sale.sold.blue
            elif choice.action is Action.SELL_OUTPUT:
                pending_output_revenue[firm.id] = choice.score

        # (4) markets allocate revenue
        revenue: dict[int, float] = {}
        for market in markets:
            if market.occupants < 1:
                continue
            revenue[market.id] = allocate_market_profit(market)

        # (5) costs charged, profits booked
        breakdowns: dict[int, ProfitBreakdown] = {}
        for firm in self.firms:
            if not firm.alive:
                continue
            if firm.market is not None:
                tr = revenue[firm.market]
                quantity = markets[firm.market].shares / markets[firm.market].occupants
            else:
                tr = pending_output_revenue.get(firm.id, 0.0)
                quantity = tr  # price fixed at 1
            maintenance = cfg.maintenance_rate * total_asset_value(firm, sfm)
            tc = maintenance + firm.cycle_purchases
            profit = tr - tc
            # Purchases already left the cash account in sfm_buy, so only
            # the flow part moves cash here.
            firm.cash += tr - maintenance
            breakdowns[firm.id] = ProfitBreakdown(tr, tc, profit, quantity)

        # (6) share values and factor prices update
        for market in markets:
            noise = 1.0 + cfg.value_noise * (2.0 * rng.random() - 1.0)
            market.share_value = update_share_value(
                market, cfg.crowding, noise, cfg.value_floor
            )
        if self._demand_units > 0.0:
            eps_p = self._demand_eps_weight / self._demand_units
        else:
            eps_p = 0.0
        price_noise = tuple(1.0 + eps_p * (2.0 * rng.random() - 1.0) for _ in range(3))
        update_sfm_prices(
            sfm,
            (self._demand_red, self._demand_green, self._demand_blue),
            (self._supply_red, self._supply_green, self._supply_blue),
            cfg.price_alpha,
            price_noise,
            cfg.price_floor,
        )

        # (7)-(9) performance update, survival, aging
        for firm in self.firms:
            if not firm.alive:
                continue
            assets = total_asset_value(firm, sfm)
            profit = breakdowns[firm.id].profit
            if assets <= 0.0:
                roa = 0.0
            else:
                roa = profit / assets
            firm.instant_perf = roa
            firm.total_perf += roa
            if not survival_check(firm, assets, cfg.bankruptcy_grace):
                # The market tag stays on the corpse (profiling reads it),
                # but only alive firms count as occupants.
                firm.alive = False
                if firm.market is not None:
                    markets[firm.market].occupants -= 1
            firm.age += 1

        return self._make_report(breakdowns)

    def _make_report(self, breakdowns: dict[int, ProfitBreakdown]) -> CycleReport:
        rows = []
        for firm in self.firms:
            bd = breakdowns.get(firm.id)
            rows.append(
                (
                    self.run_id,
                    self.cycle,
                    firm.id,
                    firm.strategy.value,
                    firm.market,
                    firm.cash,
                    firm.resources.red,
                    firm.resources.green,
                    firm.resources.blue,
                    bd.total_revenue if bd else 0.0,
                    bd.total_cost if bd else 0.0,
                    bd.profit if bd else 0.0,
                    firm.instant_perf if bd else 0.0,
                    firm.total_perf,
                    firm.alive,
                )
            )
        market_states = [(m.id, m.occupants, m.share_value) for m in self.markets]
        return CycleReport(
            cycle=self.cycle,
            firm_rows=rows,
            market_states=market_states,
            sfm_prices=self.sfm.prices,
            sfm_stock=self.sfm.stock.as_tuple(),
        )

    def recount_occupants(self) -> dict[int, int]:
        """Occupant counts recomputed from firm attachments (alive only)."""
        counts = {m.id: 0 for m in self.markets}
        for firm in self.firms:
            if firm.alive and firm.market is not None:
                counts[firm.market] += 1
        return counts


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_trace_header(out: IO[str]) -> None:
    out.write(",".join(TRACE_COLUMNS) + "\n")


def write_trace_rows(out: IO[str], report: CycleReport) -> None:
    """Append one CSV row per firm; floats carry 17 significant digits so a
    replay can be compared byte for byte."""
    for row in report.firm_rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def read_trace(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
