"""Core domain types: firms, markets, resource bundles, the strategic factor
market, and the run configuration.

All mutation of these objects is owned by the engine; everything here is a
plain value type safe to snapshot and compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Strategy(Enum):
    """A firm's strategic orientation, fixed for its whole life."""

    IO = "IO"
    RBV = "RBV"


class ResourceBundle:
    """Quantities of the three colored resource types a firm can hold.

    Components are non-negative reals; every engine operation preserves that.
    """

    __slots__ = ("red", "green", "blue")

    def __init__(self, red: float = 0.0, green: float = 0.0, blue: float = 0.0):
        if red < 0 or green < 0 or blue < 0:
            raise ValueError("resource quantities must be non-negative")
        self.red = red
        self.green = green
        self.blue = blue

    def copy(self) -> "ResourceBundle":
        return ResourceBundle(self.red, self.green, self.blue)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.red, self.green, self.blue)

    def dominates(self, other: "ResourceBundle", tol: float = 1e-9) -> bool:
        """True when every component covers `other` up to a float tolerance."""
        return (
            self.red >= other.red - tol
            and self.green >= other.green - tol
            and self.blue >= other.blue - tol
        )

    def __eq__(self, other):
        if not isinstance(other, ResourceBundle):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __repr__(self):
        return f"ResourceBundle({self.red!r}, {self.green!r}, {self.blue!r})"


class Firm:
    """One firm agent.

    `total_perf` is maintained as the exact running sum of `instant_perf`
    over cycles; the engine never recomputes it from scratch. A dead firm
    (alive=False) is frozen: it takes no actions and its performances stop
    moving.
    """

    __slots__ = (
        "id",
        "strategy",
        "cash",
        "resources",
        "market",
        "instant_perf",
        "total_perf",
        "age",
        "alive",
        "negative_cash_streak",
        "cycle_purchases",
    )

    def __init__(
        self,
        id: int,
        strategy: Strategy,
        cash: float,
        resources: ResourceBundle,
    ):
        self.id = id
        self.strategy = strategy
        self.cash = cash
        self.resources = resources
        self.market: int | None = None
        self.instant_perf = 0.0
        self.total_perf = 0.0
        self.age = 0
        self.alive = True
        # Consecutive cycles spent with cash <= 0; drives the bankruptcy rule.
        self.negative_cash_streak = 0
        # Resource purchase outlay booked so far in the current cycle.
        self.cycle_purchases = 0.0

    def __repr__(self):
        return (
            f"Firm(id={self.id}, {self.strategy.value}, cash={self.cash:.2f}, "
            f"market={self.market}, total_perf={self.total_perf:.4f}, "
            f"alive={self.alive})"
        )


class Market:
    """A goods market with a fixed share count and entry barrier.

    `shares` and `barrier` never change during a run. `occupants` counts the
    alive firms currently attached to this market.
    """

    __slots__ = ("id", "shares", "share_value", "initial_value", "barrier", "occupants")

    def __init__(self, id: int, shares: int, share_value: float, barrier: ResourceBundle):
        if shares < 1:
            raise ValueError("share count must be >= 1")
        if share_value <= 0:
            raise ValueError("share value must be positive")
        self.id = id
        self.shares = shares
        self.share_value = share_value
        self.initial_value = share_value
        self.barrier = barrier
        self.occupants = 0

    def __repr__(self):
        return (
            f"Market(id={self.id}, shares={self.shares}, "
            f"value={self.share_value:.4f}, occupants={self.occupants})"
        )


class SfmState:
    """The strategic factor market: per-type stocks and prices."""

    __slots__ = ("stock", "price_red", "price_green", "price_blue")

    def __init__(
        self,
        stock: ResourceBundle,
        price_red: float = 1.0,
        price_green: float = 1.0,
        price_blue: float = 1.0,
    ):
        if min(price_red, price_green, price_blue) <= 0:
            raise ValueError("resource prices must be positive")
        self.stock = stock
        self.price_red = price_red
        self.price_green = price_green
        self.price_blue = price_blue

    @property
    def prices(self) -> tuple[float, float, float]:
        return (self.price_red, self.price_green, self.price_blue)

    def __repr__(self):
        return f"SfmState(prices={self.prices}, stock={self.stock!r})"


@dataclass
class ProfitBreakdown:
    """One firm's revenue/cost/profit record for a single cycle.

    Goods price is fixed at 1, so total_revenue equals quantity_sold
    numerically.
    """

    total_revenue: float
    total_cost: float
    profit: float
    quantity_sold: float


@dataclass
class SimConfig:
    """All tunables for a single simulation run.

    Defaults follow the reference scenario: 200 firms (half IO, half RBV),
    20 markets of size 10/100/1000, 200 cycles, checkpoints at 20 and 200.
    """

    n_firms: int = 200
    n_markets: int = 20
    n_cycles: int = 200
    market_size_choices: tuple[int, ...] = (10, 100, 1000)
    initial_cash: float = 1000.0
    resource_init_range: tuple[float, float] = (0.0, 100.0)
    barrier_range: tuple[float, float] = (0.0, 100.0)
    # When set, barriers are drawn as a uniform random mix (simplex
    # direction) scaled to a total drawn from this interval, so every
    # market demands a comparable resource budget but a different blend.
    barrier_sum_range: tuple[float, float] | None = (220.0, 350.0)
    # Same scheme for firms' initial bundles: specialists with diverse
    # resource mixes rather than bundles clustered around the cube center.
    resource_sum_range: tuple[float, float] | None = (60.0, 160.0)
    # Dirichlet concentration for the simplex mixes above. Values below 1
    # push draws toward the corners (stronger specialisation), values
    # above 1 pull them toward an even blend.
    barrier_mix_alpha: float = 1.0
    resource_mix_alpha: float = 0.55
    noise_amplitude: float = 0.3
    maintenance_rate: float = 0.001
    rng_seed: int = 0
    checkpoint_cycles: tuple[int, ...] = (20, 200)

    # Market value dynamics
    share_value_range: tuple[float, float] = (0.5, 2.0)
    crowding: float = 0.15
    value_noise: float = 0.2
    value_floor: float = 0.01

    # Strategic factor market
    initial_price: float = 0.01
    initial_stock: float = 1e6
    price_alpha: float = 0.2
    price_floor: float = 0.01

    # RBV action valuation and survival
    output_fraction: float = 0.05
    bankruptcy_grace: int = 10

    # Restores the literal sign pos(r - R) in the entry-distance formula for
    # comparison runs; the default orientation is the shortfall pos(R - r).
    literal_distance_sign: bool = False

    def validate(self) -> None:
        if self.n_firms < 1 or self.n_markets < 1:
            raise ValueError("n_firms and n_markets must be >= 1")
        if self.n_firms % 2 != 0:
            raise ValueError("n_firms must be even (firms split 50/50 IO/RBV)")
        if self.n_cycles < 0:
            raise ValueError("n_cycles must be >= 0")
        if not self.market_size_choices:
            raise ValueError("market_size_choices must be non-empty")
        if any(s < 1 for s in self.market_size_choices):
            raise ValueError("market sizes must be >= 1")
        if not (0.0 <= self.noise_amplitude < 1.0):
            raise ValueError("noise_amplitude must be in [0, 1)")
        if not (0.0 <= self.maintenance_rate < 1.0):
            raise ValueError("maintenance_rate must be in [0, 1)")
        if self.resource_init_range[0] < 0 or self.resource_init_range[1] < self.resource_init_range[0]:
            raise ValueError("resource_init_range must be a non-negative interval")
        if self.barrier_range[0] < 0 or self.barrier_range[1] < self.barrier_range[0]:
            raise ValueError("barrier_range must be a non-negative interval")
        if self.barrier_sum_range is not None and (
            self.barrier_sum_range[0] < 0
            or self.barrier_sum_range[1] < self.barrier_sum_range[0]
        ):
            raise ValueError("barrier_sum_range must be a non-negative interval")
        if self.resource_sum_range is not None and (
            self.resource_sum_range[0] < 0
            or self.resource_sum_range[1] < self.resource_sum_range[0]
        ):
            raise ValueError("resource_sum_range must be a non-negative interval")
        if self.barrier_mix_alpha <= 0 or self.resource_mix_alpha <= 0:
            raise ValueError("mix alphas must be > 0")
        if self.share_value_range[0] <= 0 or self.share_value_range[1] < self.share_value_range[0]:
            raise ValueError("share_value_range must be a positive interval")
        if self.initial_cash < 0:
            raise ValueError("initial_cash must be >= 0")
        if self.bankruptcy_grace < 1:
            raise ValueError("bankruptcy_grace must be >= 1")


def bundle_value(bundle: ResourceBundle, sfm: SfmState) -> float:
    """Monetary value of a bundle at current factor-market prices."""
    return (
        bundle.red * sfm.price_red
        + bundle.green * sfm.price_green
        + bundle.blue * sfm.price_blue
    )


def total_asset_value(firm: Firm, sfm: SfmState) -> float:
    """Cash plus the bundle valued at current factor-market prices.

    This is the denominator of the instant ROA.
    """
    return firm.cash + bundle_value(firm.resources, sfm)
