"""Minute-resolution single-pricing imbalance settlement simulator.

Mechanism: every minute the system imbalance (SI, MW, surplus positive)
net of the battery action activates the price-merged aFRR+mFRR ladder of
the corresponding direction; the minute price is the marginal activated
bid. The quarter-hour price is the arithmetic mean of the 15 minute
prices and applies identically to surplus and shortage positions (single
pricing). At zero net SI the price is the midpoint of the cheapest upward
and the most expensive downward bid.

Sign conventions, used everywhere in this package: SI > 0 means system
surplus; charging the battery subtracts from SI; the battery profit of a
quarter hour is ``price * (discharge - charge) * 0.25h``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .battery import QH_HOURS, Action

PRODUCTS = ("aFRR", "mFRR")
DIRECTIONS = ("up", "down")
MINUTES_PER_QH = 15

AFRR_STEP_MW = 2.0
MFRR_STEP_MW = 100.0


class LadderExhaustedError(Exception):
    """Requested activation beyond the ladder depth."""

    def __init__(self, direction: str, depth_mw: float, max_depth_mw: float,
                 deepest_price: float):
        self.direction = direction
        self.depth_mw = depth_mw
        self.max_depth_mw = max_depth_mw
        self.deepest_price = deepest_price
        super().__init__(
            f"{direction} ladder exhausted: need {depth_mw:.3f} MW of "
            f"{max_depth_mw:.3f} MW available (deepest price "
            f"{deepest_price:.2f} EUR/MWh)"
        )


@dataclass(frozen=True)
class MeritOrder:
    """One discretized bid ladder for a (product, direction) pair."""

    product: str
    direction: str
    prices: np.ndarray
    volumes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "prices", np.asarray(self.prices, dtype=float))
        object.__setattr__(self, "volumes", np.asarray(self.volumes, dtype=float))
        if self.product not in PRODUCTS:
            raise ValueError(f"unknown product {self.product!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if len(self.prices) != len(self.volumes) or len(self.prices) == 0:
            raise ValueError("prices and volumes must be nonempty and aligned")
        if np.any(self.volumes <= 0):
            raise ValueError("bid volumes must be positive")
        d = np.diff(self.prices)
        if self.direction == "up" and np.any(d < 0):
            raise ValueError("up ladder prices must be nondecreasing")
        if self.direction == "down" and np.any(d > 0):
            raise ValueError("down ladder prices must be nonincreasing")

    @cached_property
    def cum_volumes(self) -> np.ndarray:
        return np.cumsum(self.volumes)

    @property
    def depth_mw(self) -> float:
        return float(self.cum_volumes[-1])

    def step_grid_mw(self) -> float:
        return AFRR_STEP_MW if self.product == "aFRR" else MFRR_STEP_MW


@dataclass(frozen=True)
class MinuteTrace:
    """Fifteen minute-resolution SI values of one quarter hour."""

    qh_index: int
    minutes: np.ndarray
    start_utc: str = ""

    def __post_init__(self):
        object.__setattr__(self, "minutes", np.asarray(self.minutes, dtype=float))
        if not 0 <= self.qh_index < 96:
            raise ValueError("qh_index must be in 0..95")
        if len(self.minutes) != MINUTES_PER_QH:
            raise ValueError(f"need exactly {MINUTES_PER_QH} minute values")

    @property
    def mean_si_mw(self) -> float:
        return float(self.minutes.mean())


@dataclass(frozen=True)
class Settlement:
    qh_price: float
    battery_profit_eur: float
    net_si_mean_mw: float


def _merge(ladders: list[MeritOrder], descending: bool) -> tuple[np.ndarray, np.ndarray]:
    prices = np.concatenate([m.prices for m in ladders])
    volumes = np.concatenate([m.volumes for m in ladders])
    order = np.argsort(-prices if descending else prices, kind="stable")
    return np.ascontiguousarray(np.cumsum(volumes[order])), \
        np.ascontiguousarray(prices[order])


@dataclass(frozen=True)
class LadderSet:
    """The four merit orders of one quarter hour plus merged activation ladders."""

    afrr_up: MeritOrder
    afrr_down: MeritOrder
    mfrr_up: MeritOrder
    mfrr_down: MeritOrder
    _merged: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for mo, product, direction in (
            (self.afrr_up, "aFRR", "up"),
            (self.afrr_down, "aFRR", "down"),
            (self.mfrr_up, "mFRR", "up"),
            (self.mfrr_down, "mFRR", "down"),
        ):
            if mo.product != product or mo.direction != direction:
                raise ValueError(f"ladder in {product}/{direction} slot is "
                                 f"{mo.product}/{mo.direction}")
        up_cum, up_price = _merge([self.afrr_up, self.mfrr_up], descending=False)
        dn_cum, dn_price = _merge([self.afrr_down, self.mfrr_down], descending=True)
        self._merged.update(
            up_cum=up_cum, up_price=up_price, dn_cum=dn_cum, dn_price=dn_price,
            mid_price=0.5 * (up_price[0] + dn_price[0]),
        )

    def by_key(self, product: str, direction: str) -> MeritOrder:
        return {
            ("aFRR", "up"): self.afrr_up,
            ("aFRR", "down"): self.afrr_down,
            ("mFRR", "up"): self.mfrr_up,
            ("mFRR", "down"): self.mfrr_down,
        }[(product, direction)]

    @property
    def merged(self) -> dict:
        return self._merged

    def up_depth_mw(self) -> float:
        return float(self._merged["up_cum"][-1])

    def down_depth_mw(self) -> float:
        return float(self._merged["dn_cum"][-1])


def _raise_exhausted(ladders: LadderSet, status: int, net_si):
    m = ladders.merged
    net = np.atleast_1d(np.asarray(net_si, dtype=float))
    if status == 1:
        raise LadderExhaustedError(
            "up", float(-net.min()), ladders.up_depth_mw(), float(m["up_price"][-1])
        )
    raise LadderExhaustedError(
        "down", float(net.max()), ladders.down_depth_mw(), float(m["dn_price"][-1])
    )


def marginal_price(ladders: LadderSet, net_si_mw: float) -> float:
    """Price of the marginal activated bid at one net SI value."""
    m = ladders.merged
    out = np.empty(1)
    status = kernels.marginal_prices(
        np.array([float(net_si_mw)]),
        m["up_cum"], m["up_price"], m["dn_cum"], m["dn_price"], m["mid_price"], out,
    )
    if status != 0:
        _raise_exhausted(ladders, status, net_si_mw)
    return float(out[0])


def marginal_prices(ladders: LadderSet, net_si_mw: np.ndarray) -> np.ndarray:
    m = ladders.merged
    net = np.ascontiguousarray(net_si_mw, dtype=float)
    out = np.empty_like(net)
    status = kernels.marginal_prices(
        net, m["up_cum"], m["up_price"], m["dn_cum"], m["dn_price"],
        m["mid_price"], out,
    )
    if status != 0:
        _raise_exhausted(ladders, status, net)
    return out


def replay_prices(ladders: LadderSet, trace: MinuteTrace,
                  deltas_mw: np.ndarray) -> np.ndarray:
    """Quarter-hour prices after shifting every minute's SI by each delta.

    This is the training-label workhorse; it dispatches to the active
    pricing kernel.
    """
    m = ladders.merged
    deltas = np.ascontiguousarray(deltas_mw, dtype=float)
    out = np.empty_like(deltas)
    status = kernels.qh_prices_for_deltas(
        np.ascontiguousarray(trace.minutes), deltas,
        m["up_cum"], m["up_price"], m["dn_cum"], m["dn_price"], m["mid_price"], out,
    )
    if status != 0:
        _raise_exhausted(ladders, status, trace.minutes + deltas.reshape(-1, 1))
    return out


def replay_with_perturbation(ladders: LadderSet, trace: MinuteTrace,
                             delta_mw: float) -> float:
    """Perturbed quarter-hour price with no battery profit accounting."""
    return float(replay_prices(ladders, trace, np.array([float(delta_mw)]))[0])


def settle_qh(ladders: LadderSet, trace: MinuteTrace, action: Action) -> Settlement:
    """Settle one quarter hour of battery dispatch against realized minutes."""
    delta = action.discharge_mw - action.charge_mw
    price = float(replay_prices(ladders, trace, np.array([delta]))[0])
    return Settlement(
        qh_price=price,
        battery_profit_eur=price * delta * QH_HOURS,
        net_si_mean_mw=trace.mean_si_mw + delta,
    )
