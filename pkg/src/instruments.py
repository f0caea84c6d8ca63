"""
Vanilla fixed-float interest rate swaps.

Schedules are generated backward from maturity with ACT/365F year fractions
measured directly in years from the valuation date. The floating leg fixes at
the start of each accrual period on the same curve it is discounted with.
"""

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import IR01_BUMP_BP
from src.constants import Ir01Convention, LegKind, SwapDirection
from src.curve_model import ArrayLike, DiscountCurve, HullWhiteModel, zero_coupon_bond
from src.logger import setup_logger
from src.models import MarketEnvironment

logger = setup_logger(__name__)

SUPPORTED_FREQUENCIES = (1, 2, 4, 12)
_EPS = 1e-9


@dataclass(frozen=True)
class Schedule:
    """Accrual periods shared by the fixed and floating legs."""
    starts: Tuple[float, ...]
    ends: Tuple[float, ...]

    @property
    def accruals(self) -> np.ndarray:
        return np.subtract(self.ends, self.starts)

    def __len__(self) -> int:
        return len(self.ends)


def build_schedule(maturity: float, frequency: int) -> Schedule:
    """Backward schedule from `maturity` to 0; a short stub, if any, comes first."""
    if maturity <= 0.0:
        raise ValueError(f"Swap maturity must be positive, got {maturity}")
    if frequency not in SUPPORTED_FREQUENCIES:
        raise ValueError(f"Unsupported payment frequency {frequency}; use one of {SUPPORTED_FREQUENCIES}")
    ends: List[float] = []
    k = 0
    while True:
        end = maturity - k / frequency
        if end <= _EPS:
            break
        ends.append(end)
        k += 1
    ends.reverse()
    starts = [0.0] + ends[:-1]
    return Schedule(starts=tuple(starts), ends=tuple(ends))


@dataclass(frozen=True)
class SwapSpec:
    """A single swap trade; `direction` refers to the fixed leg."""
    trade_id: str
    counterparty_id: str
    notional: float
    fixed_rate: float
    maturity: float
    pay_frequency: int = 2
    direction: SwapDirection = SwapDirection.PAYER
    collateralized: bool = False

    def __post_init__(self):
        if self.notional <= 0.0:
            raise ValueError(f"Trade {self.trade_id}: notional must be positive, got {self.notional}")
        if self.maturity <= 0.0:
            raise ValueError(f"Trade {self.trade_id}: maturity must be positive, got {self.maturity}")
        if self.pay_frequency not in SUPPORTED_FREQUENCIES:
            raise ValueError(
                f"Trade {self.trade_id}: unsupported payment frequency {self.pay_frequency}"
            )
        object.__setattr__(self, "direction", SwapDirection(self.direction))

    @cached_property
    def schedule(self) -> Schedule:
        return build_schedule(self.maturity, self.pay_frequency)

    def residual_maturity(self, t: float) -> float:
        return max(self.maturity - t, 0.0)

    def with_rate(self, fixed_rate: float) -> "SwapSpec":
        return replace(self, fixed_rate=fixed_rate)

    def mirrored(
        self,
        trade_id: str,
        counterparty_id: str,
        notional_multiplier: float = 1.0,
        collateralized: bool = True,
    ) -> "SwapSpec":
        """Opposite-direction copy, e.g. the hedge of a client trade."""
        return replace(
            self,
            trade_id=trade_id,
            counterparty_id=counterparty_id,
            notional=self.notional * notional_multiplier,
            direction=self.direction.opposite(),
            collateralized=collateralized,
        )


def fixing_time(spec: SwapSpec, t: float) -> Optional[float]:
    """Fixing time of the floating period running over t, or None if t is on a period start."""
    for start, end in zip(spec.schedule.starts, spec.schedule.ends):
        if start + _EPS < t < end - _EPS:
            return start
    return None


def value(
    spec: SwapSpec,
    model: HullWhiteModel,
    t: float,
    state: ArrayLike,
    fixing_state: Optional[ArrayLike] = None,
) -> Union[float, np.ndarray]:
    """
    Value of the swap at time t to the bank, per path state x(t).

    Args:
        spec: Trade
        model: Short-rate model
        t: Valuation time
        state: x(t), scalar or one entry per path
        fixing_state: x at the fixing time of the period in progress; required
            when t falls strictly inside an accrual period

    Returns:
        Value in currency units with the shape of `state`; zero at or after maturity
    """
    x = np.asarray(state, dtype=float)
    if t >= spec.maturity - _EPS:
        return np.zeros_like(x) if x.ndim else 0.0

    sched = spec.schedule
    ends = np.asarray(sched.ends)
    starts = np.asarray(sched.starts)
    live = ends > t + _EPS
    live_ends = ends[live]
    live_starts = starts[live]
    accruals = live_ends - live_starts

    bonds_end = np.atleast_2d(zero_coupon_bond(model, np.atleast_1d(x), t, live_ends))
    fixed_leg = spec.fixed_rate * bonds_end @ accruals

    forward_starts = live_starts >= t - _EPS
    floating_leg = np.zeros(bonds_end.shape[0])
    if np.any(forward_starts):
        bonds_start = np.atleast_2d(
            zero_coupon_bond(model, np.atleast_1d(x), t, np.maximum(live_starts[forward_starts], t))
        )
        floating_leg += (bonds_start - bonds_end[:, forward_starts]).sum(axis=1)
    if not forward_starts[0]:
        if fixing_state is None:
            raise ValueError(
                f"Trade {spec.trade_id}: valuation at t={t} needs the state at fixing time {live_starts[0]}"
            )
        fixed_bond = zero_coupon_bond(
            model, np.atleast_1d(np.asarray(fixing_state, dtype=float)), live_starts[0], live_ends[:1]
        )
        floating_leg += (1.0 / fixed_bond[:, 0] - 1.0) * bonds_end[:, 0]

    result = spec.direction.sign * spec.notional * (floating_leg - fixed_leg)
    return result if x.ndim else float(result[0])


def par_rate(curve: DiscountCurve, maturity: float, pay_frequency: int = 2) -> float:
    """Spot-starting fixed rate that gives the swap zero value today."""
    sched = build_schedule(maturity, pay_frequency)
    annuity = float(np.dot(sched.accruals, curve.discount_factor(np.asarray(sched.ends))))
    return (curve.discount_factor(sched.starts[0]) - curve.discount_factor(maturity)) / annuity


def portfolio_value(trades: Sequence[SwapSpec], environment: MarketEnvironment) -> float:
    """Risk-free value today of all trades."""
    model = environment.model
    return float(sum(value(spec, model, 0.0, 0.0) for spec in trades))


def ir01(
    trades: Sequence[SwapSpec],
    environment: MarketEnvironment,
    adjustments: Optional[Callable[[MarketEnvironment], float]] = None,
    convention: Ir01Convention = Ir01Convention.COST,
    bump_bp: float = IR01_BUMP_BP,
) -> float:
    """
    Central-difference sensitivity to a parallel zero-curve shift, per bp.

    `adjustments` returns the total valuation adjustment U in currency for a
    bumped environment; it must reuse the environment seed so that both bumps
    see the same random numbers.
    """
    sign = 1.0 if Ir01Convention(convention) is Ir01Convention.ECONOMIC else -1.0

    def total(env: MarketEnvironment) -> float:
        base = portfolio_value(trades, env)
        if adjustments is None:
            return base
        return base + sign * adjustments(env)

    up = total(environment.shifted(bump_bp))
    down = total(environment.shifted(-bump_bp))
    return (up - down) / (2.0 * bump_bp)


def hedging_set_for(residual: float) -> str:
    """Standardized-method hedging set of an interest-rate position by residual maturity."""
    if residual <= 1.0:
        return "IR<=1y"
    if residual <= 5.0:
        return "IR1-5y"
    return "IR>5y"


def leg_risk_positions(
    spec: SwapSpec,
    model: HullWhiteModel,
    t: float,
    state: ArrayLike,
) -> List[Tuple[LegKind, str, np.ndarray]]:
    """
    Duration-weighted risk positions of both legs, per path.

    The fixed leg is a fixed-rate bond (short for a payer), the floating leg a
    note that reprices at the next period end (long for a payer). Each position
    is notional times the modified duration of the leg's remaining cash flows.
    """
    x = np.atleast_1d(np.asarray(state, dtype=float))
    if t >= spec.maturity - _EPS:
        return []

    sched = spec.schedule
    ends = np.asarray(sched.ends)
    starts = np.asarray(sched.starts)
    live = ends > t + _EPS
    live_ends = ends[live]
    accruals = live_ends - starts[live]

    cashflows = spec.fixed_rate * accruals
    cashflows[-1] += 1.0
    pv = np.atleast_2d(zero_coupon_bond(model, x, t, live_ends)) * cashflows
    fixed_duration = pv @ (live_ends - t) / pv.sum(axis=1)
    float_duration = np.full(x.shape, live_ends[0] - t)

    sign = spec.direction.sign
    return [
        (LegKind.FIXED, hedging_set_for(spec.maturity - t), -sign * spec.notional * fixed_duration),
        (LegKind.FLOATING, hedging_set_for(live_ends[0] - t), sign * spec.notional * float_duration),
    ]
