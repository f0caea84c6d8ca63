"""
Netting-set exposure profiles and exposure-at-default measures.

Profiles are built pathwise from simulated short-rate paths; every EAD method
is evaluated per path and then averaged so that capital formulas that are
linear in EAD can be applied to the expectations directly.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config import (
    CEM_ADDONS,
    CEM_NETTING_WEIGHT,
    IMM_ALPHA,
    IMM_HORIZON,
    STANDARDIZED_BETA,
    STANDARDIZED_CCF,
)
from src.constants import EadMethod, Messages, ProfileColumns
from src.curve_model import PathSet
from src.instruments import SwapSpec, fixing_time, leg_risk_positions, value
from src.logger import setup_logger
from src.models import Moments

logger = setup_logger(__name__)

# Hedging set -> credit conversion factor class of the standardized method
HEDGING_SET_CCF_CLASS = {
    "IR<=1y": "other",
    "IR1-5y": "other",
    "IR>5y": "other",
}


def cem_addon(residual_maturity: float) -> float:
    """Add-on factor of the Current Exposure Method for an interest-rate trade."""
    if residual_maturity <= 0.0:
        return 0.0
    for bound in sorted(CEM_ADDONS):
        if residual_maturity <= bound:
            return CEM_ADDONS[bound]
    return CEM_ADDONS[max(CEM_ADDONS)]


def ead_cem(
    values: np.ndarray,
    notionals: Sequence[float],
    residual_maturities: Sequence[float],
    floor: bool = True,
) -> np.ndarray:
    """
    Current Exposure Method EAD of a netting set.

    EAD = max(sum V, 0) + A_gross * (0.4 + 0.6 * NGR) with NGR the ratio of net
    to gross replacement cost. NGR is 1 when the gross replacement cost is zero.

    Args:
        values: Trade values, shape (n_trades,) or (n_trades, n_paths)
        notionals: Trade notionals
        residual_maturities: Remaining life of each trade in years
        floor: Floor the replacement cost at zero (regulatory form)
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] != len(notionals) or len(notionals) != len(residual_maturities):
        raise ValueError("ead_cem needs one value, notional and maturity per trade")
    addons = np.array([n * cem_addon(m) for n, m in zip(notionals, residual_maturities)])
    gross_addon = addons.sum()

    net = values.sum(axis=0)
    gross_rc = np.maximum(values, 0.0).sum(axis=0)
    net_rc = np.maximum(net, 0.0)
    ngr = np.divide(net_rc, gross_rc, out=np.ones_like(net_rc), where=gross_rc > 0.0)
    net_addon = gross_addon * ((1.0 - CEM_NETTING_WEIGHT) + CEM_NETTING_WEIGHT * ngr)

    replacement = net_rc if floor else net
    return replacement + net_addon


def ead_standardized(
    values: np.ndarray,
    risk_positions: Mapping[str, np.ndarray],
    collateral_value: float = 0.0,
    collateral_positions: Optional[Mapping[str, np.ndarray]] = None,
    beta: float = STANDARDIZED_BETA,
) -> np.ndarray:
    """
    Standardized-method EAD: beta * max(CMV - CMC, sum_j |RPT_j - RPC_j| * CCF_j).

    Raises:
        ValueError: if a hedging set has no credit conversion factor
    """
    collateral_positions = collateral_positions or {}
    current = np.asarray(values, dtype=float).sum(axis=0) - collateral_value
    weighted = np.zeros_like(current)
    for hedging_set in set(risk_positions) | set(collateral_positions):
        ccf_class = HEDGING_SET_CCF_CLASS.get(hedging_set)
        if ccf_class is None:
            raise ValueError(f"Unknown hedging set '{hedging_set}'")
        net = np.asarray(risk_positions.get(hedging_set, 0.0)) - np.asarray(
            collateral_positions.get(hedging_set, 0.0)
        )
        weighted = weighted + np.abs(net) * STANDARDIZED_CCF[ccf_class]
    return beta * np.maximum(current, weighted)


def effective_epe(ee: Sequence[float], dt: Sequence[float]) -> float:
    """
    Time-weighted average of the running maximum of EE.

    `ee` and `dt` cover the points t_1..t_k of the window already truncated
    to min(1y, maturity).
    """
    ee = np.asarray(ee, dtype=float)
    dt = np.asarray(dt, dtype=float)
    if ee.size == 0:
        raise ValueError("Effective EPE of an empty profile")
    if ee.shape != dt.shape:
        raise ValueError(f"EE has {ee.size} points but {dt.size} time steps")
    effective_ee = np.maximum.accumulate(ee)
    return float(np.dot(effective_ee, dt) / dt.sum())


def ead_imm(ee: Sequence[float], dt: Sequence[float], alpha: float = IMM_ALPHA) -> float:
    """EAD = alpha * Effective EPE."""
    return alpha * effective_epe(ee, dt)


def effective_epe_on_grid(
    times: Sequence[float],
    ee: Sequence[float],
    maturity: float,
    horizon: float = IMM_HORIZON,
    start: float = 0.0,
) -> float:
    """
    Effective EPE from an EE profile on a grid starting at 0, over the window
    (start, start + min(horizon, maturity - start)].

    Raises:
        ValueError: if the grid stops before the window ends or has no point inside it
    """
    times = np.asarray(times, dtype=float)
    ee = np.asarray(ee, dtype=float)
    window_end = start + min(horizon, maturity - start)
    if times[-1] < window_end - 1e-9:
        raise ValueError(f"EE grid ends at {times[-1]} before the window end {window_end}")
    inside = (times > start + 1e-9) & (times <= window_end + 1e-9)
    dt = np.diff(times, prepend=0.0)
    return effective_epe(ee[inside], dt[inside])


@dataclass(frozen=True, eq=False)
class ExposureProfile:
    """Exposure of one netting set on the simulation grid, in currency units."""
    netting_set: str
    time_grid: np.ndarray
    notional: float
    collateralized: bool
    positive: Moments            # V+
    negative: Moments            # V-
    collateral: Moments          # collateral balance X
    discount: Moments            # constant 1, i.e. E[D] and E[D r]
    ead: Dict[EadMethod, Moments] = field(default_factory=dict)
    trades: Tuple[SwapSpec, ...] = ()

    @property
    def epe(self) -> np.ndarray:
        """E[D(t) V(t)+]."""
        return self.positive.discounted

    @property
    def ene(self) -> np.ndarray:
        """E[D(t) V(t)-], non-positive."""
        return self.negative.discounted

    @property
    def undiscounted_ee(self) -> np.ndarray:
        return self.positive.expected

    @property
    def epe_stderr(self) -> np.ndarray:
        return self.positive.stderr

    @property
    def ene_stderr(self) -> np.ndarray:
        return self.negative.stderr

    @property
    def ead_cem(self) -> np.ndarray:
        return self.ead[EadMethod.CEM].expected

    @property
    def ead_std(self) -> np.ndarray:
        return self.ead[EadMethod.STANDARDIZED].expected

    @property
    def ead_imm(self) -> np.ndarray:
        return self.ead[EadMethod.IMM].expected

    def scaled(self, multiplier: float) -> "ExposureProfile":
        """
        Profile of the same netting set with every notional multiplied by a
        positive factor. Values, exposures and EADs are all linear in notional.
        """
        if multiplier <= 0.0:
            raise ValueError(f"Notional multiplier must be positive, got {multiplier}")
        return replace(
            self,
            notional=self.notional * multiplier,
            positive=self.positive.scaled(multiplier),
            negative=self.negative.scaled(multiplier),
            collateral=self.collateral.scaled(multiplier),
            ead={method: moments.scaled(multiplier) for method, moments in self.ead.items()},
            trades=tuple(
                replace(spec, notional=spec.notional * multiplier) for spec in self.trades
            ),
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            ProfileColumns.TIME: self.time_grid,
            ProfileColumns.EPE: self.epe,
            ProfileColumns.ENE: self.ene,
            ProfileColumns.EAD_CEM: self.ead_cem,
            ProfileColumns.EAD_STD: self.ead_std,
            ProfileColumns.EAD_IMM: self.ead_imm,
            ProfileColumns.EPE_STDERR: self.epe_stderr,
            ProfileColumns.ENE_STDERR: self.ene_stderr,
        }, columns=ProfileColumns.ALL)


def _imm_profile(times: np.ndarray, ee: np.ndarray, maturity: float) -> np.ndarray:
    """Forward-looking IMM EAD at each grid time from the time-zero EE profile."""
    end = min(maturity, times[-1])
    result = np.zeros_like(times)
    for k, t in enumerate(times):
        window_end = t + min(IMM_HORIZON, end - t)
        if np.any((times > t + 1e-9) & (times <= window_end + 1e-9)):
            result[k] = IMM_ALPHA * effective_epe_on_grid(times, ee, end, start=t)
    return result


def netting_set_values(trades: Sequence[SwapSpec], paths: PathSet, indices: np.ndarray) -> np.ndarray:
    """Pathwise trade values, shape (n_trades, n_paths, n_times)."""
    grid = paths.time_grid
    model = paths.model
    out = np.zeros((len(trades), paths.n_paths, indices.size))
    for j, idx in enumerate(indices):
        t = grid[idx]
        x = paths.state[:, idx]
        for i, spec in enumerate(trades):
            fix = fixing_time(spec, t)
            fixing_state = paths.state_at(fix) if fix is not None else None
            out[i, :, j] = value(spec, model, t, x, fixing_state)
    return out


def _grid_indices(paths: PathSet, time_grid: Optional[Sequence[float]]) -> np.ndarray:
    if time_grid is None:
        return np.arange(paths.time_grid.size)
    try:
        return np.array([paths.index_of(t) for t in time_grid], dtype=int)
    except ValueError as e:
        raise ValueError(f"Exposure grid mismatch: {e}") from e


def build_profile(
    trades: Sequence[SwapSpec],
    paths: PathSet,
    time_grid: Optional[Sequence[float]] = None,
    cem_floor: bool = True,
) -> ExposureProfile:
    """
    Exposure profile of a netting set (all trades with one counterparty).

    A netting set whose trades are all collateralized is treated as perfectly
    collateralized: collateral equals the portfolio value and exposures and
    EADs vanish.

    Raises:
        ValueError: empty or mixed-counterparty trade list, or a grid that is
            not a subset of the simulation grid
    """
    if not trades:
        raise ValueError("Cannot build an exposure profile without trades")
    counterparties = {spec.counterparty_id for spec in trades}
    if len(counterparties) != 1:
        raise ValueError(f"Netting set spans several counterparties: {sorted(counterparties)}")
    netting_set = counterparties.pop()

    indices = _grid_indices(paths, time_grid)
    times = paths.time_grid[indices]
    discount = paths.discount[:, indices]
    short_rate = paths.short_rate[:, indices]
    n_times = times.size

    trade_values = netting_set_values(trades, paths, indices)
    total = trade_values.sum(axis=0)
    collateralized = all(spec.collateralized for spec in trades)
    notional = float(sum(spec.notional for spec in trades))
    discount_moments = Moments.from_samples(np.ones_like(total), discount, short_rate)

    if collateralized:
        zeros = Moments.zeros(n_times)
        profile = ExposureProfile(
            netting_set=netting_set,
            time_grid=times,
            notional=notional,
            collateralized=True,
            positive=zeros,
            negative=zeros,
            collateral=Moments.from_samples(total, discount, short_rate),
            discount=discount_moments,
            ead={method: zeros for method in EadMethod},
            trades=tuple(trades),
        )
        logger.info(Messages.PROFILE_BUILT.format(netting_set=netting_set, trades=len(trades)))
        return profile

    positive = Moments.from_samples(np.maximum(total, 0.0), discount, short_rate)
    negative = Moments.from_samples(np.minimum(total, 0.0), discount, short_rate)

    notionals = [spec.notional for spec in trades]
    cem = np.zeros_like(total)
    standardized = np.zeros_like(total)
    model = paths.model
    for j, t in enumerate(times):
        residuals = [spec.residual_maturity(t) for spec in trades]
        cem[:, j] = ead_cem(trade_values[:, :, j], notionals, residuals, floor=cem_floor)

        positions: Dict[str, np.ndarray] = {}
        x = paths.state[:, indices[j]]
        for spec in trades:
            for _, hedging_set, position in leg_risk_positions(spec, model, t, x):
                positions[hedging_set] = positions.get(hedging_set, 0.0) + position
        standardized[:, j] = ead_standardized(trade_values[:, :, j], positions)

    maturity = max(spec.maturity for spec in trades)
    imm = _imm_profile(times, positive.expected, maturity)

    profile = ExposureProfile(
        netting_set=netting_set,
        time_grid=times,
        notional=notional,
        collateralized=False,
        positive=positive,
        negative=negative,
        collateral=Moments.zeros(n_times),
        discount=discount_moments,
        ead={
            EadMethod.CEM: Moments.from_samples(cem, discount, short_rate),
            EadMethod.STANDARDIZED: Moments.from_samples(standardized, discount, short_rate),
            EadMethod.IMM: discount_moments.scaled(imm),
        },
        trades=tuple(trades),
    )
    logger.info(Messages.PROFILE_BUILT.format(netting_set=netting_set, trades=len(trades)))
    return profile
