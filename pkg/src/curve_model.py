"""
Discount curve and Hull-White one-factor short-rate model.

The short rate is written as r(t) = x(t) + alpha(t) where x is a zero-mean
Ornstein-Uhlenbeck process and alpha(t) fits today's discount curve exactly.
Paths are simulated with the exact joint Gaussian transition of
(x, integral of x), so the discounted bond price is a martingale on any grid.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.config import PATH_BLOCK_SIZE, XVA_THREADS
from src.constants import Messages
from src.logger import setup_logger

logger = setup_logger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class DiscountCurve:
    """
    Zero curve with log-linear discount factor interpolation.

    Zero-rate times time is interpolated linearly between pillars and from the
    origin to the first pillar; beyond the last pillar the zero rate is flat.
    """
    times: Tuple[float, ...]
    zero_rates: Tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        rates = tuple(float(r) for r in self.zero_rates)
        if not times:
            raise ValueError("Discount curve needs at least one pillar")
        if len(times) != len(rates):
            raise ValueError(
                f"Curve has {len(times)} pillar times but {len(rates)} zero rates"
            )
        if times[0] < 0.0 or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"Pillar times must be non-negative and strictly increasing: {times}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "zero_rates", rates)

    @classmethod
    def flat(cls, rate: float) -> "DiscountCurve":
        """Curve with the same continuously compounded zero rate at every maturity."""
        return cls(times=(1.0,), zero_rates=(rate,))

    @property
    def _knots(self) -> Tuple[np.ndarray, np.ndarray]:
        # a pillar at t=0 is already the origin knot, with D(0) = 1
        rt = np.multiply(self.times, self.zero_rates)
        if self.times[0] == 0.0:
            return np.asarray(self.times), rt
        return np.concatenate(([0.0], self.times)), np.concatenate(([0.0], rt))

    def _rate_times_time(self, t: np.ndarray) -> np.ndarray:
        knots_t, knots_rt = self._knots
        inside = np.interp(t, knots_t, knots_rt)
        beyond = self.zero_rates[-1] * t
        return np.where(t > self.times[-1], beyond, inside)

    def discount_factor(self, t: ArrayLike) -> Union[float, np.ndarray]:
        """P(0, t). Raises ValueError for negative times."""
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0.0):
            raise ValueError(f"Discount factor requested for negative time {t}")
        result = np.exp(-self._rate_times_time(arr))
        return float(result) if result.ndim == 0 else result

    def zero_rate(self, t: ArrayLike) -> Union[float, np.ndarray]:
        arr = np.asarray(t, dtype=float)
        safe = np.where(arr > 0.0, arr, 1.0)
        rates = np.where(arr > 0.0, self._rate_times_time(safe) / safe, self.zero_rates[0])
        return float(rates) if rates.ndim == 0 else rates

    def instantaneous_forward(self, t: ArrayLike) -> Union[float, np.ndarray]:
        """f(0, t): slope of zero-rate times time, right-continuous at pillars."""
        arr = np.asarray(t, dtype=float)
        knots_t, knots_rt = self._knots
        if knots_t.size < 2:
            forward = np.full(arr.shape, self.zero_rates[-1])
            return float(forward) if forward.ndim == 0 else forward
        slopes = np.diff(knots_rt) / np.diff(knots_t)
        idx = np.searchsorted(knots_t, arr, side="right") - 1
        inside = slopes[np.clip(idx, 0, len(slopes) - 1)]
        forward = np.where(arr >= self.times[-1], self.zero_rates[-1], inside)
        return float(forward) if forward.ndim == 0 else forward

    def shifted(self, bp: float) -> "DiscountCurve":
        """Parallel shift of all zero rates by `bp` basis points."""
        return DiscountCurve(
            times=self.times,
            zero_rates=tuple(r + bp * 1e-4 for r in self.zero_rates),
        )


@dataclass(frozen=True)
class HullWhiteModel:
    """Hull-White one-factor model fitted to a discount curve."""
    mean_reversion: float
    volatility: float
    curve: DiscountCurve

    def __post_init__(self):
        if self.mean_reversion <= 0.0:
            raise ValueError(f"Mean reversion must be positive, got {self.mean_reversion}")
        if self.volatility < 0.0:
            raise ValueError(f"Volatility must be non-negative, got {self.volatility}")

    def with_curve(self, curve: DiscountCurve) -> "HullWhiteModel":
        return replace(self, curve=curve)

    def bond_factor(self, tau: ArrayLike) -> np.ndarray:
        """B(tau) = (1 - exp(-a tau)) / a."""
        a = self.mean_reversion
        return -np.expm1(-a * np.asarray(tau, dtype=float)) / a

    def integrated_variance(self, tau: ArrayLike) -> np.ndarray:
        """Variance of the integral of x over an interval of length tau, starting from a known x."""
        a, sigma = self.mean_reversion, self.volatility
        tau = np.asarray(tau, dtype=float)
        e1 = np.exp(-a * tau)
        value = (sigma / a) ** 2 * (tau - 2.0 * (1.0 - e1) / a + (1.0 - e1 * e1) / (2.0 * a))
        return np.maximum(value, 0.0)

    def drift_shift(self, t: ArrayLike) -> np.ndarray:
        """alpha(t) - f(0, t) = sigma^2 / (2 a^2) (1 - exp(-a t))^2."""
        a, sigma = self.mean_reversion, self.volatility
        return sigma ** 2 / (2.0 * a ** 2) * np.expm1(-a * np.asarray(t, dtype=float)) ** 2

    def short_rate(self, x: ArrayLike, t: float) -> np.ndarray:
        return np.asarray(x, dtype=float) + self.curve.instantaneous_forward(t) + self.drift_shift(t)


def zero_coupon_bond(
    model: HullWhiteModel,
    state: ArrayLike,
    t: float,
    maturity: ArrayLike,
) -> np.ndarray:
    """
    Affine bond price P(t, T) given the factor state x(t).

    Broadcasts over the state (paths) and over maturities: a state of shape
    (n,) and maturities of shape (m,) give an (n, m) array.

    Raises:
        ValueError: if any maturity lies before t
    """
    if t < 0.0:
        raise ValueError(f"Bond valuation time must be non-negative, got {t}")
    maturities = np.asarray(maturity, dtype=float)
    if np.any(maturities < t - 1e-12):
        raise ValueError(f"Bond maturity {maturity} lies before valuation time {t}")
    maturities = np.maximum(maturities, t)
    x = np.asarray(state, dtype=float)

    curve = model.curve
    ratio = curve.discount_factor(maturities) / curve.discount_factor(t)
    tau = maturities - t
    convexity = 0.5 * (
        model.integrated_variance(tau)
        - model.integrated_variance(maturities)
        + model.integrated_variance(t)
    )
    b = model.bond_factor(tau)
    if x.ndim and maturities.ndim:
        return ratio * np.exp(convexity - np.multiply.outer(x, b))
    return ratio * np.exp(convexity - x * b)


@dataclass(frozen=True, eq=False)
class PathSet:
    """Simulated factor paths with the bank-account discount D(t) = exp(-int r)."""
    time_grid: np.ndarray
    state: np.ndarray          # x(t), shape (n_paths, n_times)
    short_rate: np.ndarray     # r(t), shape (n_paths, n_times)
    discount: np.ndarray       # D(t), shape (n_paths, n_times)
    seed: int
    model: HullWhiteModel = field(repr=False)

    @property
    def n_paths(self) -> int:
        return self.state.shape[0]

    def index_of(self, t: float) -> int:
        """Grid index of time t; raises ValueError when t is not a grid point."""
        idx = int(np.argmin(np.abs(self.time_grid - t)))
        if abs(self.time_grid[idx] - t) > 1e-9:
            raise ValueError(f"Time {t} is not on the simulation grid")
        return idx

    def state_at(self, t: float) -> np.ndarray:
        """x(t) on every path, linearly interpolated between grid points."""
        grid = self.time_grid
        if t <= grid[0]:
            return self.state[:, 0]
        if t >= grid[-1]:
            return self.state[:, -1]
        hi = int(np.searchsorted(grid, t, side="left"))
        if abs(grid[hi] - t) <= 1e-9:
            return self.state[:, hi]
        lo = hi - 1
        w = (t - grid[lo]) / (grid[hi] - grid[lo])
        return (1.0 - w) * self.state[:, lo] + w * self.state[:, hi]


def monthly_grid(maturity: float, step_months: int = 1) -> np.ndarray:
    """Uniform grid from 0 to `maturity` with steps of `step_months` months."""
    if maturity <= 0.0:
        raise ValueError(Messages.POSITIVE.format(name="maturity", value=maturity))
    if step_months < 1:
        raise ValueError(Messages.POSITIVE.format(name="step_months", value=step_months))
    n_steps = max(1, int(round(maturity * 12.0 / step_months)))
    return np.linspace(0.0, maturity, n_steps + 1)


def _validate_grid(time_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(time_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("Simulation grid is empty")
    if abs(grid[0]) > 1e-12:
        raise ValueError(f"Simulation grid must start at 0, starts at {grid[0]}")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("Simulation grid must be strictly increasing")
    return grid


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate_block(
    model: HullWhiteModel,
    steps: np.ndarray,
    seed: int,
    block: int,
    size: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """x and cumulative integral of x for one block of paths."""
    a, sigma = model.mean_reversion, model.volatility
    # full block is always drawn so that path i never depends on the total count
    normals = _block_generator(seed, block).standard_normal((PATH_BLOCK_SIZE, steps.size, 2))[:size]

    n_times = steps.size + 1
    x = np.zeros((size, n_times))
    integral = np.zeros((size, n_times))
    for k, dt in enumerate(steps):
        decay = np.exp(-a * dt)
        var_x = sigma ** 2 * -np.expm1(-2.0 * a * dt) / (2.0 * a)
        var_i = float(model.integrated_variance(dt))
        cov = sigma ** 2 / (2.0 * a ** 2) * (1.0 - decay) ** 2
        if var_x > 0.0:
            l11 = np.sqrt(var_x)
            l21 = cov / l11
            l22 = np.sqrt(max(var_i - l21 ** 2, 0.0))
        else:
            l11 = l21 = l22 = 0.0
        z1, z2 = normals[:, k, 0], normals[:, k, 1]
        x_prev = x[:, k]
        x[:, k + 1] = x_prev * decay + l11 * z1
        integral[:, k + 1] = integral[:, k] + x_prev * (1.0 - decay) / a + l21 * z1 + l22 * z2
    return x, integral


def simulate_paths(
    model: HullWhiteModel,
    time_grid: Sequence[float],
    n_paths: int,
    seed: int,
    max_workers: int = XVA_THREADS,
) -> PathSet:
    """
    Simulate short-rate paths on `time_grid`.

    Paths are generated in fixed-size blocks, each from its own counter-based
    substream keyed by (seed, block), so path i is identical for any total
    path count and any number of workers.

    Raises:
        ValueError: empty or malformed grid, or fewer than one path
    """
    grid = _validate_grid(time_grid)
    if n_paths < 1:
        raise ValueError(Messages.POSITIVE.format(name="n_paths", value=n_paths))

    steps = np.diff(grid)
    n_blocks = -(-n_paths // PATH_BLOCK_SIZE)
    sizes = [min(PATH_BLOCK_SIZE, n_paths - b * PATH_BLOCK_SIZE) for b in range(n_blocks)]
    workers = max(1, min(max_workers, n_blocks))
    logger.info(Messages.SIMULATING.format(
        paths=n_paths, steps=steps.size, seed=seed, workers=workers
    ))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks: List[Tuple[np.ndarray, np.ndarray]] = list(pool.map(
            lambda b: _simulate_block(model, steps, seed, b, sizes[b]), range(n_blocks)
        ))

    x = np.concatenate([blk[0] for blk in blocks], axis=0)
    integral = np.concatenate([blk[1] for blk in blocks], axis=0)

    curve_discount = model.curve.discount_factor(grid)
    discount = curve_discount * np.exp(-0.5 * model.integrated_variance(grid) - integral)
    forward = model.curve.instantaneous_forward(grid) + model.drift_shift(grid)
    short_rate = x + forward

    return PathSet(
        time_grid=grid,
        state=x,
        short_rate=short_rate,
        discount=discount,
        seed=seed,
        model=model,
    )
