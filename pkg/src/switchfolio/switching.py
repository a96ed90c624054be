"""The switching-portfolios algorithms as incremental day-by-day state machines.

Both variants maintain, for every asset, the wealth a mixture over all
switching schedules currently assigns to holding that asset. After each
trading day a slice of every asset's wealth is redistributed to the others:

* fixed switching probability gamma: a constant fraction gamma leaves each
  asset and is split evenly over the other N-1 (constant work per asset per
  day);
* adaptive switching probability: wealth is bucketed by (asset, start day);
  a bucket held for dt days keeps fraction (dt + 1/2)/(dt + 1) and leaks
  1/(2(dt + 1)), split evenly over the other assets, so long-held positions
  become progressively stickier (O(t) work on day t).

Transaction costs shrink only the redistributed (switched-in) mass by the
cost model's lump-move factor; the stay term and the initial purchase are
never charged.

States store simplex shares plus a log-wealth accumulator rather than raw
linear wealth: over thousands of days raw products leave double range, while
shares stay O(1) and the log tracks total growth exactly. ``asset_wealth``
and bucket views reconstruct linear values on demand. States are mutable,
single-writer: one step call at a time per state.
"""

from __future__ import annotations

import math

import numpy as np

from .core import DimensionMismatch, PortfolioError, PortfolioVector
from .costs import CostModel, switch_factor


class GammaOutOfRange(PortfolioError):
    """gamma must lie in (0, (N-1)/N] for the weight update to stay on the simplex."""


class TooFewAssets(PortfolioError):
    """Switching needs at least two assets: redistribution must have a target."""


def gamma_hat(dt: int | float) -> float:
    """Switching probability after holding the same asset for dt full days.

    Defined as (1/2)/(dt + 1): one half at dt=0, decaying so that positions
    become stickier the longer they are held.
    """
    if dt < 0:
        raise PortfolioError(f"holding duration must be nonnegative, got {dt}")
    return 0.5 / (dt + 1.0)


class FixedGammaState:
    """Per-asset wealth evolved with a constant switching probability."""

    __slots__ = ("gamma", "day", "shares", "log_wealth")

    def __init__(self, gamma: float, shares: np.ndarray, day: int = 0, log_wealth: float = 0.0):
        self.gamma = float(gamma)
        self.shares = np.asarray(shares, dtype=float)
        self.day = int(day)
        self.log_wealth = float(log_wealth)

    @property
    def assets(self) -> int:
        return self.shares.size

    @property
    def asset_wealth(self) -> np.ndarray:
        """Linear per-asset wealth S_t^i (unit initial investment)."""
        return self.shares * math.exp(self.log_wealth)


class AdaptiveState:
    """Wealth bucketed by (asset, start day) under the adaptive switching rule.

    ``buckets[i, k]`` holds the share of total wealth sitting in asset i since
    trading day k+1; after day t exactly N*t buckets exist.
    """

    __slots__ = ("day", "buckets", "log_wealth", "prune_threshold", "_capacity")

    def __init__(self, n: int, prune_threshold: float | None = None):
        self.day = 0
        self._capacity = 16
        self.buckets = np.zeros((n, self._capacity))
        self.log_wealth = 0.0
        # Buckets below prune_threshold (as a fraction of total) are zeroed to
        # save work; off by default because equivalence checks need exactness.
        self.prune_threshold = prune_threshold

    @property
    def assets(self) -> int:
        return self.buckets.shape[0]

    def _grow(self, needed: int):
        if needed > self._capacity:
            new_cap = max(needed, 2 * self._capacity)
            grown = np.zeros((self.assets, new_cap))
            grown[:, : self._capacity] = self.buckets
            self.buckets = grown
            self._capacity = new_cap

    def bucket_view(self) -> np.ndarray:
        """Shares by (asset, start day): shape (N, day), fractions of total (read-only)."""
        view = self.buckets[:, : self.day]
        view.setflags(write=False)
        return view

    def bucket_wealth(self) -> np.ndarray:
        """Linear bucket wealth S_{t,t0}^i, shape (N, day)."""
        return self.bucket_view() * math.exp(self.log_wealth)


def fixed_init(n: int, gamma: float) -> FixedGammaState:
    """Uniform unit wealth over n assets, before any trading day."""
    if n < 2:
        raise TooFewAssets(f"need at least 2 assets to switch between, got {n}")
    if not 0.0 < gamma <= (n - 1) / n:
        raise GammaOutOfRange(f"gamma must be in (0, {(n - 1) / n!r}] for N={n}, got {gamma!r}")
    return FixedGammaState(gamma, np.full(n, 1.0 / n))


def adaptive_init(n: int, prune_threshold: float | None = None) -> AdaptiveState:
    """Empty adaptive state; the first step seeds one bucket per asset at 1/n."""
    if n < 2:
        raise TooFewAssets(f"need at least 2 assets to switch between, got {n}")
    return AdaptiveState(n, prune_threshold)


def _check_row(n: int, x) -> np.ndarray:
    row = np.asarray(x, dtype=float)
    if row.shape != (n,):
        raise DimensionMismatch(f"day row has shape {row.shape}, state has {n} assets")
    return row


def _fixed_pre_return_mass(state: FixedGammaState, cost: CostModel | None) -> np.ndarray:
    """Post-trade mass per asset before the next day's returns, as shares of wealth."""
    g, n = state.gamma, state.assets
    if state.day == 0:
        return state.shares.copy()  # initial purchase: nothing to trade yet
    stay = (1.0 - g) * state.shares
    switched_in = (g / (n - 1)) * (1.0 - state.shares)
    return stay + switch_factor(cost) * switched_in


def fixed_step(state: FixedGammaState, x, cost: CostModel | None = None) -> FixedGammaState:
    """Advance one trading day in place: redistribute, charge cost, apply returns."""
    row = _check_row(state.assets, x)
    mass = _fixed_pre_return_mass(state, cost) * row
    total = float(mass.sum())
    state.shares = mass / total
    state.log_wealth += math.log(total)
    state.day += 1
    return state


def fixed_weights(state: FixedGammaState, cost: CostModel | None = None) -> PortfolioVector:
    """Portfolio held on the next trading day.

    With no cost model this is the affine share update
    w_i -> (1 - gamma*N/(N-1)) * w_i + gamma/(N-1), applied to the current
    post-return shares. With costs, the switched-in term is shrunk by the
    lump-move factor and the result renormalized.
    """
    mass = _fixed_pre_return_mass(state, cost)
    return PortfolioVector(mass / mass.sum())


def _adaptive_pre_return_mass(state: AdaptiveState, cost: CostModel | None):
    """(stay buckets, new bucket per asset) as shares of wealth, before returns."""
    t, n = state.day, state.assets
    active = state.buckets[:, :t]
    leak_per_bucket = 0.5 / np.arange(t, 0, -1, dtype=float)  # gamma_hat(t - t0)
    stay = active * (1.0 - leak_per_bucket)
    leaked = active @ leak_per_bucket  # per source asset
    # Leaked mass is split evenly over the other N-1 assets.
    new_bucket = switch_factor(cost) * (leaked.sum() - leaked) / (n - 1)
    return stay, new_bucket


def adaptive_step(state: AdaptiveState, x, cost: CostModel | None = None) -> AdaptiveState:
    """Advance one trading day in place; bucket count grows by one per asset."""
    row = _check_row(state.assets, x)
    t = state.day
    state._grow(t + 1)
    if t == 0:
        mass = np.full(state.assets, 1.0 / state.assets) * row
        state.buckets[:, 0] = mass
    else:
        stay, new_bucket = _adaptive_pre_return_mass(state, cost)
        state.buckets[:, :t] = stay * row[:, None]
        state.buckets[:, t] = new_bucket * row
    active = state.buckets[:, : t + 1]
    total = float(active.sum())
    active /= total
    if state.prune_threshold is not None:
        active[active < state.prune_threshold] = 0.0
    state.log_wealth += math.log(total)
    state.day = t + 1
    return state


def adaptive_weights(state: AdaptiveState, cost: CostModel | None = None) -> PortfolioVector:
    """Portfolio held on the next trading day: stay mass plus switched-in mass per asset."""
    if state.day < 1:
        raise PortfolioError("adaptive weights are defined only after the first trading day")
    stay, new_bucket = _adaptive_pre_return_mass(state, cost)
    mass = stay.sum(axis=1) + new_bucket
    return PortfolioVector(mass / mass.sum())


def log_total_wealth(state: FixedGammaState | AdaptiveState) -> float:
    """Natural log of total wealth (unit initial investment)."""
    return state.log_wealth


def total_wealth(state: FixedGammaState | AdaptiveState) -> float:
    """Total wealth: the prior-weighted mixture over all switching schedules."""
    return math.exp(state.log_wealth)
