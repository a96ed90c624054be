"""Comparison strategies: CRP, hindsight-best CRP, multiplicative-update (EG),
sampled universal portfolio, and the best single stock.

A constant rebalanced portfolio (CRP) restores the same weight vector every
day, which costs real money under commissions: with a cost model, each day's
drifted allocation is traded back to the target and the netted commission
deducted (see costs.realized_wealth_track).

The universal portfolio is approximated by Monte Carlo: M weight vectors
drawn uniformly from the simplex, each run as its own CRP (paying its own
rebalancing costs when a model is active), with the strategy's wealth the
plain average of the M wealth tracks. Sampling uses a counter-based generator
(Philox) so a (seed, M) pair reproduces bit-identically across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DimensionMismatch,
    PortfolioError,
    PortfolioVector,
    PriceRelativeMatrix,
)
from .costs import CostModel, realized_wealth_track

_BCRP_MAX_ITER = 20_000
_BCRP_TOL = 1e-12  # relative objective improvement per sweep


class NoData(PortfolioError):
    """Operation needs at least one trading day."""


@dataclass(frozen=True)
class UniversalConfig:
    """Monte Carlo settings for the sampled universal portfolio."""

    samples: int
    rng_seed: int = 0
    cost: CostModel | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise PortfolioError(f"need at least one sample, got {self.samples}")


def crp_run(
    w: PortfolioVector,
    X: PriceRelativeMatrix,
    cost: CostModel | None = None,
) -> np.ndarray:
    """Wealth series (length T+1, starts at 1) of a daily-rebalanced portfolio.

    Cost-free, day t multiplies wealth by w . x^t. With a cost model, each
    day's post-return allocation is traded back to w and charged the netted
    commission; a corner portfolio therefore never pays anything.
    """
    weights = w.weights
    if weights.size != X.assets:
        raise DimensionMismatch(f"{weights.size} weights for {X.assets} assets")
    if cost is None:
        wealth = np.ones(X.days + 1)
        wealth[1:] = np.cumprod(X.values @ weights)
        return wealth
    schedule = np.broadcast_to(weights, (X.days, X.assets))
    return realized_wealth_track(schedule, X, cost)


def _project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = 1} (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def _log_wealth(weights: np.ndarray, X: PriceRelativeMatrix) -> float:
    return float(np.log(X.values @ weights).sum())


def bcrp_solve(X: PriceRelativeMatrix) -> tuple[PortfolioVector, float]:
    """Hindsight-optimal constant rebalanced portfolio and its log-wealth (natural log).

    Maximizes the concave objective sum_t log(w . x^t) over the simplex by
    projected gradient ascent with backtracking, restarted from the uniform
    point and up to five corners; the best run wins.
    """
    if X.days < 1:
        raise NoData("best CRP needs at least one trading day")
    n = X.assets
    if n == 1:
        w = np.ones(1)
        return PortfolioVector(w), _log_wealth(w, X)

    starts = [np.full(n, 1.0 / n)]
    for i in range(min(n, 5)):
        corner = np.zeros(n)
        corner[i] = 1.0
        starts.append(corner)

    best_w, best_f = None, -math.inf
    V = X.values
    for w in starts:
        f = _log_wealth(w, X)
        step = 1.0
        stalled = 0
        for _ in range(_BCRP_MAX_ITER):
            grad = (V / (V @ w)[:, None]).sum(axis=0)
            improved = False
            while step > 1e-18:
                cand = _project_to_simplex(w + step * grad / X.days)
                f_cand = _log_wealth(cand, X)
                if f_cand > f:
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
            gain = f_cand - f
            w, f = cand, f_cand
            step *= 2.0
            stalled = stalled + 1 if gain <= _BCRP_TOL * max(1.0, abs(f)) else 0
            if stalled >= 3:
                break
        if f > best_f:
            best_w, best_f = w, f
    return PortfolioVector(best_w), best_f


def eg_step(w: PortfolioVector, x, eta: float) -> PortfolioVector:
    """Multiplicative weight update: w_i <- w_i * exp(eta * x_i / (w . x)), renormalized.

    Scale-free in x; eta = 0 leaves w unchanged.
    """
    if eta < 0:
        raise PortfolioError(f"learning rate must be >= 0, got {eta}")
    row = np.asarray(x, dtype=float)
    weights = w.weights
    if row.shape != weights.shape:
        raise DimensionMismatch(f"weights {weights.shape} vs row {row.shape}")
    boosted = weights * np.exp(eta * row / float(weights @ row))
    return PortfolioVector(boosted / boosted.sum())


def sample_simplex(m: int, n: int, seed: int) -> np.ndarray:
    """m points uniform on the n-simplex via normalized exponential spacings."""
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random((m, n))
    e = -np.log1p(-u)  # exponential(1) from uniform [0,1)
    return e / e.sum(axis=1, keepdims=True)


def universal_tracks(
    X: PriceRelativeMatrix, config: UniversalConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Wealth series and implied weight track of the sampled universal portfolio.

    Initial wealth is split equally across M uniformly sampled CRPs; each runs
    independently (paying its own rebalancing costs when configured). The
    strategy's wealth is the plain average of the M tracks, and its implied
    portfolio going into day t+1 is the wealth-weighted mean of the sampled
    vectors. Returns (wealth of length T+1, weights of shape (T+1, N)).
    """
    W = sample_simplex(config.samples, X.assets, config.rng_seed)
    wealth_per_crp = np.ones(config.samples)
    wealth = np.ones(X.days + 1)
    track = np.empty((X.days + 1, X.assets))
    track[0] = wealth_per_crp @ W / wealth_per_crp.sum()
    c = config.cost
    for t in range(1, X.days + 1):
        x = X.values[t - 1]
        r = W @ x
        wealth_per_crp = wealth_per_crp * r
        if c is not None and t < X.days:
            # Post-return allocation drifts to w*x/r; trading back to w costs
            # rate * |net deltas|, deducted from each CRP's wealth.
            turnover = np.abs(W * (x / r[:, None]) - W).sum(axis=1)
            wealth_per_crp = wealth_per_crp * (1.0 - c.rate * turnover)
        wealth[t] = wealth_per_crp.mean()
        track[t] = wealth_per_crp @ W / wealth_per_crp.sum()
    return wealth, track


def universal_run(X: PriceRelativeMatrix, config: UniversalConfig) -> np.ndarray:
    """Wealth series (length T+1, starts at 1) of the sampled universal portfolio."""
    wealth, _ = universal_tracks(X, config)
    return wealth


def best_stock(X: PriceRelativeMatrix) -> tuple[int, float]:
    """Index and final wealth of the single best asset; ties go to the lowest index."""
    if X.days < 1:
        raise NoData("best stock needs at least one trading day")
    log_wealth = np.log(X.values).sum(axis=0)
    idx = int(np.argmax(log_wealth))
    return idx, float(math.exp(log_wealth[idx]))
