"""Transaction cost models and realized (netted-trade) wealth accounting.

Two commission models are supported, plus cost-free operation signalled by
passing ``None`` wherever a cost model is accepted:

* ``per-trade``: a fixed fraction c of every amount traded, charged on sells
  and again on buys. Moving a lump of wealth between two assets retains
  (1-c)^2 of it.
* ``parallel``: the whole allocation is reshaped at once and the commission
  c * sum_i |S_i - S'_i| is then deducted proportionally so the target
  proportions are preserved. A full switch retains 1 - 2c.

``switch_factor`` gives the lump-move retention used inside the algorithms'
wealth bookkeeping. ``rebalance_cost``/``realized_wealth_track`` implement the
netted accounting used for realized-wealth reporting: each asset trades only
its net delta, which is the cheapest execution under proportional
commissions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionMismatch, PortfolioError, PortfolioVector

PER_TRADE = "per-trade"
PARALLEL = "parallel"


class NegativeAllocation(PortfolioError):
    """Wealth allocations handed to cost accounting must be nonnegative."""


@dataclass(frozen=True)
class CostModel:
    """A commission scheme with rate c in [0, 0.5).

    The upper bound keeps the parallel model's full-switch factor 1 - 2c
    positive.
    """

    kind: str
    rate: float

    def __post_init__(self):
        if self.kind not in (PER_TRADE, PARALLEL):
            raise PortfolioError(f"unknown cost model kind {self.kind!r}")
        if not 0.0 <= self.rate < 0.5:
            raise PortfolioError(f"commission rate must be in [0, 0.5), got {self.rate!r}")

    @classmethod
    def per_trade(cls, c: float) -> "CostModel":
        return cls(PER_TRADE, c)

    @classmethod
    def parallel(cls, c: float) -> "CostModel":
        return cls(PARALLEL, c)


def switch_factor(model: CostModel | None) -> float:
    """Fraction of a lump of wealth that survives a full move between assets."""
    if model is None:
        return 1.0
    if model.kind == PER_TRADE:
        return (1.0 - model.rate) ** 2
    return 1.0 - 2.0 * model.rate


def rebalance_cost(
    model: CostModel | None,
    current: np.ndarray,
    target: np.ndarray,
) -> float:
    """Commission for reshaping per-asset wealth ``current`` into ``target``.

    Both models charge c * sum_i |net delta_i|: netting means an asset that
    the bucket-level bookkeeping would both sell from and buy into trades only
    its net amount. The models differ in the lump-move factors applied inside
    algorithm state (see :func:`switch_factor`), not here.
    """
    cur = np.asarray(current, dtype=float)
    tgt = np.asarray(target, dtype=float)
    if cur.shape != tgt.shape:
        raise DimensionMismatch(f"allocations differ in shape: {cur.shape} vs {tgt.shape}")
    if np.any(cur < 0) or np.any(tgt < 0):
        raise NegativeAllocation("wealth allocations must be nonnegative")
    if model is None:
        return 0.0
    return model.rate * float(np.abs(cur - tgt).sum())


def realized_wealth_track(
    weights: np.ndarray,
    X,
    model: CostModel | None,
) -> np.ndarray:
    """Wealth series from literally holding a day-by-day weight schedule.

    ``weights`` is a T x N array (or sequence of PortfolioVector) whose row t
    is the allocation held during trading day t+1; X supplies the relatives.
    Day t's returns are applied, then the holdings are reshaped to the next
    day's target and the netted commission deducted. The deduction keeps the
    target proportions: the post-cost total is (old total - c * sum |delta|),
    with deltas measured against the target at the pre-cost total (closed
    form of the parallel model's proportional shrink). The initial purchase
    and the final day are not charged, matching algorithm-state bookkeeping
    that prices switches only.

    Returns T+1 wealth values starting at 1.
    """
    rows = [w.weights if isinstance(w, PortfolioVector) else np.asarray(w, float) for w in weights]
    W = np.array(rows, dtype=float) if rows else np.zeros((0, X.assets))
    if W.shape[0] != X.days or (X.days and W.shape[1] != X.assets):
        raise DimensionMismatch(
            f"weight schedule {W.shape} does not match {X.days} days x {X.assets} assets"
        )
    wealth = np.ones(X.days + 1)
    holdings = W[0].copy() if X.days else None  # unit initial investment, uncharged
    for t in range(1, X.days + 1):
        post = holdings * X.values[t - 1]
        total = float(post.sum())
        if t < X.days:
            target = W[t] * total
            total -= rebalance_cost(model, post, target)
            holdings = W[t] * total
        wealth[t] = total
    return wealth
