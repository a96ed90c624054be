"""Run any configured strategy over a relatives matrix and assemble reports.

The online protocol: the portfolio for day t may depend only on days 1..t-1;
the day's relatives are then revealed and wealth compounds. Hindsight
strategies (best stock, best CRP) break this deliberately and are flagged.

Report row conventions (day k = 0..T):

* ``wealth[k]``: total wealth after k trading days (wealth[0] = 1);
* ``weights[k]``: the portfolio chosen for day k+1 (so weights[0] is the
  initial allocation and weights[T] is what the strategy would hold next);
* ``largest[k]``: the asset holding the most wealth after day k settles,
  ties to the lowest index.

Two cost accountings: ``bucket`` reports the algorithm's internal bookkeeping
(lump-move factors on switched mass; what the competitiveness bounds cover),
``realized`` replays the implied weights through netted-trade execution.
Both series are attached whenever a cost model is active.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import (
    UniversalConfig,
    bcrp_solve,
    best_stock,
    eg_step,
    universal_tracks,
)
from .core import (
    DimensionMismatch,
    PortfolioError,
    PortfolioVector,
    PriceRelativeMatrix,
)
from .costs import CostModel, realized_wealth_track
from .switching import (
    adaptive_init,
    adaptive_step,
    adaptive_weights,
    fixed_init,
    fixed_step,
    fixed_weights,
    total_wealth,
)

KIND_SWITCHING_FIXED = "switching-fixed"
KIND_SWITCHING_ADAPTIVE = "switching-adaptive"
KIND_CRP = "crp"
KIND_BCRP = "bcrp"
KIND_EG = "eg"
KIND_UNIVERSAL = "universal"
KIND_BEST_STOCK = "best-stock"

ALGO_KINDS = (
    KIND_SWITCHING_FIXED,
    KIND_SWITCHING_ADAPTIVE,
    KIND_CRP,
    KIND_BCRP,
    KIND_EG,
    KIND_UNIVERSAL,
    KIND_BEST_STOCK,
)

ACCOUNTING_BUCKET = "bucket"
ACCOUNTING_REALIZED = "realized"


@dataclass(frozen=True)
class AlgoSpec:
    """One strategy configuration for a backtest run."""

    kind: str
    gamma: float | None = None
    weights: tuple[float, ...] | None = None
    eta: float | None = None
    samples: int | None = None
    seed: int = 0
    cost: CostModel | None = None
    cost_accounting: str = ACCOUNTING_BUCKET

    def __post_init__(self):
        if self.kind not in ALGO_KINDS:
            raise PortfolioError(f"unknown algorithm kind {self.kind!r}; choose from {ALGO_KINDS}")
        if self.cost_accounting not in (ACCOUNTING_BUCKET, ACCOUNTING_REALIZED):
            raise PortfolioError(f"cost_accounting must be bucket or realized, got {self.cost_accounting!r}")
        if self.kind == KIND_SWITCHING_FIXED and self.gamma is None:
            raise PortfolioError("switching-fixed needs gamma")
        if self.kind == KIND_CRP and self.weights is None:
            raise PortfolioError("crp needs weights")
        if self.kind == KIND_EG and self.eta is None:
            raise PortfolioError("eg needs eta")
        if self.kind == KIND_UNIVERSAL and self.samples is None:
            raise PortfolioError("universal needs a sample count")

    @property
    def label(self) -> str:
        parts = [self.kind]
        if self.gamma is not None:
            parts.append(f"gamma={self.gamma:g}")
        if self.weights is not None:
            parts.append("w=" + "|".join(f"{v:g}" for v in self.weights))
        if self.eta is not None:
            parts.append(f"eta={self.eta:g}")
        if self.samples is not None:
            parts.append(f"samples={self.samples}")
            parts.append(f"seed={self.seed}")
        return " ".join(parts)


@dataclass(frozen=True)
class BacktestReport:
    """Day-indexed wealth, weights, and largest-asset track for one strategy."""

    spec: AlgoSpec
    wealth: np.ndarray
    weights: np.ndarray
    largest: np.ndarray
    hindsight_only: bool = False
    wealth_bucket: np.ndarray | None = None
    wealth_realized: np.ndarray | None = None
    dates: tuple[str, ...] | None = None

    @property
    def final_wealth(self) -> float:
        return float(self.wealth[-1])

    @property
    def days(self) -> int:
        return self.wealth.size - 1


def max_drawdown(wealth: np.ndarray) -> float:
    """Largest peak-to-trough fraction lost along a wealth series.

    Supporting practical metric for reports; no competitiveness guarantee
    speaks about it.
    """
    peaks = np.maximum.accumulate(wealth)
    return float((1.0 - wealth / peaks).max())


def _largest_track(weights: np.ndarray, X: PriceRelativeMatrix) -> np.ndarray:
    """argmax of post-day wealth mass; mass on day k is weights[k-1] * x^k."""
    largest = np.empty(X.days + 1, dtype=int)
    largest[0] = int(np.argmax(weights[0]))
    for k in range(1, X.days + 1):
        largest[k] = int(np.argmax(weights[k - 1] * X.values[k - 1]))
    return largest


def _switching_tracks(spec: AlgoSpec, X: PriceRelativeMatrix):
    n = X.assets
    if spec.kind == KIND_SWITCHING_FIXED:
        state = fixed_init(n, spec.gamma)
        weights_of = fixed_weights
        step = fixed_step
    else:
        state = adaptive_init(n)
        weights_of = adaptive_weights
        step = adaptive_step
    weights = np.empty((X.days + 1, n))
    wealth = np.ones(X.days + 1)
    weights[0] = 1.0 / n  # the uncharged initial purchase is uniform
    for t in range(1, X.days + 1):
        step(state, X.values[t - 1], spec.cost)
        wealth[t] = total_wealth(state)
        weights[t] = weights_of(state, spec.cost).weights
    return wealth, weights


def _weight_driven_tracks(spec: AlgoSpec, X: PriceRelativeMatrix):
    """Strategies defined purely by a weight schedule; costs always realized."""
    n = X.assets
    T = X.days
    weights = np.empty((T + 1, n))
    if spec.kind == KIND_CRP:
        w = PortfolioVector(np.asarray(spec.weights, dtype=float))
        if w.assets != n:
            raise DimensionMismatch(f"crp weights have {w.assets} entries for {n} assets")
        weights[:] = w.weights
    elif spec.kind == KIND_BCRP:
        w, _ = bcrp_solve(X)
        weights[:] = w.weights
    elif spec.kind == KIND_BEST_STOCK:
        idx, _ = best_stock(X)
        weights[:] = 0.0
        weights[:, idx] = 1.0
    elif spec.kind == KIND_EG:
        w = PortfolioVector.uniform(n)
        weights[0] = w.weights
        for t in range(1, T + 1):
            w = eg_step(w, X.values[t - 1], spec.eta)
            weights[t] = w.weights
    else:
        raise PortfolioError(f"not a weight-driven kind: {spec.kind}")
    wealth = realized_wealth_track(weights[:T], X, spec.cost)
    return wealth, weights


def run(spec: AlgoSpec, X: PriceRelativeMatrix) -> BacktestReport:
    """Backtest one strategy over a relatives matrix."""
    wealth_bucket = None
    wealth_realized = None
    if spec.kind in (KIND_SWITCHING_FIXED, KIND_SWITCHING_ADAPTIVE):
        wealth, weights = _switching_tracks(spec, X)
        if spec.cost is not None:
            wealth_bucket = wealth
            wealth_realized = realized_wealth_track(weights[: X.days], X, spec.cost)
            wealth = wealth_bucket if spec.cost_accounting == ACCOUNTING_BUCKET else wealth_realized
    elif spec.kind == KIND_UNIVERSAL:
        config = UniversalConfig(spec.samples, spec.seed, spec.cost)
        wealth, weights = universal_tracks(X, config)
        if spec.cost is not None:
            # The sampled mixture's native accounting is per-CRP realized cost.
            wealth_bucket = wealth
            wealth_realized = wealth
    else:
        wealth, weights = _weight_driven_tracks(spec, X)
        if spec.cost is not None:
            wealth_bucket = wealth
            wealth_realized = wealth
    return BacktestReport(
        spec=spec,
        wealth=wealth,
        weights=weights,
        largest=_largest_track(weights, X),
        hindsight_only=spec.kind in (KIND_BCRP, KIND_BEST_STOCK),
        wealth_bucket=wealth_bucket,
        wealth_realized=wealth_realized,
        dates=X.dates,
    )


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    parameters: str
    final_wealth: float
    max_drawdown: float
    hindsight_only: bool


def compare(
    specs: list[AlgoSpec],
    X: PriceRelativeMatrix,
    max_workers: int = 0,
) -> list[ComparisonRow]:
    """Backtest several strategies over the same matrix, one row per spec.

    Rows come back in spec order regardless of execution interleaving;
    max_workers = 0 picks a worker count automatically, 1 forces sequential.
    """
    if not specs:
        raise PortfolioError("compare needs at least one algorithm spec")
    if max_workers == 0:
        max_workers = min(len(specs), os.cpu_count() or 1)
    if max_workers == 1 or len(specs) == 1:
        reports = [run(s, X) for s in specs]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            reports = list(pool.map(lambda s: run(s, X), specs))
    rows = []
    for spec, report in zip(specs, reports):
        params = spec.label[len(spec.kind) :].strip()
        rows.append(
            ComparisonRow(
                name=spec.kind,
                parameters=params or "-",
                final_wealth=report.final_wealth,
                max_drawdown=max_drawdown(report.wealth),
                hindsight_only=report.hindsight_only,
            )
        )
    return rows


def comparison_tsv(rows: list[ComparisonRow]) -> str:
    out = ["name\tparameters\tfinal_wealth\tmax_drawdown\thindsight_only"]
    for r in rows:
        out.append(
            f"{r.name}\t{r.parameters}\t{r.final_wealth:.12g}\t{r.max_drawdown:.12g}\t"
            f"{'yes' if r.hindsight_only else 'no'}"
        )
    return "\n".join(out) + "\n"


def report_tsv(report: BacktestReport) -> str:
    """Key-value TSV summary of one backtest."""
    lines = [
        f"algorithm\t{report.spec.kind}",
        f"parameters\t{report.spec.label[len(report.spec.kind):].strip() or '-'}",
        f"days\t{report.days}",
        f"final_wealth\t{report.final_wealth:.12g}",
        f"max_drawdown\t{max_drawdown(report.wealth):.12g}",
        f"hindsight_only\t{'yes' if report.hindsight_only else 'no'}",
    ]
    if report.spec.cost is not None:
        lines.append(f"cost_model\t{report.spec.cost.kind}")
        lines.append(f"cost_rate\t{report.spec.cost.rate:.12g}")
        lines.append(f"cost_accounting\t{report.spec.cost_accounting}")
        lines.append(f"final_wealth_bucket\t{float(report.wealth_bucket[-1]):.12g}")
        lines.append(f"final_wealth_realized\t{float(report.wealth_realized[-1]):.12g}")
    return "\n".join(lines) + "\n"


def emit_plot_data(report: BacktestReport) -> str:
    """Day series as CSV: day, wealth, largest asset, one weight column per asset.

    17-significant-digit decimals, one row per day 0..T. A trailing date
    column is appended only when the source data carried dates.
    """
    n = report.weights.shape[1]
    buf = io.StringIO()
    header = "day,wealth,largest_asset," + ",".join(f"w_{i + 1}" for i in range(n))
    with_dates = report.dates is not None
    if with_dates:
        header += ",date"
    buf.write(header + "\n")
    for k in range(report.days + 1):
        cells = [str(k), f"{report.wealth[k]:.17g}", str(int(report.largest[k]))]
        cells += [f"{v:.17g}" for v in report.weights[k]]
        if with_dates:
            # Day 0 predates the first dated relative.
            cells.append("" if k == 0 else report.dates[k - 1])
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
