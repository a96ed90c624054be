"""Online portfolio selection that tracks a switching market.

The central pair of algorithms evolves a mixture over every possible
switching schedule between pure single-asset strategies, with either a
constant switching probability or one that decays with holding time. Around
them: transaction cost models, a brute-force enumeration oracle, bound
calculators, classic baselines (CRP, hindsight-best CRP, multiplicative
updates, sampled universal portfolio, best stock), CSV ingestion, synthetic
markets, and a backtesting CLI (``switchfolio``).
"""

from .backtest import AlgoSpec, BacktestReport, compare, emit_plot_data, max_drawdown, run
from .baselines import (
    NoData,
    UniversalConfig,
    bcrp_solve,
    best_stock,
    crp_run,
    eg_step,
    sample_simplex,
    universal_run,
    universal_tracks,
)
from .core import (
    AllZero,
    DimensionMismatch,
    DuplicateAssetName,
    NegativeEntry,
    NonPositiveRelative,
    PortfolioError,
    PortfolioVector,
    PriceRelativeMatrix,
    RaggedRows,
    RegimeSpec,
    daily_return,
    normalize_to_simplex,
    validate_relatives,
)
from .costs import (
    CostModel,
    NegativeAllocation,
    realized_wealth_track,
    rebalance_cost,
    switch_factor,
)
from .market_data import (
    EmptyFile,
    NonPositivePrice,
    ParseError,
    RawSeriesFile,
    TooFewRows,
    load_csv,
    prices_to_relatives,
    synth_regime_pair,
    synth_volatility_pair,
    to_csv_text,
    write_csv,
)
from .regimes import (
    AdaptivePrior,
    BoundReport,
    FixedGammaPrior,
    InstanceTooLarge,
    InvalidRegime,
    adaptive_penalty,
    bound_check,
    count_regimes,
    enumerate_regimes,
    fixed_gamma_penalty,
    kt_neg_log2_sequence,
    kt_product,
    log_mixture_wealth,
    log_regime_wealth,
    mixture_oracle,
    prior_adaptive,
    prior_fixed,
    regime_wealth,
)
from .switching import (
    AdaptiveState,
    FixedGammaState,
    GammaOutOfRange,
    TooFewAssets,
    adaptive_init,
    adaptive_step,
    adaptive_weights,
    fixed_init,
    fixed_step,
    fixed_weights,
    gamma_hat,
    log_total_wealth,
    total_wealth,
)

__version__ = "0.1.0"
