"""Command-line front door.

Subcommands:

* ``synth``     generate one of the built-in synthetic two-asset markets as CSV
* ``backtest``  run one strategy over a CSV and print a TSV report
* ``compare``   run several strategies over the same CSV, one TSV row each
* ``oracle``    brute-force mixture wealth vs. the recursive algorithm
* ``bounds``    per-regime competitiveness accounting as TSV

Exit codes: 0 success, 1 usage error, 2 data/validation error (with
line/column diagnostics for CSV problems). All randomness flows from
``--seed``; identical invocations produce byte-identical output. The
environment variable REGIME_SWITCH_THREADS caps internal parallelism
(0 or unset = automatic).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import backtest as bt
from .core import PortfolioError
from .costs import CostModel
from .market_data import (
    MODE_PRICES,
    MODE_RELATIVES,
    load_csv,
    synth_regime_pair,
    synth_volatility_pair,
    to_csv_text,
)
from .regimes import (
    CHARGE_ALL_SEGMENTS,
    CHARGE_SWITCHES_ONLY,
    AdaptivePrior,
    FixedGammaPrior,
    bound_check,
    enumerate_regimes,
    mixture_oracle,
)
from .switching import (
    adaptive_init,
    adaptive_step,
    fixed_init,
    fixed_step,
    log_total_wealth,
    total_wealth,
)

LOG2 = math.log(2.0)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; this package reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cost_from_args(args) -> CostModel | None:
    if args.cost_model == "none":
        return None
    if args.cost_model == "per-trade":
        return CostModel.per_trade(args.cost_rate)
    return CostModel.parallel(args.cost_rate)


def _add_data_flags(p: _Parser):
    p.add_argument("--data", required=True, help="input CSV of relatives or prices")
    p.add_argument(
        "--mode",
        choices=[MODE_RELATIVES, MODE_PRICES],
        default=MODE_RELATIVES,
        help="how to interpret the CSV rows (default: relatives)",
    )


def _add_cost_flags(p: _Parser):
    p.add_argument(
        "--cost-model",
        choices=["none", "per-trade", "parallel"],
        default="none",
        help="transaction cost model (default: none)",
    )
    p.add_argument("--cost-rate", type=float, default=0.0, help="commission rate c in [0, 0.5)")


def _add_common(p: _Parser):
    p.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    p.add_argument("--out", help="write output here instead of stdout")


def _parse_algo_string(text: str, args) -> bt.AlgoSpec:
    """Parse 'kind' or 'kind:key=value,key=value' into an AlgoSpec."""
    kind, _, param_text = text.partition(":")
    kind = kind.strip()
    fields = {
        "cost": _cost_from_args(args),
        "cost_accounting": args.cost_accounting,
        "seed": args.seed,
    }
    for chunk in param_text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, eq, value = chunk.partition("=")
        if not eq:
            raise PortfolioError(f"malformed algorithm parameter {chunk!r} in {text!r}")
        key = key.strip()
        value = value.strip()
        if key == "gamma":
            fields["gamma"] = float(value)
        elif key == "eta":
            fields["eta"] = float(value)
        elif key == "samples":
            fields["samples"] = int(value)
        elif key == "seed":
            fields["seed"] = int(value)
        elif key == "weights":
            fields["weights"] = tuple(float(v) for v in value.split("|"))
        else:
            raise PortfolioError(f"unknown algorithm parameter {key!r} in {text!r}")
    return bt.AlgoSpec(kind=kind, **fields)


def _thread_cap() -> int:
    raw = os.environ.get("REGIME_SWITCH_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        raise PortfolioError(f"REGIME_SWITCH_THREADS must be an integer, got {raw!r}") from None
    if cap < 0:
        raise PortfolioError(f"REGIME_SWITCH_THREADS must be >= 0, got {cap}")
    return cap


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_switching_log2(X, prior, cost) -> tuple[float, float]:
    if isinstance(prior, FixedGammaPrior):
        state = fixed_init(X.assets, prior.gamma)
        for t in range(X.days):
            fixed_step(state, X.values[t], cost)
    else:
        state = adaptive_init(X.assets)
        for t in range(X.days):
            adaptive_step(state, X.values[t], cost)
    return log_total_wealth(state) / LOG2, total_wealth(state)


def _cmd_synth(args) -> int:
    X = synth_volatility_pair(args.n) if args.kind == "volatility-pair" else synth_regime_pair(args.n)
    _emit(to_csv_text(X), args.out)
    return 0


def _cmd_backtest(args, parser: _Parser) -> int:
    if args.algo == bt.KIND_SWITCHING_FIXED and args.gamma is None:
        parser.error("--algo switching-fixed requires --gamma")
    if args.algo == bt.KIND_CRP and args.weights is None:
        parser.error("--algo crp requires --weights")
    if args.algo == bt.KIND_EG and args.eta is None:
        parser.error("--algo eg requires --eta")
    X = load_csv(args.data, args.mode)
    is_universal = args.algo == bt.KIND_UNIVERSAL
    weights = tuple(float(v) for v in args.weights.split(",")) if args.weights else None
    spec = bt.AlgoSpec(
        kind=args.algo,
        gamma=args.gamma if args.algo == bt.KIND_SWITCHING_FIXED else None,
        weights=weights if args.algo == bt.KIND_CRP else None,
        eta=args.eta if args.algo == bt.KIND_EG else None,
        samples=args.samples if is_universal else None,
        seed=args.seed,
        cost=_cost_from_args(args),
        cost_accounting=args.cost_accounting,
    )
    report = bt.run(spec, X)
    _emit(bt.report_tsv(report), args.out)
    if args.plot_data:
        with open(args.plot_data, "w", newline="") as fh:
            fh.write(bt.emit_plot_data(report))
    return 0


def _cmd_compare(args) -> int:
    X = load_csv(args.data, args.mode)
    specs = [_parse_algo_string(text, args) for text in args.algo]
    rows = bt.compare(specs, X, max_workers=_thread_cap())
    _emit(bt.comparison_tsv(rows), args.out)
    return 0


def _cmd_oracle(args, parser: _Parser) -> int:
    if args.prior == "fixed" and args.gamma is None:
        parser.error("--prior fixed requires --gamma")
    X = load_csv(args.data, args.mode)
    prior = FixedGammaPrior(args.gamma) if args.prior == "fixed" else AdaptivePrior()
    cost = _cost_from_args(args)
    oracle = mixture_oracle(X, prior, cost, args.convention)
    _, algorithm = _run_switching_log2(X, prior, cost)
    gap = abs(algorithm - oracle) / oracle if oracle else 0.0
    text = (
        f"oracle_wealth\t{oracle:.17g}\n"
        f"algorithm_wealth\t{algorithm:.17g}\n"
        f"relative_gap\t{gap:.6e}\n"
    )
    _emit(text, args.out)
    return 0


def _cmd_bounds(args, parser: _Parser) -> int:
    if args.prior == "fixed" and args.gamma is None:
        parser.error("--prior fixed requires --gamma")
    X = load_csv(args.data, args.mode)
    prior = FixedGammaPrior(args.gamma) if args.prior == "fixed" else AdaptivePrior()
    cost = _cost_from_args(args)
    alg_log2, _ = _run_switching_log2(X, prior, cost)
    lines = [
        "switch_times\tstrategies\tswitches\tregime_log2_wealth\tpenalty_bits\t"
        "algorithm_log2_wealth\tslack_bits"
    ]
    for regime in enumerate_regimes(X.days, X.assets):
        rep = bound_check(X, prior, alg_log2, regime, cost, args.convention)
        times = ",".join(map(str, regime.switch_times)) or "-"
        strats = ",".join(map(str, regime.strategies))
        lines.append(
            f"{times}\t{strats}\t{regime.switches}\t{rep.regime_log_wealth:.12g}\t"
            f"{rep.penalty:.12g}\t{rep.algorithm_log_wealth:.12g}\t{rep.slack:.12g}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="switchfolio", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", parents=[], help="generate a synthetic market CSV")
    p_synth.add_argument("--kind", choices=["volatility-pair", "regime-pair"], required=True)
    p_synth.add_argument("--n", type=int, required=True, help="half the number of trading days")
    _add_common(p_synth)

    p_bt = sub.add_parser("backtest", help="run one strategy and print a TSV report")
    _add_data_flags(p_bt)
    p_bt.add_argument("--algo", choices=list(bt.ALGO_KINDS), required=True)
    p_bt.add_argument("--gamma", type=float, help="switching probability for switching-fixed")
    p_bt.add_argument("--weights", help="comma-separated CRP weights, e.g. 0.5,0.5")
    p_bt.add_argument("--eta", type=float, help="learning rate for eg")
    p_bt.add_argument("--samples", type=int, default=10_000, help="sample count for universal")
    _add_cost_flags(p_bt)
    p_bt.add_argument(
        "--cost-accounting",
        choices=[bt.ACCOUNTING_BUCKET, bt.ACCOUNTING_REALIZED],
        default=bt.ACCOUNTING_BUCKET,
    )
    p_bt.add_argument("--plot-data", help="also write the day-series CSV here")
    _add_common(p_bt)

    p_cmp = sub.add_parser("compare", help="run several strategies, one TSV row each")
    _add_data_flags(p_cmp)
    p_cmp.add_argument(
        "--algo",
        action="append",
        required=True,
        help="repeatable; 'kind' or 'kind:gamma=0.33,...' (weights values separated by |)",
    )
    _add_cost_flags(p_cmp)
    p_cmp.add_argument(
        "--cost-accounting",
        choices=[bt.ACCOUNTING_BUCKET, bt.ACCOUNTING_REALIZED],
        default=bt.ACCOUNTING_BUCKET,
    )
    _add_common(p_cmp)

    p_or = sub.add_parser("oracle", help="brute-force mixture wealth vs the algorithm")
    _add_data_flags(p_or)
    p_or.add_argument("--prior", choices=["fixed", "adaptive"], required=True)
    p_or.add_argument("--gamma", type=float, help="switching probability for --prior fixed")
    _add_cost_flags(p_or)
    p_or.add_argument(
        "--convention",
        choices=[CHARGE_SWITCHES_ONLY, CHARGE_ALL_SEGMENTS],
        default=CHARGE_SWITCHES_ONLY,
    )
    _add_common(p_or)

    p_bd = sub.add_parser("bounds", help="per-regime competitiveness accounting")
    _add_data_flags(p_bd)
    p_bd.add_argument("--prior", choices=["fixed", "adaptive"], required=True)
    p_bd.add_argument("--gamma", type=float, help="switching probability for --prior fixed")
    _add_cost_flags(p_bd)
    p_bd.add_argument(
        "--convention",
        choices=[CHARGE_SWITCHES_ONLY, CHARGE_ALL_SEGMENTS],
        default=CHARGE_SWITCHES_ONLY,
    )
    _add_common(p_bd)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "backtest":
            return _cmd_backtest(args, parser)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "oracle":
            return _cmd_oracle(args, parser)
        return _cmd_bounds(args, parser)
    except PortfolioError as exc:
        print(f"switchfolio: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"switchfolio: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
