import math

import numpy as np
import pytest

from switchfolio.core import RegimeSpec, validate_relatives
from switchfolio.costs import CostModel
from switchfolio.regimes import (
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
from switchfolio.switching import (
    adaptive_init,
    adaptive_step,
    fixed_init,
    fixed_step,
    log_total_wealth,
)

LOG2 = math.log(2.0)


def random_matrix(rng, T, N):
    vals = np.exp(rng.uniform(np.log(0.25), np.log(4.0), size=(T, N)))
    return validate_relatives(vals, [f"a{i}" for i in range(N)])


class TestPriorFixed:
    def test_no_switch_value(self):
        q = RegimeSpec((), (0,))
        assert math.isclose(prior_fixed(q, 3, 2, 1 / 3), 2 / 9, rel_tol=1e-14)

    def test_one_switch_value(self):
        q = RegimeSpec((1,), (0, 1))
        assert math.isclose(prior_fixed(q, 3, 2, 1 / 3), 1 / 9, rel_tol=1e-14)
        q2 = RegimeSpec((2,), (1, 0))
        assert math.isclose(prior_fixed(q2, 3, 2, 1 / 3), 1 / 9, rel_tol=1e-14)

    @pytest.mark.parametrize("N", [2, 3])
    @pytest.mark.parametrize("T", range(1, 9))
    def test_normalizes(self, N, T):
        total = sum(prior_fixed(q, T, N, 1 / 3) for q in enumerate_regimes(T, N))
        assert abs(total - 1.0) <= 1e-12

    def test_switch_time_out_of_range(self):
        with pytest.raises(InvalidRegime):
            prior_fixed(RegimeSpec((3,), (0, 1)), 3, 2, 0.5)


class TestPriorAdaptive:
    def test_stay_regime(self):
        assert math.isclose(prior_adaptive(RegimeSpec((), (0,)), 2, 2), 0.25, rel_tol=1e-14)

    def test_switch_regime(self):
        assert math.isclose(prior_adaptive(RegimeSpec((1,), (0, 1)), 2, 2), 0.25, rel_tol=1e-14)

    @pytest.mark.parametrize("N", [2, 3])
    @pytest.mark.parametrize("T", range(1, 9))
    def test_normalizes(self, N, T):
        total = sum(prior_adaptive(q, T, N) for q in enumerate_regimes(T, N))
        assert abs(total - 1.0) <= 1e-12


class TestRegimeWealth:
    X = validate_relatives([[2.0, 0.5], [0.5, 2.0]], ["a", "b"])

    def test_stay_product(self):
        assert math.isclose(regime_wealth(RegimeSpec((), (0,)), self.X), 1.0, rel_tol=1e-14)

    def test_switch_product(self):
        assert math.isclose(regime_wealth(RegimeSpec((1,), (0, 1)), self.X), 4.0, rel_tol=1e-14)

    def test_all_segments_cost_convention(self):
        w = regime_wealth(
            RegimeSpec((1,), (0, 1)), self.X, CostModel.per_trade(0.01), "all-segments"
        )
        assert math.isclose(w, 4.0 * 0.9801**2, rel_tol=1e-13)

    def test_switches_only_cost_convention(self):
        w = regime_wealth(
            RegimeSpec((1,), (0, 1)), self.X, CostModel.per_trade(0.01), "switches-only"
        )
        assert math.isclose(w, 4.0 * 0.9801, rel_tol=1e-13)


class TestEnumerateRegimes:
    def test_small_counts(self):
        assert len(list(enumerate_regimes(1, 2))) == 2
        assert len(list(enumerate_regimes(2, 2))) == 4
        assert len(list(enumerate_regimes(6, 2))) == 64  # 2 * 2^5

    @pytest.mark.parametrize("T,N", [(1, 2), (3, 2), (4, 3), (6, 2)])
    def test_count_formula_and_uniqueness(self, T, N):
        regimes = list(enumerate_regimes(T, N))
        assert len(regimes) == count_regimes(T, N) == N**T
        assert len(set(regimes)) == len(regimes)

    def test_guard(self):
        with pytest.raises(InstanceTooLarge):
            next(enumerate_regimes(30, 2))


class TestMixtureOracle:
    def test_empty_history(self):
        X = validate_relatives([], ["a", "b"])
        assert mixture_oracle(X, AdaptivePrior()) == 1.0
        assert mixture_oracle(X, FixedGammaPrior(0.3)) == 1.0

    def test_single_day_uniform_pick(self):
        X = validate_relatives([[2.0, 0.5]], ["a", "b"])
        assert math.isclose(mixture_oracle(X, AdaptivePrior()), 1.25, rel_tol=1e-14)
        assert math.isclose(mixture_oracle(X, FixedGammaPrior(0.3)), 1.25, rel_tol=1e-14)

    def test_matches_recursions(self):
        rng = np.random.default_rng(21)
        X = random_matrix(rng, 7, 2)
        st = fixed_init(2, 0.3)
        for t in range(1, 8):
            fixed_step(st, X.day_row(t))
        assert abs(log_total_wealth(st) - log_mixture_wealth(X, FixedGammaPrior(0.3))) < 1e-10
        st = adaptive_init(2)
        for t in range(1, 8):
            adaptive_step(st, X.day_row(t))
        assert abs(log_total_wealth(st) - log_mixture_wealth(X, AdaptivePrior())) < 1e-10

    def test_sum_order_invariance(self):
        rng = np.random.default_rng(22)
        X = random_matrix(rng, 6, 3)
        terms = [
            math.log(prior_adaptive(q, 6, 3)) + log_regime_wealth(q, X)
            for q in enumerate_regimes(6, 3)
        ]
        reference = log_mixture_wealth(X, AdaptivePrior())
        for _ in range(3):
            rng.shuffle(terms)
            acc = -math.inf
            for t in terms:
                acc = np.logaddexp(acc, t)
            assert abs(float(acc) - reference) <= 1e-12


class TestKTProduct:
    def test_small_values(self):
        v, nl = kt_product(1)
        assert v == 0.5 and nl == 1.0
        v, _ = kt_product(2)
        assert math.isclose(v, 0.375, rel_tol=1e-15)
        v, nl = kt_product(4)
        assert math.isclose(v, 105 / 384, rel_tol=1e-14)
        assert nl <= 0.5 * math.log2(4) + 1

    def test_sequence_matches_scalar(self):
        seq = kt_neg_log2_sequence(50)
        for n in (1, 2, 17, 50):
            assert math.isclose(seq[n - 1], kt_product(n)[1], rel_tol=1e-13)

    def test_stay_run_bound_and_monotone_normalization(self):
        # -log2 kt(n) <= log2(n)/2 + 1, i.e. sqrt(n)*kt(n) >= 1/2 and increasing.
        neg = kt_neg_log2_sequence(10_000)
        n = np.arange(1, 10_001)
        assert np.all(neg <= 0.5 * np.log2(n) + 1.0)
        g_log2 = 0.5 * np.log2(n) - neg
        assert np.all(np.diff(g_log2) > 0)
        assert np.all(g_log2 >= -1.0)  # g >= 1/2


class TestPenalties:
    def test_adaptive_penalty_hand_values(self):
        assert math.isclose(adaptive_penalty(4, 2, 1), 10.0, rel_tol=1e-14)
        assert math.isclose(adaptive_penalty(4, 2, 0), 4.0, rel_tol=1e-14)
        assert math.isclose(adaptive_penalty(16, 2, 2), 20.0, rel_tol=1e-14)

    def test_fixed_penalty_hand_value(self):
        expected = 2.0 + math.log2(3.0) + 2.0 * math.log2(1.5)
        assert math.isclose(fixed_gamma_penalty(3, 2, 1, 1 / 3), expected, rel_tol=1e-14)

    def test_fixed_penalty_small_gamma_limit(self):
        p = fixed_gamma_penalty(10, 2, 0, 1e-12)
        assert math.isclose(p, math.log2(2), abs_tol=1e-9)

    def test_adaptive_penalty_dominates_exact_prior(self):
        for N in (2, 3):
            for T in range(2, 9):
                for q in enumerate_regimes(T, N):
                    assert -math.log2(prior_adaptive(q, T, N)) <= adaptive_penalty(
                        T, N, q.switches
                    ) + 1e-12

    def test_fixed_penalty_exceeds_exact_prior(self):
        for N in (2, 3):
            for T in range(1, 9):
                for gamma in (0.1, 1 / 3, 0.45):
                    for q in enumerate_regimes(T, N):
                        assert -math.log2(prior_fixed(q, T, N, gamma)) < fixed_gamma_penalty(
                            T, N, q.switches, gamma
                        )


class TestBoundCheck:
    def run_adaptive_log2(self, X):
        st = adaptive_init(X.assets)
        for t in range(1, X.days + 1):
            adaptive_step(st, X.day_row(t))
        return log_total_wealth(st) / LOG2

    def test_slack_nonnegative_across_regimes(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            X = random_matrix(rng, 6, 2)
            alg = self.run_adaptive_log2(X)
            for q in enumerate_regimes(6, 2):
                rep = bound_check(X, AdaptivePrior(), alg, q)
                assert rep.slack >= 0

    def test_fixed_prior_slack(self):
        rng = np.random.default_rng(24)
        X = random_matrix(rng, 6, 2)
        st = fixed_init(2, 1 / 3)
        for t in range(1, 7):
            fixed_step(st, X.day_row(t))
        alg = log_total_wealth(st) / LOG2
        for q in enumerate_regimes(6, 2):
            rep = bound_check(X, FixedGammaPrior(1 / 3), alg, q)
            assert rep.slack >= 0

    def test_degenerate_two_day_instance(self):
        X = validate_relatives([[2.0, 0.5], [0.5, 2.0]], ["a", "b"])
        alg = self.run_adaptive_log2(X)
        rep = bound_check(X, AdaptivePrior(), alg, RegimeSpec((), (0,)))
        assert rep.slack >= 0 and math.isfinite(rep.slack)

    def test_report_fields(self):
        rep = BoundReport(regime_log_wealth=3.0, penalty=5.0, algorithm_log_wealth=1.0)
        assert rep.slack == 3.0
