"""Continuum solver tests: cutoffs, accepted quality, payoffs, deviations."""

from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad

from review_lottery import (
    ModelParams,
    QualityDistribution,
    ResolutionError,
    ThresholdStrategy,
    acceptance_cutoff,
    acceptance_prob,
    accepted_mean_quality,
    aggregate_survival,
    journal_payoff,
    scientist_payoff,
    simulate_once,
)
from review_lottery.continuum import ContinuumSolution, solve, solve_deviated
from review_lottery.core import _tn_sf
from review_lottery.montecarlo import replication_seed, simulate

TINY_SIGMA = 1e-8


class TestAggregateSurvival:
    def test_nobody_participates(self):
        p = ModelParams(lottery_rate=0.3)
        assert aggregate_survival(ThresholdStrategy(0.0), p) == pytest.approx(1.0, abs=1e-12)

    def test_full_adoption(self):
        p = ModelParams(lottery_rate=0.2)
        assert aggregate_survival(ThresholdStrategy(1.0), p) == pytest.approx(0.8, abs=1e-12)

    def test_half_adoption_uniform(self):
        p = ModelParams(lottery_rate=0.2)
        assert aggregate_survival(ThresholdStrategy(0.5), p) == pytest.approx(0.9, abs=1e-9)

    def test_matches_cdf_for_beta(self):
        dist = QualityDistribution.beta(2.0, 5.0)
        p = ModelParams(lottery_rate=0.25, quality_dist=dist)
        tau = 0.37
        expected = 1.0 - 0.25 * dist.cdf(tau)
        assert aggregate_survival(ThresholdStrategy(tau), p) == pytest.approx(expected, abs=1e-6)

    def test_arbitrary_tau_linear(self):
        p = ModelParams(lottery_rate=0.2)
        for tau in (0.13, 0.5, 0.777):
            got = aggregate_survival(ThresholdStrategy(tau), p)
            assert got == pytest.approx(1.0 - 0.2 * tau, abs=1e-6)


class TestAcceptanceCutoff:
    def test_noiseless_top_decile(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1)
        sol = acceptance_cutoff(ThresholdStrategy(0.0), p)
        assert sol.cutoff_t == pytest.approx(0.9, abs=1e-6)
        assert not sol.accept_all_survivors

    def test_noiseless_full_adoption(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1, lottery_rate=0.2)
        sol = acceptance_cutoff(ThresholdStrategy(1.0), p)
        # (1 - L)(1 - t) = alpha  =>  t = 1 - alpha / (1 - L)
        assert sol.cutoff_t == pytest.approx(0.875, abs=1e-6)

    def test_noiseless_cutoff_against_simulation(self):
        # brute-force check: with tiny noise the lowest accepted score
        # per replication sits at the analytic cutoff
        p = ModelParams(sigma=1e-4, alpha=0.1, lottery_rate=0.2)
        mins = []
        for i in range(200):
            rec = simulate_once(ThresholdStrategy(1.0), p, replication_seed(31, i))
            mins.append(rec.accepted_qualities.min())
        assert abs(np.mean(mins) - 0.875) <= 0.01

    def test_accepted_mass_vs_independent_quadrature(self):
        p = ModelParams(sigma=0.3, alpha=0.1)
        sol = acceptance_cutoff(ThresholdStrategy(0.0), p)
        val, _ = quad(lambda q: float(_tn_sf(sol.cutoff_t, q, sol.sigma_eff)),
                      0.0, 1.0, epsabs=1e-12, limit=200)
        assert abs(val - p.alpha) <= 1e-6

    def test_accepted_mass_with_lottery(self):
        p = ModelParams(sigma=0.3, alpha=0.1, lottery_rate=0.2)
        tau = 0.6
        sol = acceptance_cutoff(ThresholdStrategy(tau), p)
        inner = quad(lambda q: float(_tn_sf(sol.cutoff_t, q, sol.sigma_eff)),
                     0.0, tau, epsabs=1e-12, limit=200)[0]
        outer = quad(lambda q: float(_tn_sf(sol.cutoff_t, q, sol.sigma_eff)),
                     tau, 1.0, epsabs=1e-12, limit=200)[0]
        assert abs((1 - 0.2) * inner + outer - p.alpha) <= 1e-6

    def test_degenerate_when_survivors_short(self):
        p = ModelParams(sigma=0.3, alpha=0.1, lottery_rate=0.95)
        sol = acceptance_cutoff(ThresholdStrategy(1.0), p)
        assert sol.accept_all_survivors
        assert sol.cutoff_t == 0.0
        assert sol.q_bar == pytest.approx(0.5, abs=1e-6)  # uniform thinning
        assert acceptance_prob(0.2, sol) == 1.0


class TestAcceptanceProb:
    def test_midpoint_cutoff_symmetry(self):
        sol = ContinuumSolution(cutoff_t=0.5, w_bar=1.0, sigma_eff=0.3, q_bar=0.8)
        assert acceptance_prob(0.5, sol) == pytest.approx(0.5, abs=1e-14)

    def test_noiseless_step(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1)
        sol = acceptance_cutoff(ThresholdStrategy(0.0), p)
        assert acceptance_prob(0.95, sol) == pytest.approx(1.0, abs=1e-9)
        assert acceptance_prob(0.85, sol) == pytest.approx(0.0, abs=1e-9)

    def test_accepted_mass_identity(self):
        p = ModelParams(sigma=0.3, alpha=0.1)
        sol = acceptance_cutoff(ThresholdStrategy(0.0), p)
        val, _ = quad(lambda q: float(acceptance_prob(q, sol)), 0.0, 1.0,
                      epsabs=1e-12, limit=200)
        assert abs(val - 0.1) <= 1e-6

    def test_nondecreasing(self):
        p = ModelParams(sigma=0.3)
        sol = acceptance_cutoff(ThresholdStrategy(0.4), p)
        qs = np.linspace(0, 1, 101)
        assert np.all(np.diff(acceptance_prob(qs, sol)) >= -1e-12)


class TestAcceptedMeanQuality:
    def test_noiseless_top_decile_mean(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1)
        assert accepted_mean_quality(ThresholdStrategy(0.0), p) == pytest.approx(0.95, abs=1e-4)

    def test_noiseless_top_half_mean(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.5)
        assert accepted_mean_quality(ThresholdStrategy(0.0), p) == pytest.approx(0.75, abs=1e-4)

    def test_noiseless_full_adoption_mean(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1, lottery_rate=0.2)
        assert accepted_mean_quality(ThresholdStrategy(1.0), p) == pytest.approx(0.9375, abs=1e-4)

    def test_matches_monte_carlo(self):
        p = ModelParams(sigma=0.3, beta=8.0, alpha=0.1, n_scientists=100)
        cont = accepted_mean_quality(ThresholdStrategy(0.0), p)
        mc = simulate(ThresholdStrategy(0.0), p, 5000, 20240809)
        assert abs(mc.q_bar_mean - cont) <= 2 * mc.q_bar_se

    def test_monotone_degradation_in_sigma(self):
        p = ModelParams(alpha=0.1)
        q_bars = [accepted_mean_quality(ThresholdStrategy(0.0), replace(p, sigma=s))
                  for s in np.arange(0.05, 0.65, 0.05)]
        assert np.all(np.diff(q_bars) <= 1e-9)

    def test_grid_convergence(self):
        p = ModelParams(sigma=0.3, beta=8.0, lottery_rate=0.1, alpha=0.1)
        strat = ThresholdStrategy(0.4694)
        a = accepted_mean_quality(strat, p, points=50)
        b = accepted_mean_quality(strat, p, points=100)
        assert abs(a - b) <= 1e-4


class TestScientistPayoff:
    def test_accepted_for_sure_linear_in_p(self):
        # deep noiseless interior above the cutoff: A = 1 exactly, and with
        # a huge population the 1/N atom leaves the aggregates untouched,
        # so U collapses to b(1-L*p)*q_bar + s*q_bar
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1, lottery_rate=0.1, c=0.0,
                        n_scientists=10**6)
        strat = ThresholdStrategy(0.4)
        sol = solve(strat, p)
        assert acceptance_prob(0.99, sol) == pytest.approx(1.0, abs=1e-12)
        u = {pd: scientist_payoff(0.99, pd, strat, p) for pd in (0.0, 0.5, 1.0)}
        expected = {pd: p.b * (1 - p.lottery_rate * pd) * sol.q_bar + p.s * sol.q_bar
                    for pd in u}
        for pd in u:
            assert u[pd] == pytest.approx(expected[pd], abs=1e-6)
        assert u[1.0] < u[0.5] < u[0.0]
        assert u[0.5] == pytest.approx(0.5 * (u[0.0] + u[1.0]), abs=1e-8)

    def test_rejected_for_sure(self):
        p = ModelParams(sigma=TINY_SIGMA, alpha=0.1, lottery_rate=0.1)
        strat = ThresholdStrategy(0.4)
        sol = solve(strat, p)
        u = scientist_payoff(0.2, 0.0, strat, p)
        assert u == pytest.approx(p.s * sol.q_bar - p.c * 0.2, abs=1e-6)

    def test_fixed_aggregate_slope_sign_matches_fd_when_private(self):
        # with s = 0 the deviation's aggregate feedback is O(1/N) and the
        # full finite difference keeps the sign of the analytic slope
        p = ModelParams(s=0.0)
        strat = ThresholdStrategy(0.4)
        sol = solve(strat, p)
        a_q = acceptance_prob(0.3, sol)
        analytic = -p.lottery_rate * a_q * (p.b * sol.q_bar + p.c * 0.3)
        fd = scientist_payoff(0.3, 1.0, strat, p) - scientist_payoff(0.3, 0.0, strat, p)
        assert abs(analytic) > 1e-4 and abs(fd) > 1e-4
        assert np.sign(analytic) == np.sign(fd)

    def test_epistemic_weight_flips_low_quality_incentive(self):
        # with s > 0 the noise-reduction channel dominates below the
        # cutoff: the full finite difference turns positive even though
        # the fixed-aggregate slope is negative
        p = ModelParams()  # s = 2
        strat = ThresholdStrategy(0.4)
        fd = scientist_payoff(0.3, 1.0, strat, p) - scientist_payoff(0.3, 0.0, strat, p)
        assert fd > 1e-4

    def test_linear_in_p_dev_under_full_resolve(self):
        p = ModelParams()
        strat = ThresholdStrategy(0.4)
        u0 = scientist_payoff(0.3, 0.0, strat, p)
        u5 = scientist_payoff(0.3, 0.5, strat, p)
        u1 = scientist_payoff(0.3, 1.0, strat, p)
        assert abs(u5 - 0.5 * (u0 + u1)) <= 1e-4

    def test_no_deviation_reproduces_undeviated(self):
        p = ModelParams()
        strat = ThresholdStrategy(0.4)
        sol = solve(strat, p)
        cutoff, q_bar, a_atom, w_dev, sig = solve_deviated(strat, p, 0.3, 1.0)
        assert cutoff[0] == sol.cutoff_t
        assert q_bar[0] == sol.q_bar
        assert w_dev[0] == sol.w_bar
        assert sig[0] == sol.sigma_eff
        assert a_atom[0] == acceptance_prob(0.3, sol)

    def test_fixed_cutoff_variant_close_to_resolved(self):
        p = ModelParams()
        strat = ThresholdStrategy(0.4)
        resolved = scientist_payoff(0.35, 0.0, strat, p, resolve_cutoff=True)
        held = scientist_payoff(0.35, 0.0, strat, p, resolve_cutoff=False)
        assert held == pytest.approx(resolved, abs=1e-3)


class TestJournalPayoff:
    def test_noiseless_limit(self):
        p = ModelParams(alpha=0.1, k=3.0)
        pi = journal_payoff(1e-8, ThresholdStrategy(0.0), p)
        assert pi == pytest.approx(0.95 - 1.0, abs=1e-6)

    def test_large_sigma_cost_vanishes(self):
        p = ModelParams(alpha=0.1, k=2.0)
        strat = ThresholdStrategy(0.0)
        sigma = 1e6
        sol = solve(strat, replace(p, sigma=sigma))
        assert journal_payoff(sigma, strat, p) == pytest.approx(sol.q_bar, abs=1e-9)

    def test_cost_term_scales_with_survival(self):
        p = ModelParams(lottery_rate=0.2, k=2.0)
        sigma = 0.3
        cost = (1.0 + sigma) ** (-p.k)
        q1 = solve(ThresholdStrategy(1.0), replace(p, sigma=sigma)).q_bar
        q0 = solve(ThresholdStrategy(0.0), replace(p, sigma=sigma)).q_bar
        pi1 = journal_payoff(sigma, ThresholdStrategy(1.0), p)
        pi0 = journal_payoff(sigma, ThresholdStrategy(0.0), p)
        assert pi1 - q1 == pytest.approx(-(1 - 0.2) * cost, abs=1e-9)
        assert pi0 - q0 == pytest.approx(-cost, abs=1e-9)


class TestContinuumSolutionInvariants:
    @pytest.mark.parametrize("tau,L", [(0.0, 0.1), (0.4, 0.1), (1.0, 0.2), (0.73, 0.3)])
    def test_w_bar_linear_in_tau(self, tau, L):
        p = ModelParams(lottery_rate=L)
        sol = solve(ThresholdStrategy(tau), p)
        assert sol.w_bar == pytest.approx(1.0 - L * tau, abs=1e-6)

    def test_resolution_error_unreachable_at_defaults(self):
        # alpha far above quadrature resolution: solve must not raise
        sol = solve(ThresholdStrategy(0.0), ModelParams(sigma=1e-8, alpha=0.001))
        assert sol.q_bar > 0.999
