"""Optimizers over threshold strategies: planner, Nash, journal, joint.

Thresholds live on a uniform strategy grid (50 points by default). A
candidate threshold is a verified Nash equilibrium when no scientist on
the grid can gain more than the indifference tolerance by unilaterally
flipping their participation; among verified candidates the largest is
reported.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from review_lottery.core import ModelParams, ThresholdStrategy
from review_lottery.continuum import (
    acceptance_prob,
    journal_payoff,
    payoff_from_parts,
    scientist_payoff,
    solve,
    solve_deviated,
)
from review_lottery.quadrature import DEFAULT_POINTS

log = logging.getLogger(__name__)

TAU_GRID_POINTS = 50
GAP_TOL = 1e-6          # indifference tolerance on deviation gains
TIE_TOL = 1e-9          # best-response tie resolves to the prescription

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def tau_grid(points: int = TAU_GRID_POINTS) -> np.ndarray:
    """The uniform strategy grid on [0, 1]."""
    return np.linspace(0.0, 1.0, points)


@dataclass(frozen=True)
class EquilibriumResult:
    """Outcome of one solver run."""

    tau_star: float
    sigma_star: float
    q_bar: float
    mode: str                    # Planner | NashFixedSigma | JointFixedPoint
    converged: bool
    deviation_gap: float
    iterations: int
    diagnostics: dict = field(default_factory=dict, compare=False)


def _golden_max(fn, lo: float, hi: float, xtol: float = 1e-5):
    """Golden-section maximization on [lo, hi]; returns (x, fn(x))."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    while abs(b - a) > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def planner_optimum(params: ModelParams, points: int = DEFAULT_POINTS,
                    grid_points: int = TAU_GRID_POINTS) -> EquilibriumResult:
    """Threshold maximizing mean accepted quality.

    Grid scan plus one golden-section refinement inside the best cell;
    tau = 0 is on the grid, so the optimum never falls below no-lottery
    quality.
    """
    grid = tau_grid(grid_points)
    q_bars = np.array([solve(ThresholdStrategy(t), params, points).q_bar for t in grid])
    i = int(np.argmax(q_bars))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    tau_ref, q_ref = _golden_max(
        lambda t: solve(ThresholdStrategy(float(t)), params, points).q_bar, lo, hi)
    if q_ref >= q_bars[i]:
        tau_star, q_star = float(tau_ref), float(q_ref)
    else:
        tau_star, q_star = float(grid[i]), float(q_bars[i])
    return EquilibriumResult(
        tau_star, params.sigma, q_star, "Planner", True, 0.0, grid.size,
        diagnostics={"grid": grid, "grid_q_bar": q_bars})


def scientist_best_response(q: float, strategy: ThresholdStrategy,
                            params: ModelParams,
                            points: int = DEFAULT_POINTS) -> int:
    """Best participation in {0, 1}; ties follow the strategy's prescription."""
    u1 = scientist_payoff(q, 1.0, strategy, params, points)
    u0 = scientist_payoff(q, 0.0, strategy, params, points)
    if abs(u1 - u0) <= TIE_TOL:
        return int(strategy.participation(q))
    return 1 if u1 > u0 else 0


def _deviation_gaps(tau: float, params: ModelParams, qs: np.ndarray,
                    points: int):
    """Gain available to each quality on the grid from flipping participation.

    At tau = 0 the candidate means "nobody participates": the tie-at-tau
    convention would prescribe participation to the single bottom atom,
    which is a measure-zero artifact, so every quality is treated as out.
    """
    strat = ThresholdStrategy(float(tau))
    p_presc = strat.participation(qs) if tau > 0.0 else np.zeros_like(qs)
    p_dev = 1.0 - p_presc
    _, q_bar_d, a_d, _, _ = solve_deviated(strat, params, qs, p_dev, points,
                                           p_prescribed=p_presc)
    u_dev = payoff_from_parts(qs, p_dev, a_d, q_bar_d, params)
    base = solve(strat, params, points)
    u_presc = payoff_from_parts(qs, p_presc, acceptance_prob(qs, base), base.q_bar, params)
    return u_dev - u_presc, base


def _marginal_quit_gain(tau: float, params: ModelParams, points: int) -> float:
    """Gain to the scientist exactly at q = tau from leaving the lottery."""
    strat = ThresholdStrategy(float(tau))
    _, q_bar_d, a_d, _, _ = solve_deviated(strat, params, tau, 0.0, points,
                                           p_prescribed=1.0)
    u_dev = payoff_from_parts(tau, 0.0, a_d[0], q_bar_d[0], params)
    base = solve(strat, params, points)
    u_presc = payoff_from_parts(tau, 1.0, acceptance_prob(tau, base), base.q_bar, params)
    return float(u_dev - u_presc)


def nash_threshold_fixed_sigma(params: ModelParams, sigma: float,
                               points: int = DEFAULT_POINTS,
                               grid_points: int = TAU_GRID_POINTS) -> EquilibriumResult:
    """Scientist-side Nash threshold at fixed journal noise.

    Scans the strategy grid; a candidate verifies when no grid quality
    gains more than GAP_TOL by deviating. The largest verified candidate
    is then refined inside its bracketing cell by bisecting the marginal
    scientist's indifference (the refined point must itself verify,
    otherwise the grid value stands). With no verified candidate, the
    one minimizing the worst deviation gain is returned, converged=False.
    """
    params = replace(params, sigma=sigma)
    grid = tau_grid(grid_points)
    worst = np.empty(grid.size)
    q_bars = np.empty(grid.size)
    for i, tau in enumerate(grid):
        gaps, base = _deviation_gaps(tau, params, grid, points)
        worst[i] = max(float(gaps.max()), 0.0)
        q_bars[i] = base.q_bar
    verified = worst <= GAP_TOL
    diagnostics = {"grid": grid, "worst_gap": worst,
                   "verified": grid[verified], "grid_q_bar": q_bars}
    if not verified.any():
        i = int(np.argmin(worst))
        return EquilibriumResult(float(grid[i]), sigma, float(q_bars[i]),
                                 "NashFixedSigma", False, float(worst[i]),
                                 grid.size, diagnostics)
    i = int(np.flatnonzero(verified)[-1])
    tau_star, q_star, gap_star = float(grid[i]), float(q_bars[i]), float(worst[i])
    if i + 1 < grid.size and i > 0:
        # The true indifference threshold usually falls between grid
        # candidates; bisect the marginal quit gain across the cell and
        # keep the refined point only when it fully verifies.
        lo, hi = grid[i], grid[i + 1]
        if _marginal_quit_gain(hi, params, points) > GAP_TOL:
            for _ in range(40):
                mid = 0.5 * (lo + hi)
                if _marginal_quit_gain(mid, params, points) > 0.0:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-9:
                    break
            gaps, base = _deviation_gaps(float(lo), params, grid, points)
            gap_ref = max(float(gaps.max()), 0.0)
            if gap_ref <= GAP_TOL:
                tau_star, q_star, gap_star = float(lo), float(base.q_bar), gap_ref
    return EquilibriumResult(tau_star, sigma, q_star, "NashFixedSigma", True,
                             gap_star, grid.size, diagnostics)


def journal_best_response(strategy: ThresholdStrategy, params: ModelParams,
                          sigma_lo: float = 0.01, sigma_hi: float = 1.0,
                          scan_points: int = 32, xtol: float = 1e-4,
                          points: int = DEFAULT_POINTS) -> float:
    """Noise level maximizing the journal payoff on [sigma_lo, sigma_hi]."""
    sigmas = np.linspace(sigma_lo, sigma_hi, scan_points)
    vals = np.array([journal_payoff(float(s), strategy, params, points) for s in sigmas])
    if vals.max() - vals.min() < 1e-9:
        log.warning("journal objective is flat over [%g, %g]", sigma_lo, sigma_hi)
    i = int(np.argmax(vals))
    lo = sigmas[max(i - 1, 0)]
    hi = sigmas[min(i + 1, sigmas.size - 1)]
    sigma_star, val = _golden_max(
        lambda s: journal_payoff(float(s), strategy, params, points), float(lo), float(hi),
        xtol=xtol)
    if val < vals[i]:
        sigma_star = float(sigmas[i])
    return float(sigma_star)


def joint_equilibrium(params: ModelParams, points: int = DEFAULT_POINTS,
                      grid_points: int = TAU_GRID_POINTS, max_iter: int = 100,
                      sigma_tol: float = 1e-4,
                      scientists_first: bool = True) -> EquilibriumResult:
    """Alternating best response between scientists and the journal.

    Stops when the noise moves less than sigma_tol and the threshold is
    unchanged; non-convergence (e.g. a limit cycle) is reported with the
    full trajectory, never averaged away.
    """
    sigma = params.sigma
    tau_prev = None
    trajectory = []
    nash = None
    for it in range(1, max_iter + 1):
        if scientists_first:
            nash = nash_threshold_fixed_sigma(params, sigma, points, grid_points)
            tau = nash.tau_star
            sigma_new = journal_best_response(ThresholdStrategy(tau), params, points=points)
        else:
            start_tau = tau_prev if tau_prev is not None else 0.0
            sigma_new = journal_best_response(ThresholdStrategy(start_tau), params, points=points)
            nash = nash_threshold_fixed_sigma(params, sigma_new, points, grid_points)
            tau = nash.tau_star
        trajectory.append((tau, sigma_new))
        if tau_prev is not None and tau == tau_prev and abs(sigma_new - sigma) < sigma_tol:
            sol = solve(ThresholdStrategy(tau), replace(params, sigma=sigma_new), points)
            return EquilibriumResult(
                tau, sigma_new, sol.q_bar, "JointFixedPoint",
                nash.converged, nash.deviation_gap, it,
                diagnostics={"trajectory": trajectory})
        tau_prev, sigma = tau, sigma_new
    sol = solve(ThresholdStrategy(tau_prev), replace(params, sigma=sigma), points)
    return EquilibriumResult(
        tau_prev, sigma, sol.q_bar, "JointFixedPoint", False,
        nash.deviation_gap if nash else float("nan"), max_iter,
        diagnostics={"trajectory": trajectory})
