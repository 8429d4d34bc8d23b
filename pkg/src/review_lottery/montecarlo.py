"""Finite-N stochastic simulation of the venue.

Each replication draws N qualities, runs the lottery, scores the
survivors with noise scaled by the realized survivor fraction, and
accepts the top round(alpha*N) survivors by score. Replications carry
pre-assigned child seeds (a splittable counter scheme), so results are
independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from review_lottery.core import (
    ModelParams,
    ParameterError,
    ThresholdStrategy,
    _tn_ppf,
    _tn_sf,
    round_half_away,
)
from review_lottery.equilibrium import nash_threshold_fixed_sigma, tau_grid
from review_lottery.quadrature import DEFAULT_POINTS


@dataclass(frozen=True)
class RepRecord:
    """One replication: accepted qualities, their mean, survivor count."""

    accepted_qualities: np.ndarray
    q_bar: float                      # nan when no survivors
    survivor_count: int


@dataclass(frozen=True)
class MCResult:
    """Aggregate over M replications of the venue simulation."""

    q_bar_mean: float
    q_bar_se: float
    replications: int
    seed: int
    accepted_per_rep: np.ndarray
    zero_survivor_reps: int = 0


def replication_seed(base_seed: int, index: int) -> np.random.SeedSequence:
    """Child seed for one replication; splittable and order-independent."""
    return np.random.SeedSequence(entropy=base_seed, spawn_key=(index,))


def _rank_accept(scores: np.ndarray, alive: np.ndarray, slots: int,
                 perm: np.ndarray) -> np.ndarray:
    """Indices of accepted papers: top `slots` survivors by score.

    Ties are broken by the seeded permutation applied before the stable
    sort (bit-identical scores can occur in float arithmetic).
    """
    masked = np.where(alive, scores, -1.0)
    order = perm[np.argsort(-masked[perm], kind="stable")]
    k = min(slots, int(alive.sum()))
    return order[:k]


def simulate_once(strategy: ThresholdStrategy, params: ModelParams, seed) -> RepRecord:
    """One venue replication; fully deterministic given the seed."""
    rng = np.random.default_rng(seed)
    n = params.n_scientists
    lrate = params.lottery_rate
    q = params.quality_dist.quantile(rng.uniform(size=n))
    participates = q <= strategy.tau
    u_lottery = rng.uniform(size=n)
    alive = ~participates | (u_lottery >= lrate)
    u_scores = rng.uniform(size=n)
    perm = rng.permutation(n)
    survivors = int(alive.sum())
    if survivors == 0:
        return RepRecord(np.empty(0), float("nan"), 0)
    w_emp = survivors / n
    sigma_eff = params.sigma * w_emp**params.beta
    scores = _tn_ppf(u_scores, q, sigma_eff)
    slots = round_half_away(params.alpha * n)
    accepted = _rank_accept(scores, alive, slots, perm)
    acc_q = q[accepted]
    return RepRecord(acc_q, float(acc_q.mean()), survivors)


def simulate(strategy: ThresholdStrategy, params: ModelParams, m: int,
             base_seed: int) -> MCResult:
    """M independent replications with per-replication child seeds.

    Zero-survivor replications are counted and excluded from the mean.
    """
    if m < 1:
        raise ParameterError("replication count must be at least 1")
    q_bars = np.empty(m)
    accepted = np.empty(m, dtype=int)
    for i in range(m):
        rec = simulate_once(strategy, params, replication_seed(base_seed, i))
        q_bars[i] = rec.q_bar
        accepted[i] = rec.accepted_qualities.shape[0]
    valid = ~np.isnan(q_bars)
    n_valid = int(valid.sum())
    mean = float(q_bars[valid].mean()) if n_valid else float("nan")
    se = float(q_bars[valid].std(ddof=1) / np.sqrt(n_valid)) if n_valid > 1 else float("nan")
    return MCResult(mean, se, m, base_seed, accepted, m - n_valid)


def _rank_qualities(scores, alive, q, perm):
    """Per-row quality prefix sums in descending score order among survivors.

    Returns (ordered_q, ordered_alive) where dead papers sort last. The
    seeded permutation breaks score ties as in simulate_once.
    """
    masked = np.where(alive, scores, -1.0)
    sp = np.take_along_axis(masked, perm, axis=1)
    order = np.take_along_axis(perm, np.argsort(-sp, axis=1, kind="stable"), axis=1)
    return (np.take_along_axis(q, order, axis=1),
            np.take_along_axis(alive, order, axis=1),
            np.take_along_axis(masked, order, axis=1))


def _paired_payoff_diff(q_focal: float, strategy: ThresholdStrategy,
                        params: ModelParams, m: int, seed_seq):
    """Per-replication U(p=1) - U(p=0) with the focal scientist's own
    randomness integrated out (Rao-Blackwellized common random numbers).

    Conditional on the other N-1 scientists' draws, the focal scientist's
    lottery fate and review score have known laws, so the paired
    difference collapses to

        D = L * [ s * (q_bar_dead - q_bar_alive)
                  - A_hat * (b * M_acc + c * q_focal) ]

    where A_hat is the focal acceptance probability given the others'
    scores, M_acc the mean accepted quality conditional on the focal
    being accepted, q_bar_alive/q_bar_dead the mean accepted quality with
    the focal in/out of the review pool. Same estimand as the raw paired
    simulation, far lower variance.
    """
    rng = np.random.default_rng(seed_seq)
    n = params.n_scientists
    lrate = params.lottery_rate
    slots = round_half_away(params.alpha * n)
    no = n - 1
    q = params.quality_dist.quantile(rng.uniform(size=(m, no)))
    u_lott = rng.uniform(size=(m, no))
    u_scores = rng.uniform(size=(m, no))
    perm = rng.permuted(np.tile(np.arange(no), (m, 1)), axis=1)
    participates = q <= strategy.tau
    alive = ~participates | (u_lott >= lrate)
    n_o = alive.sum(axis=1)

    # focal-alive pool: the others score under survivor count n_o + 1
    sig_a = params.sigma * ((n_o + 1) / n) ** params.beta
    ord_q, ord_alive, ord_scores = _rank_qualities(
        _tn_ppf(u_scores, q, sig_a[:, None]), alive, q, perm)
    csum = np.cumsum(np.where(ord_alive, ord_q, 0.0), axis=1)
    rows = np.arange(m)

    # the focal is accepted iff its score beats the slots-th best other
    # survivor; when the slots are not filled it is accepted for sure
    filled = n_o + 1 > slots
    t_km1 = csum[:, slots - 2] if slots >= 2 else np.zeros(m)
    t_k = csum[:, min(slots, no) - 1] if no >= 1 else np.zeros(m)
    a_hat = np.ones(m)
    if no >= slots:
        bk = np.clip(ord_scores[:, slots - 1], 0.0, 1.0)
        sf = np.empty(m)
        for sig in np.unique(sig_a):
            idx = sig_a == sig
            sf[idx] = _tn_sf(bk[idx], q_focal, float(sig))
        a_hat = np.where(filled, sf, 1.0)
    m_acc = np.where(filled,
                     (t_km1 + q_focal) / slots,
                     (csum[:, -1] + q_focal) / (n_o + 1))
    qbar_alive = np.where(filled,
                          a_hat * m_acc + (1.0 - a_hat) * t_k / slots,
                          m_acc)

    # focal-dead pool: survivor count n_o, same score uniforms
    sig_d = params.sigma * (n_o / n) ** params.beta
    ord_q_d, ord_alive_d, _ = _rank_qualities(
        _tn_ppf(u_scores, q, sig_d[:, None]), alive, q, perm)
    csum_d = np.cumsum(np.where(ord_alive_d, ord_q_d, 0.0), axis=1)
    n_acc_d = np.minimum(slots, n_o)
    valid = n_o > 0
    qbar_dead = np.where(valid, csum_d[rows, np.maximum(n_acc_d, 1) - 1]
                         / np.maximum(n_acc_d, 1), np.nan)

    d = lrate * (params.s * (qbar_dead - qbar_alive)
                 - a_hat * (params.b * m_acc + params.c * q_focal))
    return d[valid]


def _independent_payoff_diff(q_focal: float, strategy: ThresholdStrategy,
                             params: ModelParams, m: int, seed_seq):
    """Raw U(p=1) - U(p=0) with independent venue draws per branch."""
    rng = np.random.default_rng(seed_seq)
    n = params.n_scientists
    lrate = params.lottery_rate
    slots = round_half_away(params.alpha * n)
    cols = np.arange(slots)

    def run(p_focal: int, gen):
        q = params.quality_dist.quantile(gen.uniform(size=(m, n)))
        u_lott = gen.uniform(size=(m, n))
        u_scores = gen.uniform(size=(m, n))
        perm = gen.permuted(np.tile(np.arange(n), (m, 1)), axis=1)
        q[:, n - 1] = q_focal
        participates = q <= strategy.tau
        participates[:, n - 1] = bool(p_focal)
        alive = ~participates | (u_lott >= lrate)
        n_alive = alive.sum(axis=1)
        sigma_eff = params.sigma * (n_alive / n) ** params.beta
        scores = _tn_ppf(u_scores, q, sigma_eff[:, None])
        masked = np.where(alive, scores, -1.0)
        sp = np.take_along_axis(masked, perm, axis=1)
        order = np.take_along_axis(perm, np.argsort(-sp, axis=1, kind="stable"),
                                   axis=1)
        top = order[:, :slots]
        taken = cols[None, :] < np.minimum(slots, n_alive)[:, None]
        acc_q = np.where(taken, np.take_along_axis(q, top, axis=1), 0.0)
        n_acc = taken.sum(axis=1)
        with np.errstate(invalid="ignore"):
            q_bar = np.where(n_acc > 0, acc_q.sum(axis=1) / np.maximum(n_acc, 1),
                             np.nan)
        x = ((top == n - 1) & taken).any(axis=1).astype(float)
        return params.b * x * q_bar + params.s * q_bar \
            - params.c * q_focal * (1.0 - x)

    u1 = run(1, rng)
    u0 = run(0, np.random.default_rng(rng.spawn(1)[0]))
    d = u1 - u0
    return d[~np.isnan(d)]


def deviation_payoff_gap(q_focal: float, strategy: ThresholdStrategy,
                         params: ModelParams, m: int, base_seed: int,
                         paired: bool = True):
    """Mean and standard error of U(p=1) - U(p=0) over m replications.

    paired=True shares all venue randomness between the two participation
    levels (common random numbers with the focal draws integrated out);
    paired=False runs the two branches on independent streams.
    """
    seq = np.random.SeedSequence(entropy=base_seed)
    if paired:
        d = _paired_payoff_diff(q_focal, strategy, params, m, seq)
    else:
        d = _independent_payoff_diff(q_focal, strategy, params, m, seq)
    return float(d.mean()), float(d.std(ddof=1) / np.sqrt(d.size))


@dataclass(frozen=True)
class MCEquilibrium:
    """Empirical equilibrium threshold from iterated best response."""

    tau_hat: float
    converged: bool
    visited: tuple
    estimates: dict = field(default_factory=dict, compare=False)


def mc_equilibrium_threshold(params: ModelParams, sigma_fixed: float, m: int,
                             base_seed: int, grid_points: int = 50,
                             max_iter: int = 20, z_gate: float = 1.0,
                             points: int = DEFAULT_POINTS) -> MCEquilibrium:
    """Empirical Nash threshold by simulated best-response iteration.

    Starts from the continuum equilibrium and, at each step, walks the
    threshold along the strategy grid toward the quality at which a focal
    scientist is empirically indifferent between entering and staying
    out. Moves require the payoff difference to clear z_gate standard
    errors, so the walk stops at statistical indifference instead of
    chasing estimator noise.
    """
    params = replace(params, sigma=sigma_fixed)
    grid = tau_grid(grid_points)
    start = nash_threshold_fixed_sigma(params, sigma_fixed, points=points).tau_star
    idx = int(np.argmin(np.abs(grid - start)))
    estimates = {}
    visited = [grid[idx]]

    for it in range(max_iter):
        # One seed per iteration, shared across candidate qualities, so
        # neighbouring estimates ride on the same venue draws.
        iter_seed = int(np.random.SeedSequence(
            entropy=base_seed, spawn_key=(it,)).generate_state(1)[0])

        def estimate(j):
            key = (it, j)
            if key not in estimates:
                strat = ThresholdStrategy(grid[idx])
                estimates[key] = deviation_payoff_gap(
                    grid[j], strat, params, m, iter_seed)
            return estimates[key]

        def prefers_in(j):
            gap, se = estimate(j)
            return gap - z_gate * se > 0.0

        def prefers_out(j):
            gap, se = estimate(j)
            return gap + z_gate * se < 0.0

        j = idx
        while j + 1 < grid.size and prefers_in(j + 1):
            j += 1
        if j == idx:
            while j > 0 and prefers_out(j):
                j -= 1
            if j == 0 and prefers_out(j):
                pass  # nobody wants in even at the bottom of the grid
        moved = j != idx
        idx = j
        visited.append(grid[idx])
        if not moved:
            return MCEquilibrium(grid[idx], True, tuple(visited), estimates)
    return MCEquilibrium(grid[idx], False, tuple(visited), estimates)
