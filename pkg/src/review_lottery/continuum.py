"""Continuous approximation of the venue: cutoff, acceptance, quality, payoffs.

Everything here is deterministic quadrature over the quality density. The
acceptance cutoff t makes the unconditional survive-and-accept mass equal
alpha (slots are a fixed fraction of original submissions, not of lottery
survivors). A single scientist's deviation is represented as an atom of
mass 1/N whose survival probability differs from the population rule; the
cutoff, noise, and mean accepted quality are re-solved under that atom.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from review_lottery.core import (
    ModelParams,
    ParameterError,
    ResolutionError,
    ThresholdStrategy,
    _tn_sf,
    effective_noise,
)
from review_lottery.quadrature import DEFAULT_POINTS, piecewise_rule

# Half-width of the quadrature window around the cutoff, in units of
# sigma_eff. Beyond 10 sigma the score-survival sigmoid is flat to ~1e-23.
_WINDOW = 10.0

_BRACKET_TOL = 1e-10
_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class ContinuumSolution:
    """Solved venue state for one (strategy, params) point."""

    cutoff_t: float
    w_bar: float
    sigma_eff: float
    q_bar: float
    accept_all_survivors: bool = False


def _pdf_mass(dist, a: float, b: float, points: int) -> float:
    """Quality mass on [a, b] by Simpson (same rule the solver uses)."""
    if b <= a:
        return 0.0
    nodes, weights = piecewise_rule(np.array([[a, b]]), points)
    return float(np.sum(weights * dist.pdf(nodes)))


def aggregate_survival(strategy: ThresholdStrategy, params: ModelParams,
                       points: int = DEFAULT_POINTS) -> float:
    """w_bar = integral of (1 - L*p(q)) f(q) dq over [0, 1]."""
    dist = params.quality_dist
    total = _pdf_mass(dist, 0.0, 1.0, points)
    participating = _pdf_mass(dist, 0.0, strategy.tau, points)
    return total - params.lottery_rate * participating


def _accept_integrals(t, tau: float, sigma_eff: float, params: ModelParams,
                      points: int, want_q: bool = False):
    """Survive-and-accept mass (and quality-weighted mass) at cutoff(s) t.

    t may be a vector; each row gets its own breakpoints {0, tau,
    t - W*sigma, t + W*sigma, 1} so the sigmoid window and the
    participation jump always coincide with piece boundaries.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = t.shape[0]
    w = _WINDOW * sigma_eff
    cols = np.column_stack([
        np.zeros(n),
        np.full(n, tau),
        np.clip(t - w, 0.0, 1.0),
        np.clip(t + w, 0.0, 1.0),
        np.ones(n),
    ])
    breaks = np.sort(cols, axis=1)
    nodes, weights = piecewise_rule(breaks, points)        # (n, 4, m)
    # Participation is constant on each piece; a piece lies inside the
    # participating region iff its right edge does not exceed tau.
    surv = np.where(breaks[:, 1:] <= tau, 1.0 - params.lottery_rate, 1.0)
    fw = params.quality_dist.pdf(nodes) * surv[:, :, None]
    sf = _tn_sf(t[:, None, None], nodes, sigma_eff)
    mass = np.sum(weights * fw * sf, axis=(1, 2))
    if not want_q:
        return mass, None
    qmass = np.sum(weights * fw * sf * nodes, axis=(1, 2))
    return mass, qmass


def _bisect_cutoff(tau: float, sigma_eff: float, params: ModelParams, points: int,
                   atom_q=None, atom_mass: float = 0.0):
    """Vector bisection for G(t) = accept-mass(t) - alpha = 0 on [0, 1].

    atom_q (vector) adds atom_mass * S(t | atom_q) to the mass, one atom
    per row. G is monotone decreasing in t, so plain bracketing suffices.
    """
    n = 1 if atom_q is None else np.atleast_1d(atom_q).shape[0]
    lo = np.zeros(n)
    hi = np.ones(n)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        g, _ = _accept_integrals(mid, tau, sigma_eff, params, points)
        if atom_q is not None:
            g = g + atom_mass * _tn_sf(mid, atom_q, sigma_eff)
        g -= params.alpha
        lo = np.where(g > 0.0, mid, lo)
        hi = np.where(g > 0.0, hi, mid)
        if np.all((hi - lo < _BRACKET_TOL) | (np.abs(g) <= _RESIDUAL_TOL)):
            break
    # Rows that stopped on the residual keep the evaluated midpoint; the
    # updated bracket midpoint would discard that exact hit.
    return np.where(np.abs(g) <= _RESIDUAL_TOL, mid, 0.5 * (lo + hi))


def solve(strategy: ThresholdStrategy, params: ModelParams,
          points: int = DEFAULT_POINTS) -> ContinuumSolution:
    """Solve the undeviated venue: w_bar, sigma_eff, cutoff, q_bar."""
    tau = strategy.tau
    w_bar = aggregate_survival(strategy, params, points)
    sigma_eff = effective_noise(params.sigma, min(w_bar, 1.0), params.beta)
    if w_bar < params.alpha:
        # Not enough survivors to fill the slots: accept everything that
        # reaches review and report the regime.
        mass, qmass = _accept_integrals(0.0, tau, sigma_eff, params, points, want_q=True)
        if mass[0] < 1e-12:
            raise ResolutionError("surviving mass underflows the quadrature")
        return ContinuumSolution(0.0, w_bar, sigma_eff, float(qmass[0] / mass[0]), True)
    t = _bisect_cutoff(tau, sigma_eff, params, points)
    mass, qmass = _accept_integrals(t, tau, sigma_eff, params, points, want_q=True)
    if mass[0] < 1e-12:
        raise ResolutionError("accepted mass underflows the quadrature; alpha too small for the grid")
    return ContinuumSolution(float(t[0]), w_bar, sigma_eff, float(qmass[0] / mass[0]), False)


def acceptance_cutoff(strategy: ThresholdStrategy, params: ModelParams,
                      points: int = DEFAULT_POINTS) -> ContinuumSolution:
    """Acceptance cutoff t such that the survive-and-accept mass is alpha."""
    return solve(strategy, params, points)


def acceptance_prob(q, solution: ContinuumSolution):
    """A(q): acceptance probability conditional on surviving the lottery."""
    q_arr = np.asarray(q, dtype=float)
    if solution.accept_all_survivors:
        out = np.ones_like(q_arr)
        return out if out.ndim else 1.0
    out = _tn_sf(solution.cutoff_t, q_arr, solution.sigma_eff)
    return out if out.ndim else float(out)


def accepted_mean_quality(strategy: ThresholdStrategy, params: ModelParams,
                          points: int = DEFAULT_POINTS) -> float:
    """Mean true quality of accepted papers."""
    return solve(strategy, params, points).q_bar


def solve_deviated(strategy: ThresholdStrategy, params: ModelParams, q_atoms, p_dev,
                   points: int = DEFAULT_POINTS, resolve_cutoff: bool = True,
                   p_prescribed=None):
    """Re-solve the venue with one scientist (mass 1/N) deviating.

    q_atoms: quality (scalar or vector) of the deviating scientist;
    p_dev: that scientist's participation level, scalar or vector matching
    q_atoms. Every atom is solved independently (one deviator at a time).
    p_prescribed overrides the participation the strategy assigns to the
    atom (the population rule is unchanged).

    Returns arrays (cutoff_t, q_bar, accept_prob_at_atom) plus scalars
    (w_bar_dev per atom, sigma_eff per atom). With resolve_cutoff=False
    the undeviated cutoff is kept and only noise, composition, and q_bar
    are recomputed (sensitivity variant).
    """
    tau = strategy.tau
    q_atoms = np.atleast_1d(np.asarray(q_atoms, dtype=float))
    p_dev = np.broadcast_to(np.asarray(p_dev, dtype=float), q_atoms.shape)
    if p_prescribed is None:
        p_presc = strategy.participation(q_atoms)
    else:
        p_presc = np.broadcast_to(np.asarray(p_prescribed, dtype=float), q_atoms.shape)
    lrate = params.lottery_rate
    n = params.n_scientists

    base_w = aggregate_survival(strategy, params, points)
    extra = lrate * (p_presc - p_dev) / n           # shift of w_bar per atom
    w_dev = base_w + extra
    cutoff = np.empty_like(q_atoms)
    q_bar = np.empty_like(q_atoms)
    a_atom = np.empty_like(q_atoms)
    sigma_eff = np.empty_like(q_atoms)

    undev = None
    if not resolve_cutoff:
        undev = solve(strategy, params, points)

    # Atoms sharing an extra-mass value share sigma_eff and can be solved
    # as one vectorized bisection.
    for em in np.unique(extra):
        idx = np.flatnonzero(extra == em)
        qv = q_atoms[idx]
        sig = effective_noise(params.sigma, min(float(base_w + em), 1.0), params.beta)
        sigma_eff[idx] = sig
        if base_w + em < params.alpha:
            mass, qmass = _accept_integrals(0.0, tau, sig, params, points, want_q=True)
            atom_sf = np.ones_like(qv)
            den = mass[0] + em * atom_sf
            cutoff[idx] = 0.0
            q_bar[idx] = (qmass[0] + em * qv * atom_sf) / den
            a_atom[idx] = 1.0
            continue
        if resolve_cutoff:
            t = _bisect_cutoff(tau, sig, params, points, atom_q=qv, atom_mass=em)
        else:
            t = np.full(qv.shape, undev.cutoff_t)
        mass, qmass = _accept_integrals(t, tau, sig, params, points, want_q=True)
        atom_sf = _tn_sf(t, qv, sig)
        den = mass + em * atom_sf
        cutoff[idx] = t
        q_bar[idx] = (qmass + em * qv * atom_sf) / den
        a_atom[idx] = atom_sf
    return cutoff, q_bar, a_atom, w_dev, sigma_eff


def payoff_from_parts(q, p_dev, accept_prob, q_bar, params: ModelParams):
    """Utility b*(1-L*p)*A*q_bar + s*q_bar - c*q*(1 - (1-L*p)*A)."""
    surv = 1.0 - params.lottery_rate * np.asarray(p_dev, dtype=float)
    kept = surv * np.asarray(accept_prob, dtype=float)
    q = np.asarray(q, dtype=float)
    q_bar = np.asarray(q_bar, dtype=float)
    return params.b * kept * q_bar + params.s * q_bar - params.c * q * (1.0 - kept)


def scientist_payoff(q: float, p_dev: float, strategy: ThresholdStrategy,
                     params: ModelParams, points: int = DEFAULT_POINTS,
                     resolve_cutoff: bool = True) -> float:
    """Expected utility of one scientist deviating to participation p_dev.

    The acceptance probability and mean accepted quality are those of the
    venue re-solved with this scientist as a 1/N atom, so a unilateral
    deviation has a finite effect on the aggregates.
    """
    if not 0.0 <= q <= 1.0:
        raise ParameterError("quality q must lie in [0, 1]")
    if not 0.0 <= p_dev <= 1.0:
        raise ParameterError("participation must lie in [0, 1]")
    _, q_bar, a_atom, _, _ = solve_deviated(
        strategy, params, q, p_dev, points, resolve_cutoff=resolve_cutoff)
    return float(payoff_from_parts(q, p_dev, a_atom[0], q_bar[0], params))


def journal_payoff(sigma: float, strategy: ThresholdStrategy, params: ModelParams,
                   points: int = DEFAULT_POINTS) -> float:
    """Journal objective q_bar(sigma) - w_bar * (1 + sigma)**(-k)."""
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    sol = solve(strategy, replace(params, sigma=sigma), points)
    return sol.q_bar - sol.w_bar * (1.0 + sigma) ** (-params.k)
