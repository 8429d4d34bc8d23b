"""Voluntary pre-review lottery: continuum solver, finite-N simulator, equilibrium search."""

from review_lottery.core import (
    ModelParams,
    ParameterError,
    QualityDistribution,
    ResolutionError,
    ScoreModel,
    ThresholdStrategy,
    effective_noise,
    sample_score,
    score_survival,
    survival_prob,
)
from review_lottery.continuum import (
    ContinuumSolution,
    acceptance_cutoff,
    acceptance_prob,
    accepted_mean_quality,
    aggregate_survival,
    journal_payoff,
    scientist_payoff,
)
from review_lottery.montecarlo import (
    MCResult,
    mc_equilibrium_threshold,
    simulate,
    simulate_once,
)
from review_lottery.equilibrium import (
    EquilibriumResult,
    joint_equilibrium,
    journal_best_response,
    nash_threshold_fixed_sigma,
    planner_optimum,
    scientist_best_response,
    tau_grid,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "ParameterError",
    "QualityDistribution",
    "ResolutionError",
    "ScoreModel",
    "ThresholdStrategy",
    "effective_noise",
    "sample_score",
    "score_survival",
    "survival_prob",
    "ContinuumSolution",
    "acceptance_cutoff",
    "acceptance_prob",
    "accepted_mean_quality",
    "aggregate_survival",
    "journal_payoff",
    "scientist_payoff",
    "MCResult",
    "mc_equilibrium_threshold",
    "simulate",
    "simulate_once",
    "EquilibriumResult",
    "joint_equilibrium",
    "journal_best_response",
    "nash_threshold_fixed_sigma",
    "planner_optimum",
    "scientist_best_response",
    "tau_grid",
    "__version__",
]
