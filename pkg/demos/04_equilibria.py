"""Planner optimum, voluntary Nash thresholds, and the journal's response.

Self-interested scientists under-participate relative to the social
planner; epistemic concern (small r = b/(b+s)) closes the gap. The
journal's best-response noise and the joint fixed point complete the
picture.
"""

from review_lottery import (
    ModelParams,
    ThresholdStrategy,
    joint_equilibrium,
    journal_best_response,
    nash_threshold_fixed_sigma,
    planner_optimum,
)
from review_lottery.continuum import solve

base = ModelParams()     # sigma=0.3, beta=8, L=0.1, alpha=0.1
q_none = solve(ThresholdStrategy(0.0), base).q_bar
planner = planner_optimum(base)
print(f"no lottery:      q_bar = {q_none:.4f}")
print(f"social planner:  tau* = {planner.tau_star:.3f}  q_bar = {planner.q_bar:.4f}")

print("\n== voluntary participation by private-epistemic ratio ==")
print("  r      tau*    q_bar   gain fraction")
for r in (0.10, 0.33, 0.50, 0.67, 0.90):
    pr = ModelParams(b=1.0, s=(1 - r) / r, c=0.1)
    nash = nash_threshold_fixed_sigma(pr, 0.3)
    frac = (nash.q_bar - q_none) / (planner.q_bar - q_none)
    print(f"  {r:.2f}   {nash.tau_star:.3f}   {nash.q_bar:.4f}  {frac:6.1%}")

print("\n== journal side ==")
strat = ThresholdStrategy(0.47)
sigma_star = journal_best_response(strat, base)
print(f"  best-response noise at tau=0.47, k=2: sigma* = {sigma_star:.4f}")
joint = joint_equilibrium(base)
print(f"  joint fixed point: tau* = {joint.tau_star:.3f}, sigma* = {joint.sigma_star:.3f}, "
      f"converged = {joint.converged} in {joint.iterations} rounds")
