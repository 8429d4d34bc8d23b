"""Solve the continuous venue: cutoff, acceptance, mean accepted quality.

The acceptance cutoff makes the survive-and-accept mass equal alpha
(slots are a fixed fraction of the original submissions). More baseline
noise drags accepted quality down; a participation threshold tau trades
randomly lost papers against cleaner review of the survivors.
"""

from dataclasses import replace

import numpy as np

from review_lottery import ModelParams, ThresholdStrategy, acceptance_prob
from review_lottery.continuum import solve

params = ModelParams()   # sigma=0.3, beta=8, alpha=0.1, L=0.1, uniform qualities

print("== no lottery, rising noise ==")
for sigma in (0.05, 0.15, 0.3, 0.45, 0.6):
    sol = solve(ThresholdStrategy(0.0), replace(params, sigma=sigma))
    print(f"  sigma={sigma:4.2f}: cutoff t={sol.cutoff_t:.4f}  q_bar={sol.q_bar:.4f}")

print("\n== threshold participation at sigma=0.3 ==")
for tau in (0.0, 0.4, 0.8, 1.0):
    sol = solve(ThresholdStrategy(tau), params)
    print(f"  tau={tau:3.1f}: w_bar={sol.w_bar:.3f}  sigma_eff={sol.sigma_eff:.4f}  "
          f"q_bar={sol.q_bar:.4f}")

print("\n== acceptance probability profile (tau=0.4) ==")
sol = solve(ThresholdStrategy(0.4), params)
for q in np.linspace(0.1, 1.0, 10):
    bar = "#" * int(50 * acceptance_prob(q, sol))
    print(f"  A({q:.1f}) = {acceptance_prob(q, sol):6.4f} {bar}")

print("\n== degenerate regime: not enough survivors ==")
harsh = replace(params, lottery_rate=0.95)
sol = solve(ThresholdStrategy(1.0), harsh)
print(f"  L=0.95, tau=1: accept_all_survivors={sol.accept_all_survivors}, "
      f"q_bar={sol.q_bar:.4f} (uniform thinning keeps the population mean)")
