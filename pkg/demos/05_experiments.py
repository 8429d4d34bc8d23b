"""Run experiment pipelines programmatically and reproduce them byte for byte.

Equivalent to the CLI:
    review-lottery ai-scenario --out demo_out/first
    review-lottery ai-scenario --config demo_out/first/ai_scenario_manifest.txt \
        --out demo_out/again
"""

import tempfile
from pathlib import Path

from review_lottery.experiments import parse_config_file, resolve_config, run_experiment

root = Path(tempfile.mkdtemp(prefix="review_lottery_demo_"))
first = root / "first"

cfg = resolve_config("ai-scenario", set_pairs={"output.dir": str(first)})
outcome = run_experiment(cfg)
print("wrote:")
for p in outcome.paths:
    print("  ", p)

print("\nai_scenario.csv:")
print((first / "ai_scenario.csv").read_text())

again = root / "again"
manifest = parse_config_file(first / "ai_scenario_manifest.txt")
run_experiment(resolve_config("ai-scenario", file_pairs=manifest,
                              flag_pairs={"output.dir": str(again)}))
same = (first / "ai_scenario.csv").read_bytes() == (again / "ai_scenario.csv").read_bytes()
print(f"re-run from manifest byte-identical: {same}")

small = root / "validate"
cfg = resolve_config("mc-validate", set_pairs={
    "output.dir": str(small), "sweep.sigma": "0.3", "sweep.tau": "0.0,1.0",
    "mc.m": "500"})
run_experiment(cfg)
print("\nmc_validate.csv (small grid):")
print((small / "mc_validate.csv").read_text())
