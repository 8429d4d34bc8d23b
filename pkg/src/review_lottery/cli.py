"""Command line entry point: review-lottery <experiment> [options].

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence
present in the output (rows are flagged, never dropped).
"""

from __future__ import annotations

import argparse
import sys

from review_lottery.core import ParameterError
from review_lottery.experiments import (
    EXPERIMENTS,
    ConfigError,
    parse_config_file,
    resolve_config,
    run_experiment,
)

_EPILOG = """\
Configuration precedence (later wins):
  1. built-in defaults for the chosen experiment
  2. --config FILE   (flat key=value lines, dotted keys, e.g. params.sigma=0.3)
  3. --set key=value (repeatable)
  4. explicit flags: --out, --seed, --mc, --threads

Every run writes <experiment>_manifest.txt with the fully resolved
configuration; re-running from that manifest reproduces the CSV outputs
byte for byte.
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="review-lottery",
        description="Pre-review lottery experiments: continuum solver, "
                    "Monte Carlo validation, equilibrium sweeps.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, epilog=_EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--set", dest="sets", action="append", default=[],
                       metavar="KEY=VALUE", help="override one config key")
        p.add_argument("--out", help="output directory")
        p.add_argument("--mc", action="store_true", default=None,
                       help="enable Monte Carlo columns")
        p.add_argument("--seed", type=int, help="Monte Carlo base seed")
        p.add_argument("--threads", type=int, help="worker processes for sweep points")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_pairs = parse_config_file(args.config) if args.config else {}
        set_pairs = {}
        for item in args.sets:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            set_pairs[key.strip()] = value.strip()
        flag_pairs = {}
        if args.out is not None:
            flag_pairs["output.dir"] = args.out
        if args.seed is not None:
            flag_pairs["mc.base_seed"] = str(args.seed)
        if args.mc:
            flag_pairs["mc.enabled"] = "true"
        if args.threads is not None:
            flag_pairs["threads"] = str(args.threads)
        cfg = resolve_config(args.experiment, file_pairs, set_pairs, flag_pairs)
    except (ConfigError, ParameterError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    outcome = run_experiment(cfg)
    for path in outcome.paths:
        print(path)
    if outcome.nonconverged:
        print("warning: non-converged rows present (flagged in output)",
              file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
