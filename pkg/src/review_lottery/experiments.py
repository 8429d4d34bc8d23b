"""Named, reproducible experiment pipelines with flat-file outputs.

Every experiment resolves its configuration (defaults, then config file,
then --set pairs, then explicit flags), writes a manifest echoing the
fully resolved key=value lines, and emits CSV files whose first line is
a comment carrying the artifact version and the config hash. Re-running
an experiment from its manifest reproduces the CSV bytes exactly; the
hash excludes output location and thread count, which cannot affect
results.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

import review_lottery
from review_lottery.core import ModelParams, QualityDistribution, ThresholdStrategy
from review_lottery.continuum import solve
from review_lottery.equilibrium import (
    joint_equilibrium,
    nash_threshold_fixed_sigma,
    planner_optimum,
    tau_grid,
)
from review_lottery.montecarlo import mc_equilibrium_threshold, simulate

# Tolerance floor for continuum-vs-MC z-scores: the continuum is an
# infinite-N approximation, so the discrepancy is measured against
# max(SE, 0.02/3) -- the figure-resolution tolerance 0.02 at 3 sigma.
Z_FLOOR = 0.02 / 3.0

GAIN_DENOM_FLOOR = 1e-6


class ConfigError(ValueError):
    """Bad key, unparsable value, or malformed config file."""


def _f(v: str) -> float:
    return float(v)


def _i(v: str) -> int:
    return int(v)


def _b(v: str) -> bool:
    low = v.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {v!r}")


def _flist(v: str):
    return tuple(float(x) for x in v.split(",") if x.strip() != "")


def _ilist(v: str):
    return tuple(int(x) for x in v.split(",") if x.strip() != "")


def _s(v: str) -> str:
    return v.strip()


# key -> parser; every experiment's resolved config uses this vocabulary.
_PARSERS = {
    "experiment": _s,
    "params.sigma": _f,
    "params.beta": _f,
    "params.alpha": _f,
    "params.lottery_rate": _f,
    "params.n_scientists": _i,
    "params.b": _f,
    "params.s": _f,
    "params.c": _f,
    "params.k": _f,
    "params.r": _s,              # optional; empty means "use params.s"
    "params.quality_dist": _s,
    "grid": _i,
    "tau_grid": _i,
    "mc.enabled": _b,
    "mc.m": _i,
    "mc.base_seed": _i,
    "threads": _i,
    "output.dir": _s,
    "sweep.sigma": _flist,
    "sweep.beta": _flist,
    "sweep.n": _ilist,
    "sweep.r": _flist,
    "sweep.tau": _flist,
    "sweep.multipliers": _flist,
    "scale.n_ref": _i,           # 0 means "smallest N in the sweep"
    "fig3.profile_sigma": _f,
    "prosociality.mc_r": _flist,
}

_HASH_EXCLUDED = ("output.dir", "threads")

_BASE_DEFAULTS = {
    "params.sigma": 0.3,
    "params.beta": 8.0,
    "params.alpha": 0.1,
    "params.lottery_rate": 0.1,
    "params.n_scientists": 100,
    "params.b": 1.0,
    "params.s": 2.0,
    "params.c": 0.1,
    "params.k": 2.0,
    "params.r": "",
    "params.quality_dist": "uniform",
    "grid": 50,
    "tau_grid": 50,
    "mc.enabled": False,
    "mc.m": 5000,
    "mc.base_seed": 20260808,
    "threads": 1,
    "output.dir": "out",
}

_SIGMA_SWEEP = tuple(round(0.05 * i, 2) for i in range(1, 13))

EXPERIMENT_DEFAULTS = {
    "scale-sweep": {
        "sweep.n": (50, 100, 200, 400, 800),
        "sweep.beta": (2.0, 4.0, 8.0),
        "scale.n_ref": 0,
        "mc.enabled": True,
        "mc.m": 10000,
        "params.lottery_rate": 0.0,
    },
    "phase-diagram": {
        "sweep.sigma": _SIGMA_SWEEP,
        "sweep.beta": (0.0, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0),
        "params.lottery_rate": 0.2,
    },
    "optimal-profiles": {
        # (sigma, beta) pairs zipped; progressively deeper into the
        # region where the lottery helps.
        "sweep.sigma": (0.10, 0.30, 0.50),
        "sweep.beta": (4.0, 6.0, 8.0),
        "params.lottery_rate": 0.2,
    },
    "planner-vs-nash": {
        "sweep.sigma": _SIGMA_SWEEP,
        "params.r": "0.33",
        "fig3.profile_sigma": 0.3,
    },
    "prosociality-sweep": {
        "sweep.r": (0.10, 0.20, 0.30, 0.33, 0.40, 0.50, 0.60, 0.67, 0.70, 0.80, 0.90),
        "prosociality.mc_r": (0.33, 0.50, 0.67),
        "mc.m": 2000,
    },
    "ai-scenario": {
        "sweep.multipliers": (1.0, 1.5, 2.0),
        "params.lottery_rate": 0.2,
    },
    "size-effect": {
        "sweep.n": (100, 500),
        "sweep.r": (0.3, 0.5, 0.99),
    },
    "mc-validate": {
        "sweep.sigma": (0.1, 0.3, 0.5),
        "sweep.tau": (0.0, 0.4, 1.0),
        "mc.enabled": True,
        "mc.m": 5000,
    },
    "solve-planner": {},
    "solve-nash": {},
    "solve-joint": {},
}


@dataclass
class ExperimentConfig:
    """Fully resolved configuration for one run."""

    experiment: str
    values: dict = field(default_factory=dict)

    @property
    def params(self) -> ModelParams:
        v = self.values
        s = v["params.s"]
        if v["params.r"]:
            r = float(v["params.r"])
            if not 0.0 < r <= 1.0:
                raise ConfigError("params.r must lie in (0, 1]")
            s = v["params.b"] * (1.0 - r) / r
        return ModelParams(
            sigma=v["params.sigma"], beta=v["params.beta"], alpha=v["params.alpha"],
            lottery_rate=v["params.lottery_rate"], n_scientists=v["params.n_scientists"],
            b=v["params.b"], s=s, c=v["params.c"], k=v["params.k"],
            quality_dist=QualityDistribution.from_label(v["params.quality_dist"]))

    @property
    def out_dir(self) -> Path:
        return Path(self.values["output.dir"])

    @property
    def grid(self) -> int:
        return self.values["grid"]

    def manifest_lines(self):
        lines = [f"experiment={self.experiment}"]
        for key in sorted(self.values):
            lines.append(f"{key}={_render(self.values[key])}")
        return lines

    def config_hash(self) -> str:
        text = "\n".join(l for l in self.manifest_lines()
                         if l.split("=", 1)[0] not in _HASH_EXCLUDED)
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def _render(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return ",".join(_render(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_config_file(path) -> dict:
    """Flat key=value lines; # comments and blank lines are ignored."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def resolve_config(experiment: str, file_pairs: dict | None = None,
                   set_pairs: dict | None = None,
                   flag_pairs: dict | None = None) -> ExperimentConfig:
    """Merge defaults <- config file <- --set pairs <- explicit flags."""
    if experiment not in EXPERIMENT_DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    values = dict(_BASE_DEFAULTS)
    values.update(EXPERIMENT_DEFAULTS[experiment])
    for source in (file_pairs or {}, set_pairs or {}, flag_pairs or {}):
        for key, raw in source.items():
            if key == "experiment":
                if raw != experiment:
                    raise ConfigError(
                        f"config file is for experiment {raw!r}, not {experiment!r}")
                continue
            if key not in _PARSERS:
                raise ConfigError(f"unknown config key {key!r}")
            if key not in values and key not in _BASE_DEFAULTS:
                # keys outside this experiment's vocabulary are still
                # accepted when generic (sweeps), to allow overrides
                pass
            try:
                values[key] = _PARSERS[key](raw) if isinstance(raw, str) else raw
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
    cfg = ExperimentConfig(experiment, values)
    cfg.params  # validate eagerly; raises ConfigError/ParameterError
    return cfg


@dataclass
class ExperimentOutcome:
    paths: list
    nonconverged: bool = False


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        x = float(v)
        return "nan" if math.isnan(x) else repr(x)
    return str(v)


def write_csv(path: Path, header, rows, config_hash: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# review-lottery v{review_lottery.__version__} "
                 f"config=sha256:{config_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def write_manifest(cfg: ExperimentConfig, name: str) -> Path:
    path = cfg.out_dir / f"{name}_manifest.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(cfg.manifest_lines()) + "\n")
    return path


def _sig12(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    def conv(v):
        if isinstance(v, dict):
            return {k: conv(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        if isinstance(v, (np.floating, float)):
            return _sig12(float(v))
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.bool_,)):
            return bool(v)
        return v
    path.write_text(json.dumps(conv(obj), indent=2, sort_keys=True) + "\n")
    return path


def _pmap(fn, items, threads: int):
    """Map preserving item order; a process pool when threads > 1."""
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ----------------------------------------------------------------------
# experiment pipelines
# ----------------------------------------------------------------------

def _scale_point(args):
    params, n, beta, n_ref, grid, use_mc, m, seed = args
    load = n / n_ref
    sigma_eff = params.sigma * load**beta
    ps = replace(params, sigma=sigma_eff, beta=beta, n_scientists=n)
    cont = solve(ThresholdStrategy(0.0), ps, grid).q_bar
    mc_mean = mc_se = None
    if use_mc:
        res = simulate(ThresholdStrategy(0.0), ps, m, seed)
        mc_mean, mc_se = res.q_bar_mean, res.q_bar_se
    return (n, beta, load, sigma_eff, cont, mc_mean, mc_se)


def run_scale_sweep(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    ns = v["sweep.n"]
    if list(ns) != sorted(ns):
        raise ConfigError("sweep.n must be ascending")
    n_ref = v["scale.n_ref"] or min(ns)
    if n_ref <= 0:
        raise ConfigError("scale.n_ref must be positive")
    items = []
    idx = 0
    for beta in v["sweep.beta"]:
        for n in ns:
            items.append((params, n, beta, n_ref, cfg.grid,
                          v["mc.enabled"], v["mc.m"], v["mc.base_seed"] + idx))
            idx += 1
    rows = _pmap(_scale_point, items, v["threads"])
    path = write_csv(cfg.out_dir / "scale_sweep.csv",
                     ["n", "beta", "load", "sigma_eff", "q_bar_continuum",
                      "q_bar_mc", "q_bar_mc_se"],
                     rows, cfg.config_hash())
    return ExperimentOutcome([path, write_manifest(cfg, "scale_sweep")])


def _phase_point(args):
    params, sigma, beta, grid = args
    ps = replace(params, sigma=sigma, beta=beta)
    q_none = solve(ThresholdStrategy(0.0), ps, grid).q_bar
    q_full = solve(ThresholdStrategy(1.0), ps, grid).q_bar
    return (sigma, beta, q_none, q_full, q_full - q_none)


def run_phase_diagram(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    items = [(params, s, b, cfg.grid) for b in v["sweep.beta"] for s in v["sweep.sigma"]]
    rows = _pmap(_phase_point, items, v["threads"])
    h = cfg.config_hash()
    path = write_csv(cfg.out_dir / "phase_diagram.csv",
                     ["sigma", "beta", "q_bar_none", "q_bar_full", "gain"], rows, h)
    contour = []
    sigmas = list(v["sweep.sigma"])
    per_beta = {b: [r for r in rows if r[1] == b] for b in v["sweep.beta"]}
    for b, rs in per_beta.items():
        gains = [r[4] for r in sorted(rs, key=lambda r: r[0])]
        sigma_zero = None
        for (s0, s1, g0, g1) in zip(sigmas, sigmas[1:], gains, gains[1:]):
            if g0 == 0.0:
                sigma_zero = s0
                break
            if g0 < 0.0 <= g1 or g0 > 0.0 >= g1:
                sigma_zero = s0 + (0.0 - g0) * (s1 - s0) / (g1 - g0)
                break
        contour.append((b, sigma_zero))
    cpath = write_csv(cfg.out_dir / "phase_diagram_contour.csv",
                      ["beta", "sigma_zero"], contour, h)
    return ExperimentOutcome([path, cpath, write_manifest(cfg, "phase_diagram")])


def run_optimal_profiles(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    if len(v["sweep.sigma"]) != len(v["sweep.beta"]):
        raise ConfigError("optimal-profiles zips sweep.sigma with sweep.beta; "
                          "lengths must match")
    rows = []
    for i, (sigma, beta) in enumerate(zip(v["sweep.sigma"], v["sweep.beta"]), start=1):
        ps = replace(params, sigma=sigma, beta=beta)
        opt = planner_optimum(ps, cfg.grid, v["tau_grid"])
        q_none = solve(ThresholdStrategy(0.0), ps, cfg.grid).q_bar
        rows.append((i, sigma, beta, opt.tau_star, opt.q_bar, q_none,
                     opt.q_bar - q_none))
    path = write_csv(cfg.out_dir / "optimal_profiles.csv",
                     ["point", "sigma", "beta", "tau_star", "q_bar_optimal",
                      "q_bar_none", "gain"],
                     rows, cfg.config_hash())
    return ExperimentOutcome([path, write_manifest(cfg, "optimal_profiles")])


def _pvn_point(args):
    params, sigma, grid, grid_points, use_mc, m, seed = args
    ps = replace(params, sigma=sigma)
    q_none = solve(ThresholdStrategy(0.0), ps, grid).q_bar
    opt = planner_optimum(ps, grid, grid_points)
    nash = nash_threshold_fixed_sigma(ps, sigma, grid, grid_points)
    mc_mean = mc_se = None
    if use_mc:
        res = simulate(ThresholdStrategy(nash.tau_star), ps, m, seed)
        mc_mean, mc_se = res.q_bar_mean, res.q_bar_se
    return (sigma, q_none, opt.q_bar, nash.q_bar, opt.tau_star, nash.tau_star,
            mc_mean, mc_se, nash.converged)


def run_planner_vs_nash(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    items = [(params, s, cfg.grid, v["tau_grid"], v["mc.enabled"], v["mc.m"],
              v["mc.base_seed"] + i) for i, s in enumerate(v["sweep.sigma"])]
    rows = _pmap(_pvn_point, items, v["threads"])
    h = cfg.config_hash()
    path = write_csv(cfg.out_dir / "planner_vs_nash.csv",
                     ["sigma", "q_bar_none", "q_bar_planner", "q_bar_nash",
                      "tau_planner", "tau_nash", "q_bar_mc", "q_bar_mc_se",
                      "converged"],
                     rows, h)
    prof_sigma = v["fig3.profile_sigma"]
    ps = replace(params, sigma=prof_sigma)
    opt = planner_optimum(ps, cfg.grid, v["tau_grid"])
    nash = nash_threshold_fixed_sigma(ps, prof_sigma, cfg.grid, v["tau_grid"])
    ppath = write_csv(cfg.out_dir / "planner_vs_nash_profiles.csv",
                      ["sigma", "tau_planner", "tau_nash", "converged"],
                      [(prof_sigma, opt.tau_star, nash.tau_star, nash.converged)], h)
    bad = any(not r[8] for r in rows) or not nash.converged
    return ExperimentOutcome([path, ppath, write_manifest(cfg, "planner_vs_nash")], bad)


def _prosoc_point(args):
    params, r, grid, grid_points, mc_on, m, seed, planner_q, q_none = args
    s = params.b * (1.0 - r) / r
    pr = replace(params, s=s)
    nash = nash_threshold_fixed_sigma(pr, params.sigma, grid, grid_points)
    denom = planner_q - q_none
    frac = (nash.q_bar - q_none) / denom if denom >= GAIN_DENOM_FLOOR else None
    tau_mc = None
    if mc_on:
        mce = mc_equilibrium_threshold(pr, params.sigma, m, seed,
                                       grid_points, points=grid)
        tau_mc = mce.tau_hat
    return (r, s, nash.tau_star, nash.q_bar, nash.converged, frac, tau_mc)


def run_prosociality_sweep(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    opt = planner_optimum(params, cfg.grid, v["tau_grid"])
    q_none = solve(ThresholdStrategy(0.0), params, cfg.grid).q_bar
    mc_rs = set(v["prosociality.mc_r"]) if v["mc.enabled"] else set()
    items = [(params, r, cfg.grid, v["tau_grid"], r in mc_rs, v["mc.m"],
              v["mc.base_seed"] + i, opt.q_bar, q_none)
             for i, r in enumerate(v["sweep.r"])]
    results = _pmap(_prosoc_point, items, v["threads"])
    rows = []
    for (r, s, tau_nash, q_nash, conv, frac, tau_mc) in results:
        rows.append((r, s, tau_nash, q_nash, opt.tau_star, opt.q_bar, q_none,
                     frac, tau_mc, conv, frac is None))
    path = write_csv(cfg.out_dir / "prosociality_sweep.csv",
                     ["r", "s", "tau_nash", "q_bar_nash", "tau_planner",
                      "q_bar_planner", "q_bar_none", "gain_fraction", "tau_mc",
                      "converged", "flagged"],
                     rows, cfg.config_hash())
    bad = any(not r[9] for r in rows)
    return ExperimentOutcome([path, write_manifest(cfg, "prosociality_sweep")], bad)


def run_ai_scenario(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    base_sigma = params.sigma
    q_base = solve(ThresholdStrategy(0.0), params, cfg.grid).q_bar
    rows = []
    for mult in v["sweep.multipliers"]:
        sigma_m = base_sigma * mult
        ps = replace(params, sigma=sigma_m)
        q_none = solve(ThresholdStrategy(0.0), ps, cfg.grid).q_bar
        opt = planner_optimum(ps, cfg.grid, v["tau_grid"])
        rows.append((mult, sigma_m, q_none, (q_base - q_none) / q_base,
                     opt.tau_star, opt.q_bar, opt.q_bar >= q_base))
    h = cfg.config_hash()
    path = write_csv(cfg.out_dir / "ai_scenario.csv",
                     ["multiplier", "sigma", "q_bar_none", "relative_loss",
                      "tau_planner", "q_bar_planner", "recovers"],
                     rows, h)
    jpath = write_json(cfg.out_dir / "ai_scenario.json", {
        "baseline_sigma": base_sigma,
        "q_bar_none_baseline": q_base,
        "rows": [dict(zip(["multiplier", "sigma", "q_bar_none", "relative_loss",
                           "tau_planner", "q_bar_planner", "recovers"], r))
                 for r in rows],
        "config_hash": h,
    })
    return ExperimentOutcome([path, jpath, write_manifest(cfg, "ai_scenario")])


def _size_point(args):
    params, n, r, grid, grid_points = args
    pr = replace(params, n_scientists=n, s=params.b * (1.0 - r) / r)
    q_none = solve(ThresholdStrategy(0.0), pr, grid).q_bar
    nash = nash_threshold_fixed_sigma(pr, params.sigma, grid, grid_points)
    return (n, r, pr.s, nash.tau_star, nash.q_bar, q_none,
            nash.q_bar - q_none, nash.converged)


def run_size_effect(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    items = [(params, n, r, cfg.grid, v["tau_grid"])
             for n in v["sweep.n"] for r in v["sweep.r"]]
    rows = _pmap(_size_point, items, v["threads"])
    h = cfg.config_hash()
    path = write_csv(cfg.out_dir / "size_effect.csv",
                     ["n", "r", "s", "tau_nash", "q_bar_nash", "q_bar_none",
                      "gain", "converged"],
                     rows, h)
    gains = {(r[0], r[1]): r[6] for r in rows}
    ratios = []
    if (100, 0.5) in gains and (500, 0.5) in gains and gains[(100, 0.5)] > 0:
        ratios.append(("gain_n500_over_n100_at_r05",
                       gains[(500, 0.5)] / gains[(100, 0.5)]))
    if (500, 0.3) in gains and (500, 0.5) in gains and gains[(500, 0.5)] > 0:
        ratios.append(("gain_r03_over_r05_at_n500",
                       gains[(500, 0.3)] / gains[(500, 0.5)]))
    rpath = write_csv(cfg.out_dir / "size_effect_ratios.csv",
                      ["ratio", "value"], ratios, h)
    bad = any(not r[7] for r in rows)
    return ExperimentOutcome([path, rpath, write_manifest(cfg, "size_effect")], bad)


def _validate_point(args):
    params, sigma, tau, grid, m, seed = args
    ps = replace(params, sigma=sigma)
    cont = solve(ThresholdStrategy(tau), ps, grid).q_bar
    res = simulate(ThresholdStrategy(tau), ps, m, seed)
    z = (res.q_bar_mean - cont) / max(res.q_bar_se, Z_FLOOR)
    return (sigma, tau, cont, res.q_bar_mean, res.q_bar_se, z)


def run_mc_validate(cfg: ExperimentConfig) -> ExperimentOutcome:
    v = cfg.values
    params = cfg.params
    items = [(params, s, t, cfg.grid, v["mc.m"], v["mc.base_seed"] + i)
             for i, (s, t) in enumerate(
                 (s, t) for s in v["sweep.sigma"] for t in v["sweep.tau"])]
    rows = _pmap(_validate_point, items, v["threads"])
    h = cfg.config_hash()
    path = write_csv(cfg.out_dir / "mc_validate.csv",
                     ["sigma", "tau", "q_bar_continuum", "q_bar_mc",
                      "q_bar_mc_se", "z"],
                     rows, h)
    zs = np.array([abs(r[5]) for r in rows])
    spath = write_csv(cfg.out_dir / "mc_validate_summary.csv",
                      ["max_abs_z", "frac_within_3", "points"],
                      [(float(zs.max()), float((zs <= 3.0).mean()), zs.size)], h)
    return ExperimentOutcome([path, spath, write_manifest(cfg, "mc_validate")])


def _equilibrium_json(cfg: ExperimentConfig, result, name: str):
    payload = {
        "tau_star": result.tau_star,
        "sigma_star": result.sigma_star,
        "q_bar": result.q_bar,
        "mode": result.mode,
        "converged": result.converged,
        "deviation_gap": result.deviation_gap,
        "iterations": result.iterations,
        "config_hash": cfg.config_hash(),
    }
    return write_json(cfg.out_dir / f"{name}.json", payload)


def run_solve_planner(cfg: ExperimentConfig) -> ExperimentOutcome:
    res = planner_optimum(cfg.params, cfg.grid, cfg.values["tau_grid"])
    return ExperimentOutcome(
        [_equilibrium_json(cfg, res, "planner"), write_manifest(cfg, "planner")],
        not res.converged)


def run_solve_nash(cfg: ExperimentConfig) -> ExperimentOutcome:
    params = cfg.params
    res = nash_threshold_fixed_sigma(params, params.sigma, cfg.grid,
                                     cfg.values["tau_grid"])
    return ExperimentOutcome(
        [_equilibrium_json(cfg, res, "nash"), write_manifest(cfg, "nash")],
        not res.converged)


def run_solve_joint(cfg: ExperimentConfig) -> ExperimentOutcome:
    res = joint_equilibrium(cfg.params, cfg.grid, cfg.values["tau_grid"])
    return ExperimentOutcome(
        [_equilibrium_json(cfg, res, "joint"), write_manifest(cfg, "joint")],
        not res.converged)


EXPERIMENTS = {
    "scale-sweep": run_scale_sweep,
    "phase-diagram": run_phase_diagram,
    "optimal-profiles": run_optimal_profiles,
    "planner-vs-nash": run_planner_vs_nash,
    "prosociality-sweep": run_prosociality_sweep,
    "ai-scenario": run_ai_scenario,
    "size-effect": run_size_effect,
    "mc-validate": run_mc_validate,
    "solve-planner": run_solve_planner,
    "solve-nash": run_solve_nash,
    "solve-joint": run_solve_joint,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentOutcome:
    return EXPERIMENTS[cfg.experiment](cfg)
