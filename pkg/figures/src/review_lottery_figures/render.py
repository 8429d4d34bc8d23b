"""Render the figure set from experiment CSV outputs.

Seven figures: scale curves (fig1a), the full-adoption gain heatmap with
its zero contour (fig2a), optimal participation profiles (fig2b),
planner-vs-Nash profiles and quality curves (fig3a, fig3b), and the
prosociality profiles and gain-fraction curve (fig4a, fig4b). Rendering
is deterministic: no timestamps are embedded, and every image carries the
input CSV's config hash in its metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from review_lottery_figures.data import FigureDataError, Table, read_table, require_columns

FIGURE_IDS = ("fig1a", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b")

# default input file per figure, resolved against the --in directory
DEFAULT_INPUTS = {
    "fig1a": ("scale_sweep.csv",),
    "fig2a": ("phase_diagram.csv",),
    "fig2b": ("optimal_profiles.csv",),
    "fig3a": ("planner_vs_nash_profiles.csv",),
    "fig3b": ("planner_vs_nash.csv",),
    "fig4a": ("prosociality_sweep.csv",),
    "fig4b": ("prosociality_sweep.csv",),
}

_DPI = 150


@dataclass(frozen=True)
class FigureSpec:
    """One rendering job: figure id, input CSV path(s), output stem."""

    figure_id: str
    inputs: tuple
    out_stem: Path

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise FigureDataError(f"unknown figure id {self.figure_id!r}")

    @classmethod
    def for_directory(cls, figure_id: str, in_dir, out_dir) -> "FigureSpec":
        if figure_id not in DEFAULT_INPUTS:
            raise FigureDataError(f"unknown figure id {figure_id!r}")
        inputs = tuple(Path(in_dir) / name for name in DEFAULT_INPUTS[figure_id])
        return cls(figure_id, inputs, Path(out_dir) / figure_id)


@dataclass
class RenderResult:
    paths: list
    extras: dict = field(default_factory=dict)


def zero_contour(sigmas, gains):
    """First zero crossing of gain along ascending sigma, or None.

    Linear interpolation between adjacent grid columns (marching level 0
    in one dimension).
    """
    for (s0, s1, g0, g1) in zip(sigmas, sigmas[1:], gains, gains[1:]):
        if g0 == 0.0:
            return s0
        if (g0 < 0.0 <= g1) or (g0 > 0.0 >= g1):
            return s0 + (0.0 - g0) * (s1 - s0) / (g1 - g0)
    if gains and gains[0] == 0.0:
        return sigmas[0]
    return None


def _step_profile(ax, tau: float, label: str, color, linestyle="-"):
    ax.plot([0.0, tau, tau, 1.0], [1.0, 1.0, 0.0, 0.0],
            color=color, linestyle=linestyle, label=label, drawstyle="default")


def _has_values(table: Table, column: str) -> bool:
    return column in table.columns and any(row[column] != "" for row in table.rows)


def _save(fig, out_stem: Path, config_hash: str):
    out_stem.parent.mkdir(parents=True, exist_ok=True)
    png = out_stem.with_suffix(".png")
    pdf = out_stem.with_suffix(".pdf")
    fig.savefig(png, dpi=_DPI, metadata={
        "Software": "review-lottery-figures",
        "ConfigHash": config_hash,
    })
    fig.savefig(pdf, metadata={
        "CreationDate": None,        # drop the timestamp: bytes must not drift
        "Subject": f"config_hash={config_hash}",
    })
    plt.close(fig)
    return [png, pdf]


def _render_fig1a(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("n", "beta", "q_bar_continuum"), "fig1a")
    betas = sorted({float(r["beta"]) for r in table.rows})
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    mc_on = _has_values(table, "q_bar_mc")
    for beta in betas:
        rows = sorted((r for r in table.rows if float(r["beta"]) == beta),
                      key=lambda r: float(r["n"]))
        ns = [float(r["n"]) for r in rows]
        ax.plot(ns, [float(r["q_bar_continuum"]) for r in rows],
                label=f"beta = {beta:g}")
        if mc_on:
            mc = [float(r["q_bar_mc"]) if r["q_bar_mc"] != "" else np.nan
                  for r in rows]
            ax.plot(ns, mc, "o", ms=4, color=ax.lines[-1].get_color())
    ax.set_xscale("log")
    ax.set_xlabel("venue size N")
    ax.set_ylabel("mean accepted quality")
    ax.legend()
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash))


def _render_fig2a(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("sigma", "beta", "gain"), "fig2a")
    sigmas = sorted({float(r["sigma"]) for r in table.rows})
    betas = sorted({float(r["beta"]) for r in table.rows})
    gain = np.full((len(betas), len(sigmas)), np.nan)
    si = {s: i for i, s in enumerate(sigmas)}
    bi = {b: i for i, b in enumerate(betas)}
    for r in table.rows:
        gain[bi[float(r["beta"])], si[float(r["sigma"])]] = float(r["gain"])
    fig, ax = plt.subplots(figsize=(5.6, 3.8))
    mesh = ax.pcolormesh(sigmas, betas, gain, shading="nearest", cmap="RdBu_r",
                         vmin=-np.nanmax(np.abs(gain)), vmax=np.nanmax(np.abs(gain)))
    fig.colorbar(mesh, ax=ax, label="quality gain under full adoption")
    contour = []
    for b in betas:
        crossing = zero_contour(sigmas, list(gain[bi[b], :]))
        if crossing is not None:
            contour.append((crossing, b))
    if contour:
        xs, ys = zip(*contour)
        ax.plot(xs, ys, "k--", lw=1.5, label="zero gain")
        ax.legend(loc="lower right")
    ax.set_xlabel("baseline noise sigma")
    ax.set_ylabel("noise elasticity beta")
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash),
                        extras={"contour": contour})


def _render_fig2b(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("point", "sigma", "beta", "tau_star"), "fig2b")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, r in enumerate(table.rows):
        _step_profile(ax, float(r["tau_star"]),
                      f"sigma={float(r['sigma']):g}, beta={float(r['beta']):g}",
                      colors[i % len(colors)])
    ax.set_xlabel("paper quality q")
    ax.set_ylabel("optimal participation p(q)")
    ax.set_ylim(-0.05, 1.1)
    ax.legend()
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash))


def _render_fig3a(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("sigma", "tau_planner", "tau_nash"), "fig3a")
    row = table.rows[0]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    _step_profile(ax, float(row["tau_nash"]), "Nash equilibrium", "tab:red")
    _step_profile(ax, float(row["tau_planner"]), "social optimum", "tab:blue",
                  linestyle="--")
    ax.set_xlabel("paper quality q")
    ax.set_ylabel("participation p(q)")
    ax.set_ylim(-0.05, 1.1)
    ax.set_title(f"sigma = {float(row['sigma']):g}")
    ax.legend()
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash))


def _render_fig3b(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("sigma", "q_bar_none", "q_bar_planner", "q_bar_nash"),
                    "fig3b")
    rows = sorted(table.rows, key=lambda r: float(r["sigma"]))
    sig = [float(r["sigma"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    # legend order fixed: equilibrium, optimum, no lottery
    ax.plot(sig, [float(r["q_bar_nash"]) for r in rows],
            "-", color="tab:red", label="Nash lottery")
    ax.plot(sig, [float(r["q_bar_planner"]) for r in rows],
            "--", color="tab:blue", label="optimal lottery")
    ax.plot(sig, [float(r["q_bar_none"]) for r in rows],
            "--", color="grey", label="no lottery")
    if _has_values(table, "q_bar_mc"):
        mc = [float(r["q_bar_mc"]) if r["q_bar_mc"] != "" else np.nan for r in rows]
        ax.plot(sig, mc, "o", ms=4, color="tab:red", label="Monte Carlo")
    ax.set_xlabel("review noise sigma")
    ax.set_ylabel("mean accepted quality")
    ax.legend()
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash))


_FIG4A_RS = (0.67, 0.50, 0.33)


def _render_fig4a(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("r", "tau_nash"), "fig4a")
    by_r = {float(r["r"]): r for r in table.rows}
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, target in enumerate(_FIG4A_RS):
        r_key = min(by_r, key=lambda x: abs(x - target))
        row = by_r[r_key]
        color = colors[i % len(colors)]
        _step_profile(ax, float(row["tau_nash"]), f"r = {r_key:g}", color)
        if row.get("tau_mc", "") != "":
            ax.plot([float(row["tau_mc"])], [0.5], "o", ms=6, color=color)
    ax.set_xlabel("paper quality q")
    ax.set_ylabel("equilibrium participation p(q)")
    ax.set_ylim(-0.05, 1.1)
    ax.legend()
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash))


def _render_fig4b(table: Table, out_stem: Path) -> RenderResult:
    require_columns(table, ("r", "gain_fraction"), "fig4b")
    rows = sorted((r for r in table.rows if r["gain_fraction"] != ""),
                  key=lambda r: float(r["r"]))
    if not rows:
        raise FigureDataError("fig4b: all gain_fraction cells are empty")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot([float(r["r"]) for r in rows],
            [float(r["gain_fraction"]) for r in rows], "o-", color="tab:red")
    ax.set_xlabel("private-epistemic ratio r")
    ax.set_ylabel("fraction of optimal gain captured")
    ax.set_ylim(-0.05, 1.05)
    fig.tight_layout()
    return RenderResult(_save(fig, out_stem, table.config_hash))


_RENDERERS = {
    "fig1a": _render_fig1a,
    "fig2a": _render_fig2a,
    "fig2b": _render_fig2b,
    "fig3a": _render_fig3a,
    "fig3b": _render_fig3b,
    "fig4a": _render_fig4a,
    "fig4b": _render_fig4b,
}


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure to <out_stem>.png and <out_stem>.pdf."""
    table = read_table(spec.inputs[0])
    return _RENDERERS[spec.figure_id](table, spec.out_stem)
