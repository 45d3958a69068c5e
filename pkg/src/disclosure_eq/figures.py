"""Figure data series: CSV emission and matplotlib rendering.

Two figure families ship with the package:

* elaborateness of reports against the outside-revelation probability q,
  at a low and a high competence level (two panels); and
* key equilibrium quantities against the realized first signal r:
  (a) the disclosure thresholds, (b) firm value at the thresholds,
  (c) the non-disclosure price at a small signal dispersion, and
  (d) the same at a large dispersion, where it turns non-monotone at
  small r.

Each panel is written as one CSV (12 significant digits, locale
independent, columns documented in '#' comments) and, unless rendering is
disabled, one PNG with the same stem.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .baseline import ModelParams, report_stats, solve_baseline
from .distributions import make_normal

Q_PANEL_BETAS = (0.5, 0.7)       # per-panel competence levels for the q sweeps
Q_PANEL_PARAMS = dict(r=0.5, r0=1.0, mu0=1.0, sigma=0.5)
R_PANEL_PARAMS = dict(beta=0.7, q=0.8, r0=1.0, mu0=1.0)
R_PANEL_SIGMAS = (0.5, 20.0)     # panels a-c use the first, panel d the second


def q_sweep_series(beta: float, n_q: int = 21, **overrides):
    """Elaborateness and thresholds on a q grid at fixed competence."""
    cfg = dict(Q_PANEL_PARAMS)
    cfg.update(overrides)
    dist = make_normal(cfg["mu0"], cfg["sigma"])
    qs = np.linspace(0.0, 1.0, n_q)
    rows = []
    for q in qs:
        params = ModelParams(
            alpha=1.0, beta=beta, q=float(q), r_obs=cfg["r"], r0=cfg["r0"], x_dist=dist
        )
        eq = solve_baseline(params)
        stats = report_stats(params, eq)
        rows.append((float(q), stats.elaborateness, eq.x_low, eq.x_high))
    return rows


def r_grid(n_small: int = 19, n_below: int = 20, n_above: int = 40):
    """r values on both sides of r0, dense at small r where the
    non-disclosure price can dip."""
    below = np.concatenate(
        [np.linspace(0.02, 0.20, n_small), np.linspace(0.24, 0.98, n_below)]
    )
    above = np.linspace(1.02, 4.0, n_above)
    return below, above


def r_sweep_series(sigma: float, **overrides):
    """Thresholds, threshold firm values, and non-disclosure price vs r."""
    cfg = dict(R_PANEL_PARAMS)
    cfg.update(overrides)
    dist = make_normal(cfg["mu0"], sigma)
    below, above = r_grid()
    rows = []
    for r in np.concatenate([below, above]):
        params = ModelParams(
            alpha=1.0, beta=cfg["beta"], q=cfg["q"], r_obs=float(r), r0=cfg["r0"],
            x_dist=dist,
        )
        eq = solve_baseline(params)
        rows.append(
            (
                float(r),
                eq.x_low,
                eq.x_high,
                float(r) * eq.x_low,
                float(r) * eq.x_high,
                float(r) * eq.mu_nd,
            )
        )
    return rows


def _fmt(v) -> str:
    return format(float(v), ".12g")


def write_csv(path: Path, comments: list[str], header: list[str], rows) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _render_lines(path: Path, x, series, xlabel, ylabel, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ys in series:
        ax.plot(x, ys, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_figures(outdir: str | Path, render: bool = True, n_q: int = 21) -> list[Path]:
    """Write all figure CSVs (and PNGs unless ``render`` is False)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    base = dict(Q_PANEL_PARAMS)
    for panel, beta in zip(("fig3a", "fig3b"), Q_PANEL_BETAS):
        rows = q_sweep_series(beta, n_q=n_q)
        csv_path = outdir / f"{panel}.csv"
        write_csv(
            csv_path,
            [
                f"elaborateness of reports vs q at beta={beta}, "
                f"r={base['r']}, r0={base['r0']}, normal x with mu={base['mu0']}, "
                f"sigma={base['sigma']}",
                "columns: q, elaborateness, x_low, x_high",
            ],
            ["q", "elaborateness", "x_low", "x_high"],
            rows,
        )
        written.append(csv_path)
        if render:
            png = outdir / f"{panel}.png"
            arr = np.array(rows)
            _render_lines(
                png,
                arr[:, 0],
                [("elaborateness", arr[:, 1])],
                "q",
                "elaborateness",
                f"beta={beta}",
            )
            written.append(png)

    rcfg = dict(R_PANEL_PARAMS)
    series_small = np.array(r_sweep_series(R_PANEL_SIGMAS[0]))
    series_large = np.array(r_sweep_series(R_PANEL_SIGMAS[1]))
    stem_cols = {
        "fig4a": (
            ["r", "x_low", "x_high"],
            series_small[:, [0, 1, 2]],
            "disclosure thresholds vs r",
            [("x_low", 1), ("x_high", 2)],
        ),
        "fig4b": (
            ["r", "value_at_x_low", "value_at_x_high"],
            series_small[:, [0, 3, 4]],
            "firm value at the thresholds vs r",
            [("r*x_low", 1), ("r*x_high", 2)],
        ),
        "fig4c": (
            ["r", "nd_price"],
            series_small[:, [0, 5]],
            f"non-disclosure price vs r, sigma={R_PANEL_SIGMAS[0]}",
            [("r*mu_nd", 1)],
        ),
        "fig4d": (
            ["r", "nd_price"],
            series_large[:, [0, 5]],
            f"non-disclosure price vs r, sigma={R_PANEL_SIGMAS[1]}",
            [("r*mu_nd", 1)],
        ),
    }
    for stem, (header, data, desc, plot_cols) in stem_cols.items():
        csv_path = outdir / f"{stem}.csv"
        write_csv(
            csv_path,
            [
                f"{desc}; beta={rcfg['beta']}, q={rcfg['q']}, r0={rcfg['r0']}, "
                f"normal x with mu={rcfg['mu0']}",
                f"columns: {', '.join(header)}",
            ],
            header,
            data,
        )
        written.append(csv_path)
        if render:
            png = outdir / f"{stem}.png"
            _render_lines(
                png,
                data[:, 0],
                [(label, data[:, col]) for label, col in plot_cols],
                "r",
                "value",
                desc,
            )
            written.append(png)
    return written
