"""Command-line interface.

Subcommands: solve, sweep, sensitivity, simulate, check-deviations,
figures.  Parameter precedence is flags over config-file values over
defaults; every run echoes the fully resolved configuration to stderr for
auditability.  Machine output is JSON on stdout (solve with --json,
simulate and check-deviations always); tabular output is CSV with 12
significant digits.  DISCLOSURE_EQ_THREADS caps the sweep worker pool.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .baseline import ModelParams, report_stats, solve_baseline
from .distributions import LogNormalR, make_normal, x_dist_from_config
from .errors import (
    DegenerateCaseError,
    EquilibriumViolationError,
    ParameterError,
)
from .extension import ExtParams, solve_extension
from .figures import write_csv, write_figures
from .sensitivity import sensitivity_analytic, sensitivity_fd
from .simulation import (
    BASELINE,
    EXTENSION,
    SimConfig,
    default_deviation_grid,
    deviation_check,
    deviation_check_extension,
    simulate,
)

DEFAULTS = {
    "model": BASELINE,
    "alpha": 0.5,
    "beta": 0.5,
    "q": 0.8,
    "p": 0.5,
    "r": 0.5,
    "r0": 1.0,
    "mu0": 1.0,
    "sigma": 0.5,
    "tol": 1e-12,
    "seed": 20240817,
    "paths": 100_000,
}

_PARAM_KEYS = ("alpha", "beta", "q", "p", "r", "r0", "mu0", "sigma")


def _add_param_flags(sp):
    sp.add_argument("--model", choices=[BASELINE, EXTENSION])
    for key in _PARAM_KEYS:
        sp.add_argument(f"--{key}", type=float)
    sp.add_argument("--dist-file", help="JSON file describing the x distribution")
    sp.add_argument("--config", help="JSON config file; flags override its values")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--seed", type=int)


def _resolve(args) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(DEFAULTS) - {"dist"}
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        dist = file_cfg.pop("dist", None)
        if dist is not None:
            d = x_dist_from_config(dist)
            cfg["mu0"], cfg["sigma"] = d.mu, d.sigma
        cfg.update(file_cfg)
    if getattr(args, "dist_file", None):
        with open(args.dist_file) as fh:
            d = x_dist_from_config(json.load(fh))
        cfg["mu0"], cfg["sigma"] = d.mu, d.sigma
    for key in ("model", "tol", "seed", "paths", *_PARAM_KEYS):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    print("resolved config: " + json.dumps(cfg, sort_keys=True), file=sys.stderr)
    return cfg


def _params_from(cfg: dict, model: str | None = None):
    model = model or cfg["model"]
    dist = make_normal(cfg["mu0"], cfg["sigma"])
    if model == BASELINE:
        return ModelParams(
            alpha=cfg["alpha"], beta=cfg["beta"], q=cfg["q"], r_obs=cfg["r"],
            r0=cfg["r0"], x_dist=dist,
        )
    return ExtParams(
        alpha=cfg["alpha"], beta=cfg["beta"], p_firm=cfg["p"], r_obs=cfg["r"],
        r0=cfg["r0"], x_dist=dist,
    )


def _solve_payload(cfg: dict) -> dict:
    params = _params_from(cfg)
    if cfg["model"] == BASELINE:
        eq = solve_baseline(params, cfg["tol"])
        stats = report_stats(params, eq)
        return {
            "model": BASELINE,
            "config": cfg,
            "case": eq.case.value,
            "x_low": eq.x_low,
            "x_high": eq.x_high,
            "mu_nd": eq.mu_nd,
            "neutral_point": eq.neutral_point,
            "residual": eq.residual,
            "stats": stats.__dict__,
        }
    eq = solve_extension(params, cfg["tol"])
    return {
        "model": EXTENSION,
        "config": cfg,
        "case": eq.case.value,
        "x_low_p": eq.x_low_p,
        "x_high_p": eq.x_high_p,
        "mu_nd": eq.mu_nd,
        "r_bar": "inf" if eq.r_bar_corner else eq.r_bar,
        "r_bar_corner": eq.r_bar_corner,
        "neutral_point": params.neutral_point,
        "residual": eq.residual,
    }


def _cmd_solve(args) -> int:
    cfg = _resolve(args)
    payload = _solve_payload(cfg)
    if args.json:
        text = json.dumps(payload, indent=2)
    else:
        skip = {"config", "stats", "model"}
        lines = [f"model: {payload['model']}"]
        lines += [
            f"{k}: {v}" for k, v in payload.items() if k not in skip
        ]
        if "stats" in payload:
            lines += [f"{k}: {v:.12g}" for k, v in payload["stats"].items()]
        text = "\n".join(lines)
    print(text)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    return 0


def _parse_grid(spec: str):
    try:
        name, rest = spec.split("=", 1)
        lo, hi, steps = rest.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise ParameterError(f"bad grid spec {spec!r}; expected name=min:max:steps")
    if name not in _PARAM_KEYS:
        raise ParameterError(f"cannot sweep unknown parameter {name!r}")
    if steps < 1:
        raise ParameterError(f"grid for {name!r} needs at least one step")
    if steps == 1:
        values = [lo]
    else:
        values = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    return name, values


def _worker_count() -> int:
    env = os.environ.get("DISCLOSURE_EQ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParameterError(f"DISCLOSURE_EQ_THREADS must be an integer, got {env!r}")
    return min(8, os.cpu_count() or 1)


def _cmd_sweep(args) -> int:
    cfg = _resolve(args)
    grids = [_parse_grid(spec) for spec in args.grid or []]
    if not grids:
        raise ParameterError("sweep needs at least one --grid")
    names = [g[0] for g in grids]
    cells = list(itertools.product(*(g[1] for g in grids)))

    def run_cell(cell):
        local = dict(cfg)
        local.update(dict(zip(names, cell)))
        return local, _solve_payload(local)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = list(pool.map(run_cell, cells))

    if cfg["model"] == BASELINE:
        header = [
            *_PARAM_KEYS[:3], "r", "r0", "mu0", "sigma",
            "case", "x_low", "x_high", "mu_nd", "neutral_point", "residual",
            "elaborateness", "freq_neg", "freq_pos", "extremity",
            "misleading_prob", "price_reaction",
        ]
        rows = [
            (
                local["alpha"], local["beta"], local["q"], local["r"], local["r0"],
                local["mu0"], local["sigma"],
                1.0 if payload["case"] == "long" else -1.0,
                payload["x_low"], payload["x_high"], payload["mu_nd"],
                payload["neutral_point"], payload["residual"],
                payload["stats"]["elaborateness"], payload["stats"]["freq_neg"],
                payload["stats"]["freq_pos"], payload["stats"]["extremity"],
                payload["stats"]["misleading_prob"], payload["stats"]["price_reaction"],
            )
            for local, payload in results
        ]
    else:
        header = [
            "alpha", "beta", "p", "r", "r0", "mu0", "sigma",
            "case", "x_low_p", "x_high_p", "mu_nd", "neutral_point", "residual",
        ]
        rows = [
            (
                local["alpha"], local["beta"], local["p"], local["r"], local["r0"],
                local["mu0"], local["sigma"],
                1.0 if payload["case"] == "above_cutoff" else -1.0,
                payload["x_low_p"], payload["x_high_p"], payload["mu_nd"],
                payload["neutral_point"], payload["residual"],
            )
            for local, payload in results
        ]
    comments = [
        f"parameter sweep over {', '.join(names)}",
        "case column: -1 short side, +1 long side",
    ]
    out = Path(args.out or "sweep.csv")
    write_csv(out, comments, header, rows)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def _cmd_sensitivity(args) -> int:
    cfg = _resolve(args)
    if cfg["model"] != BASELINE:
        raise ParameterError("sensitivity derivatives are defined for the baseline model")
    grids = [_parse_grid(spec) for spec in args.grid or []]
    names = [g[0] for g in grids]
    cells = list(itertools.product(*(g[1] for g in grids))) if grids else [()]
    rows = []
    for cell in cells:
        local = dict(cfg)
        local.update(dict(zip(names, cell)))
        params = _params_from(local, BASELINE)
        eq = solve_baseline(params, local["tol"])
        sens = (
            sensitivity_analytic(params, eq)
            if args.method == "analytic"
            else sensitivity_fd(params)
        )
        rows.append(
            (
                local["beta"], local["q"], local["r"], local["r0"], local["mu0"],
                local["sigma"], eq.x_low, eq.x_high,
                sens.d_xlow_d_beta, sens.d_xhigh_d_beta,
                sens.d_xlow_d_q, sens.d_xhigh_d_q,
            )
        )
    header = [
        "beta", "q", "r", "r0", "mu0", "sigma", "x_low", "x_high",
        "d_xlow_d_beta", "d_xhigh_d_beta", "d_xlow_d_q", "d_xhigh_d_q",
    ]
    comments = [f"threshold sensitivities, method={args.method}"]
    if args.out:
        write_csv(Path(args.out), comments, header, rows)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(format(float(v), ".12g") for v in row))
    return 0


def _cmd_simulate(args) -> int:
    cfg = _resolve(args)
    params = _params_from(cfg)
    r_dist = LogNormalR(cfg["r0"], args.r_log_sigma)
    sim_cfg = SimConfig(
        n_paths=cfg["paths"], seed=cfg["seed"], model=cfg["model"], params=params,
        r_dist=r_dist, tol=cfg["tol"],
    )
    report = simulate(sim_cfg)
    payload = report.to_dict()
    payload["config"] = cfg
    print(json.dumps(payload, indent=2))
    if args.out:
        codes = {"elaborate": 0, "simple": 1, "none": 2}
        rows = [
            (codes[msg], est.value, est.se, report.counts[msg])
            for msg, est in report.price_mean_by_message.items()
        ]
        write_csv(
            Path(args.out),
            ["per-message mean date-3 price", "message column: 0 elaborate, 1 simple, 2 none"],
            ["message", "mean_price", "se", "n_paths"],
            rows,
        )
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_check_deviations(args) -> int:
    cfg = _resolve(args)
    params = _params_from(cfg)
    status = 0
    try:
        if cfg["model"] == BASELINE:
            eq = solve_baseline(params, cfg["tol"])
            grid = default_deviation_grid(params, eq.x_low, eq.x_high, args.grid_points)
            table = deviation_check(params, eq, grid, args.dev_tol)
        else:
            eq = solve_extension(params, cfg["tol"])
            grid = default_deviation_grid(params, eq.x_low_p, eq.x_high_p, args.grid_points)
            table = deviation_check_extension(params, eq, grid, args.dev_tol)
    except EquilibriumViolationError as err:
        table = err.table
        status = 1
    n_states = len({e.state for e in table.entries})
    print(
        json.dumps(
            {
                "model": cfg["model"],
                "tolerance": table.tol,
                "grid_points": args.grid_points,
                "states_checked": n_states,
                "max_gap": table.max_gap,
                "worst_state": table.worst_state,
                "pass": status == 0,
            },
            indent=2,
        )
    )
    return status


def _cmd_figures(args) -> int:
    written = write_figures(args.out, render=not args.no_plots)
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disclosure-eq",
        description="equilibrium solver and simulator for the investor "
        "voluntary-disclosure game",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one equilibrium and print it")
    _add_param_flags(sp)
    sp.add_argument("--json", action="store_true", help="print machine JSON")
    sp.add_argument("--out", help="also write the JSON payload to this path")
    sp.set_defaults(fn=_cmd_solve)

    sp = sub.add_parser("sweep", help="solve on a parameter grid and write CSV")
    _add_param_flags(sp)
    sp.add_argument("--grid", action="append", metavar="PARAM=MIN:MAX:STEPS")
    sp.add_argument("--out", help="output CSV path (default sweep.csv)")
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser("sensitivity", help="threshold derivatives in beta and q")
    _add_param_flags(sp)
    sp.add_argument("--grid", action="append", metavar="PARAM=MIN:MAX:STEPS")
    sp.add_argument("--method", choices=["analytic", "fd"], default="analytic")
    sp.add_argument("--out", help="output CSV path")
    sp.set_defaults(fn=_cmd_sensitivity)

    sp = sub.add_parser("simulate", help="Monte Carlo run; prints a JSON summary")
    _add_param_flags(sp)
    sp.add_argument("--paths", type=int)
    sp.add_argument("--r-log-sigma", type=float, default=0.25,
                    help="dispersion of the log-normal first-signal draw")
    sp.add_argument("--out", help="CSV of per-message price means")
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser(
        "check-deviations", help="certify no profitable deviation on an x grid"
    )
    _add_param_flags(sp)
    sp.add_argument("--grid-points", type=int, default=201)
    sp.add_argument("--dev-tol", type=float, default=1e-9)
    sp.set_defaults(fn=_cmd_check_deviations)

    sp = sub.add_parser("figures", help="write figure CSVs and PNGs")
    sp.add_argument("--out", default="figures", help="output directory")
    sp.add_argument("--no-plots", action="store_true", help="CSV only")
    sp.set_defaults(fn=_cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParameterError, DegenerateCaseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
