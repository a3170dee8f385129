"""Command-line front end.

Subcommands:
    simulate  run the model, write the path CSV plus a manifest
    validate  compare solvable limits against closed forms, write a report
    sweep     scan one parameter, write per-point summary rows
    soi       run with agent entry/exit enabled, report N(t) convergence
    stats     compute return statistics from an existing path CSV

Every subcommand takes an optional ``--config FILE`` (flat key = value)
plus ``--set key=value`` overrides; outputs land in --out (default: the
CFMARKET_OUT environment variable, else ./runs).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as cio
from .params import MULTIPLICATIVE
from .simulate import DivergenceError, simulate
from .soi import time_to_band
from .stats import (
    diffusion_exponent,
    excess_kurtosis,
    extract_returns,
    return_autocov,
    return_pdf,
    sqreturn_autocov,
    tail_probability,
)
from .sweep import run_sweep, write_sweep_csv
from .validate import run_validation


def _load_config(args: argparse.Namespace) -> cio.RunConfig:
    cfg = (
        cio.RunConfig.read(args.config)
        if args.config
        else cio.RunConfig()
    )
    for item in args.set or []:
        if "=" not in item:
            raise SystemExit(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        cfg.set_key(k.strip(), v.strip())
    return cfg


def _out_dir(args: argparse.Namespace, cfg: cio.RunConfig) -> Path:
    out = args.out or cfg.out_dir or str(cio.default_output_root())
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override one config field (repeatable)",
    )
    p.add_argument("--out", help="output directory")


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    params = cfg.to_params()
    try:
        series = simulate(
            params,
            seed=cfg.seed,
            t_max=cfg.t_max,
            warmup=cfg.warmup_steps,
            x0=cfg.x0,
            p0=cfg.p0,
            freeze_x=cfg.freeze_x,
            stream=cfg.stream,
        )
    except DivergenceError as exc:
        cio.write_manifest(
            cfg, out / "failure_manifest.txt",
            status="diverged", **exc.diagnostics(),
        )
        print(f"simulate: {exc}", file=sys.stderr)
        print(f"simulate: wrote {out / 'failure_manifest.txt'}")
        return 1
    cio.write_series_csv(series, out / "series.csv")
    cio.write_manifest(
        cfg, out / "manifest.txt",
        status="ok", warmup_used=series.warmup, n_rows=len(series),
    )
    print(f"simulate: wrote {out / 'series.csv'} ({len(series)} rows)")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    report = run_validation(cfg.to_params(), seed=cfg.seed, fast=args.fast)
    report.write_csv(out / "validation.csv")
    for r in report.rows:
        mark = "PASS" if r.passed else "FAIL"
        print(
            f"{mark} {r.quantity}: analytic={r.analytic:.6g} "
            f"simulated={r.simulated:.6g} (z={r.z:+.2f})"
        )
    print(f"validate: wrote {out / 'validation.csv'}")
    return 0 if report.passed else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    values = np.array([float(v) for v in args.values.split(",")])
    result = run_sweep(
        cfg.to_params(),
        axis=args.axis,
        values=values,
        seed=cfg.seed,
        base_stream=cfg.stream,
        t_max=cfg.t_max,
        warmup=cfg.warmup_steps,
        x0=cfg.x0,
        freeze_x=cfg.freeze_x,
        jobs=args.jobs,
    )
    path = out / f"sweep_{args.axis}.csv"
    write_sweep_csv(result, path)
    print(f"sweep: wrote {path} ({len(result.points)} points)")
    return 0


def cmd_soi(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    cfg.soi_enabled = True
    out = _out_dir(args, cfg)
    params = cfg.to_params()
    series = simulate(
        params,
        seed=cfg.seed,
        t_max=cfg.t_max,
        warmup=0,
        x0=cfg.x0,
        p0=cfg.p0,
        stream=cfg.stream,
    )
    cio.write_curve_csv(
        out / "soi_n.csv", "t,N",
        series.t.astype(float), series.n.astype(float),
    )
    band = (args.band_lo, args.band_hi)
    hit = time_to_band(series.n, band)
    tail = series.n[len(series.n) // 2:]
    report = {
        "n_start": int(series.n[0]),
        "n_final": int(series.n[-1]),
        "n_tail_mean": float(tail.mean()),
        "n_tail_std": float(tail.std()),
        "band_lo": band[0],
        "band_hi": band[1],
        "time_to_band": -1 if hit is None else hit,
    }
    cio.write_report(out / "soi_report.txt", report)
    cio.write_manifest(cfg, out / "manifest.txt", status="ok")
    print(
        f"soi: N {report['n_start']} -> {report['n_final']}, "
        f"tail mean {report['n_tail_mean']:.1f}; wrote {out / 'soi_n.csv'}"
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    data = cio.read_series_csv(args.series)
    prices = data["p"]
    definition = (
        "log" if cfg.dynamics_mode == MULTIPLICATIVE else "difference"
    )
    series = extract_returns(prices, cfg.delta, definition=definition)

    hist = return_pdf(series)
    cio.write_curve_csv(
        out / f"pdf_delta_{cfg.delta}.csv", "center,density",
        hist.centers, hist.density,
    )
    tau_grid = cfg.delta * np.arange(0, min(21, len(series) - 1))
    cio.write_curve_csv(
        out / f"autocov_delta_{cfg.delta}.csv", "tau,rho_r,rho_r2",
        tau_grid.astype(float),
        return_autocov(series, tau_grid),
        sqreturn_autocov(series, tau_grid),
    )
    fit = diffusion_exponent(prices, np.arange(1, 101))
    report = {
        "delta": cfg.delta,
        "definition": definition,
        "n_returns": len(series),
        "variance": float(series.values.var()),
        "excess_kurtosis": excess_kurtosis(series.values),
        "tail_prob_4std": tail_probability(series.values),
        "diffusion_mu": fit.mu,
        "diffusion_sigma0": fit.sigma0,
    }
    cio.write_report(out / f"stats_delta_{cfg.delta}.txt", report)
    print(
        f"stats: mu={fit.mu:.3f}, kurtosis={report['excess_kurtosis']:.3f}; "
        f"wrote {out}"
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="cfmarket",
        description="chartist-fundamentalist market model toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the model, write path CSV")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="check solvable limits vs closed forms")
    _add_common(p)
    p.add_argument("--fast", action="store_true", help="shorter runs")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="scan one parameter")
    _add_common(p)
    p.add_argument("--axis", required=True, help="parameter name, e.g. M")
    p.add_argument(
        "--values", required=True, help="comma-separated axis values"
    )
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("soi", help="run with agent entry/exit enabled")
    _add_common(p)
    p.add_argument("--band-lo", type=float, default=400.0)
    p.add_argument("--band-hi", type=float, default=600.0)
    p.set_defaults(func=cmd_soi)

    p = sub.add_parser("stats", help="return statistics from a path CSV")
    _add_common(p)
    p.add_argument("series", help="path CSV written by simulate")
    p.set_defaults(func=cmd_stats)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
