"""Calibrate entry/exit thresholds on the linear model, map them to the
multiplicative noise scale, and run the four convergence experiments
(linear/multiplicative from N(0)=50 and N(0)=5000).

Usage:
    python scripts/run_soi_convergence.py [--out DIR] [--seeds N]

Writes soi_thresholds.txt plus one N(t) curve per run and a summary
soi_convergence.csv with time-to-band and tail statistics.
"""

import argparse
from pathlib import Path

import numpy as np

from cfmarket.io import default_output_root, write_curve_csv, write_report
from cfmarket.params import ModelParams, multiplicative_defaults
from cfmarket.simulate import simulate
from cfmarket.soi import calibrate_thresholds, rescale_thresholds, time_to_band

BAND = (100, 800)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=None)
    ap.add_argument("--t-max", type=int, default=1_000_000)
    ap.add_argument("--seeds", type=int, default=3,
                    help="seeds per (mode, N0) cell, starting at 31")
    args = ap.parse_args()
    out = Path(args.out or default_output_root())
    out.mkdir(parents=True, exist_ok=True)

    lin = ModelParams()
    mult = multiplicative_defaults()
    soi_lin = calibrate_thresholds(
        lin, seed=7, n_min=10, n_max=800, update_period=10
    )
    soi_mult = rescale_thresholds(soi_lin, lin.sigma, mult.sigma)
    write_report(out / "soi_thresholds.txt", {
        "linear_theta_out": soi_lin.theta_out,
        "linear_theta_in": soi_lin.theta_in,
        "multiplicative_theta_out": soi_mult.theta_out,
        "multiplicative_theta_in": soi_mult.theta_in,
        "T_window": soi_lin.T_window,
    })

    lines = ["mode,n0,seed,time_to_band,tail_mean,tail_frac_in_band"]
    for mode, base, soi in (("lin", lin, soi_lin), ("mult", mult, soi_mult)):
        for n0 in (50, 5000):
            for seed in range(31, 31 + args.seeds):
                p = base.with_(N=n0, soi=soi)
                s = simulate(p, seed=seed, t_max=args.t_max, warmup=0,
                             x0=0.5, stream=seed * 17)
                half = s.n[len(s.n) // 2:]
                hit = time_to_band(s.n, BAND)
                frac = float(np.mean((half >= BAND[0]) & (half <= BAND[1])))
                lines.append(
                    f"{mode},{n0},{seed},{-1 if hit is None else hit},"
                    f"{half.mean():.1f},{frac:.3f}"
                )
                write_curve_csv(
                    out / f"soi_n_{mode}_{n0}_{seed}.csv", "t,N",
                    s.t.astype(float), s.n.astype(float),
                )
                print(lines[-1])
    (out / "soi_convergence.csv").write_text("\n".join(lines) + "\n")
    print(f"wrote {out / 'soi_convergence.csv'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
