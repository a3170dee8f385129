"""Analytic-versus-simulation validation reports.

Each check simulates one of the exactly solvable limits, measures a
statistic with a batch-means error bar, and compares against the closed
form from the analytic module.  Reports are rows of

    quantity, analytic, simulated, std_error, z, passed

and a report fails as a whole if any row fails.  A negative-control hook
(``analytic_params``) lets the test suite corrupt the analytic side and
assert that the comparison actually has teeth.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytic import (
    ar1_price_second_moment,
    ar1_return_autocov,
    ar1_return_variance,
    chartist_return_autocov,
    chartist_return_variance,
    companion_model,
)
from .params import ModelParams
from .rng import make_rng
from .simulate import simulate
from .stats import batch_se, extract_returns

Z_TOL = 3.0


@dataclass(frozen=True)
class ValidationRow:
    quantity: str
    analytic: float
    simulated: float
    std_error: float
    z: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    rows: list[ValidationRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def write_csv(self, path: str | Path) -> None:
        lines = ["quantity,analytic,simulated,std_error,z,passed"]
        for r in self.rows:
            lines.append(
                f"{r.quantity},{r.analytic:.17g},{r.simulated:.17g},"
                f"{r.std_error:.17g},{r.z:.17g},{str(r.passed).lower()}"
            )
        Path(path).write_text("\n".join(lines) + "\n")


def _row(quantity: str, analytic: float, simulated: float,
         std_error: float, z_tol: float = Z_TOL) -> ValidationRow:
    z = (simulated - analytic) / std_error if std_error > 0 else np.inf
    return ValidationRow(
        quantity=quantity,
        analytic=analytic,
        simulated=simulated,
        std_error=std_error,
        z=float(z),
        passed=bool(abs(z) <= z_tol),
    )


def validate_fundamentalist(
    params: ModelParams,
    seed: int = 11,
    t_max: int = 2_000_000,
    deltas: tuple[int, ...] = (1, 10, 100, 1000),
    tau_over_delta: int = 2,
    analytic_params: ModelParams | None = None,
) -> ValidationReport:
    """x=0 limit: price variance, return variances, return autocovariance
    against the AR(1) closed forms."""
    ap = params if analytic_params is None else analytic_params
    series = simulate(params, seed=seed, t_max=t_max, x0=0.0, freeze_x=True)
    p = series.p - params.p_f
    rows = []

    var_p, se = batch_se(p, lambda b: float(np.mean(b**2)))
    rows.append(_row(
        "price_second_moment",
        ar1_price_second_moment(ap.gamma, ap.sigma, float("inf")),
        var_p, se,
    ))

    for d in deltas:
        r = extract_returns(p, d).values
        v, se = batch_se(r, lambda b: float(np.var(b)))
        rows.append(_row(
            f"return_variance_delta_{d}",
            ar1_return_variance(ap.gamma, ap.sigma, d),
            v, se,
        ))

    d = deltas[-2] if len(deltas) > 1 else deltas[0]
    tau = tau_over_delta * d
    r = extract_returns(p, d).values
    var_r = float(np.var(r))
    lag = tau // d

    def rho_hat(b):
        if len(b) <= lag:
            return 0.0
        return float(np.mean(b[lag:] * b[:-lag]) / var_r)

    rho, se = batch_se(r, rho_hat)
    rows.append(_row(
        f"return_autocov_delta_{d}_tau_{tau}",
        ar1_return_autocov(ap.gamma, d, tau),
        rho, se,
    ))
    return ValidationReport(rows=rows)


def chartist_ensemble(
    params: ModelParams,
    seed: int,
    n_paths: int,
    t_run: int,
    stream: int = 0,
) -> np.ndarray:
    """(n_paths, t_run+1) ensemble of frozen all-chartist paths from a
    flat zero history, advanced with vectorized numpy steps.  Matches the
    kernel dynamics; the bit-level kernel agreement is asserted in the
    unit tests against the single-path simulator."""
    rng = make_rng(seed, stream)
    M, b = params.M, params.b
    coef = b / (M - 1)
    p = np.zeros((n_paths, t_run + 1))
    hist = np.zeros((n_paths, M))
    hist_sum = np.zeros(n_paths)
    pos = 0
    cur = p[:, 0].copy()
    for t in range(t_run):
        p_m = hist_sum / M
        new = cur + coef * (cur - p_m) + params.sigma * rng.standard_normal(
            n_paths
        )
        hist_sum += cur - hist[:, pos]
        hist[:, pos] = cur
        pos = (pos + 1) % M
        cur = new
        p[:, t + 1] = cur
    return p


def validate_chartist(
    params: ModelParams,
    seed: int = 13,
    n_paths: int = 100_000,
    t_run: int = 600,
    deltas: tuple[int, ...] = (1, 10, 100),
    analytic_params: ModelParams | None = None,
) -> ValidationReport:
    """x=1 limit: return variance and autocovariance against the
    companion-matrix sums, using many short independent paths (the frozen
    all-chartist dynamics mixes slowly, so one long path is a poor MC)."""
    ap = params if analytic_params is None else analytic_params
    model = companion_model(ap.b, ap.M)
    w = t_run - 3 * max(deltas) - 1
    if w < params.M:
        raise ValueError("t_run too short for the requested deltas")

    paths = chartist_ensemble(params, seed, n_paths, t_run)
    rets = {d: paths[:, w + d] - paths[:, w] for d in deltas}
    tau = deltas[0] * 2
    rets_tau = paths[:, w + tau + deltas[0]] - paths[:, w + tau]

    rows = []
    for d in deltas:
        r = rets[d]
        v = float(np.var(r))
        se = float(np.std(r**2, ddof=1) / np.sqrt(n_paths))
        rows.append(_row(
            f"return_variance_delta_{d}",
            chartist_return_variance(model, ap.sigma, d, t=w),
            v, se,
        ))

    d = deltas[0]
    r0, r1 = rets[d], rets_tau
    var0 = float(np.var(r0))
    prod = r0 * r1
    rho = float(np.mean(prod)) / var0
    se = float(np.std(prod, ddof=1) / np.sqrt(n_paths)) / var0
    rows.append(_row(
        f"return_autocov_delta_{d}_tau_{tau}",
        chartist_return_autocov(model, ap.sigma, d, tau, t=w),
        rho, se,
    ))
    return ValidationReport(rows=rows)


def run_validation(
    params: ModelParams,
    seed: int = 11,
    analytic_params: ModelParams | None = None,
    fast: bool = False,
) -> ValidationReport:
    """Combined report over both solvable limits of the given parameters."""
    kw_f = dict(t_max=400_000, deltas=(1, 10, 100)) if fast else {}
    kw_c = dict(n_paths=20_000) if fast else {}
    rep_f = validate_fundamentalist(
        params, seed=seed, analytic_params=analytic_params, **kw_f
    )
    chart_params = params if params.b > 0 else params.with_(b=0.5, M=5)
    chart_analytic = None
    if analytic_params is not None:
        chart_analytic = analytic_params.with_(
            b=chart_params.b, M=chart_params.M
        )
    model = companion_model(chart_params.b, chart_params.M)
    rows = list(rep_f.rows)
    if model.stationary:
        rep_c = validate_chartist(
            chart_params, seed=seed + 1,
            analytic_params=chart_analytic, **kw_c,
        )
        rows += [
            ValidationRow(
                "chartist_" + r.quantity, r.analytic, r.simulated,
                r.std_error, r.z, r.passed,
            )
            for r in rep_c.rows
        ]
    return ValidationReport(rows=rows)
