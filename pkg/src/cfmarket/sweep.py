"""Parameter sweeps with deterministic, parallel-safe stream assignment.

Each sweep point gets its own RNG stream derived from (base stream,
point index), so results are identical whether points run serially or in
a process pool, and independent of scheduling order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .herding import equilibrium_mean
from .params import ModelParams
from .simulate import DivergenceError, simulate
from .stats import diffusion_exponent, excess_kurtosis, extract_returns

STREAM_SPACING = 1000


@dataclass(frozen=True)
class SweepPoint:
    """Summary statistics of one sweep run."""

    value: float
    mu: float
    kurtosis: float
    mean_x: float
    diverged: bool


@dataclass(frozen=True)
class SweepResult:
    axis: str
    points: list[SweepPoint]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])


def _int_axes():
    return ("M", "N")


def _run_point(args) -> SweepPoint:
    (params, axis, value, seed, stream, t_max, warmup, x0, freeze_x,
     delta_grid, delta_kurt) = args
    v = int(value) if axis in _int_axes() else float(value)
    p = params.with_(**{axis: v})
    if x0 is None:
        x0 = equilibrium_mean(p.N, p.herding)
    try:
        series = simulate(
            p, seed=seed, t_max=t_max, warmup=warmup, x0=x0,
            freeze_x=freeze_x, stream=stream,
        )
    except DivergenceError:
        return SweepPoint(
            value=float(value), mu=np.nan, kurtosis=np.nan,
            mean_x=np.nan, diverged=True,
        )
    fit = diffusion_exponent(series.p, delta_grid)
    r = extract_returns(series.p, delta_kurt).values
    return SweepPoint(
        value=float(value),
        mu=fit.mu,
        kurtosis=excess_kurtosis(r),
        mean_x=float(series.x.mean()),
        diverged=False,
    )


def run_sweep(
    params: ModelParams,
    axis: str,
    values: np.ndarray,
    seed: int = 1,
    base_stream: int = 0,
    t_max: int = 1_000_000,
    warmup: int | None = None,
    x0: float | None = None,
    freeze_x: bool = False,
    delta_grid: np.ndarray | None = None,
    delta_kurt: int = 100,
    jobs: int = 1,
) -> SweepResult:
    """One simulation per axis value; reduce to per-point summaries.

    Point i uses stream base_stream + (i+1)*STREAM_SPACING so streams
    never collide with each other or with the base run.
    """
    if delta_grid is None:
        delta_grid = np.arange(1, 101)
    tasks = [
        (
            params, axis, float(v), seed,
            base_stream + (i + 1) * STREAM_SPACING,
            t_max, warmup, x0, freeze_x, delta_grid, delta_kurt,
        )
        for i, v in enumerate(np.asarray(values, dtype=float))
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_run_point, tasks))
    else:
        points = [_run_point(t) for t in tasks]
    return SweepResult(axis=axis, points=points)


def write_sweep_csv(result: SweepResult, path) -> None:
    lines = [f"{result.axis},mu,kurtosis,mean_x,diverged"]
    for p in result.points:
        lines.append(
            f"{p.value:.17g},{p.mu:.17g},{p.kurtosis:.17g},"
            f"{p.mean_x:.17g},{str(p.diverged).lower()}"
        )
    Path(path).write_text("\n".join(lines) + "\n")
