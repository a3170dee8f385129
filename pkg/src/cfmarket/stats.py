"""Estimators over simulated price series.

Everything here is pure and deterministic given its input arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

DIFFERENCE = "difference"
LOG = "log"


@dataclass(frozen=True)
class ReturnSeries:
    """Delta-lag returns extracted from a price path."""

    values: np.ndarray
    delta: int
    definition: str = DIFFERENCE
    overlapping: bool = False

    def __len__(self) -> int:
        return len(self.values)


def extract_returns(
    prices: np.ndarray,
    delta: int,
    definition: str = DIFFERENCE,
    overlapping: bool = False,
) -> ReturnSeries:
    """Non-overlapping (default) delta-lag returns.

    Overlapping extraction is available for variance-reduction studies but
    correlates consecutive samples; estimators stay unbiased, error bars
    do not.
    """
    prices = np.asarray(prices, dtype=float)
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    if definition not in (DIFFERENCE, LOG):
        raise ValueError(f"unknown return definition {definition!r}")
    if definition == LOG and np.any(prices <= 0):
        raise ValueError("log returns require strictly positive prices")
    if overlapping:
        a, b = prices[delta:], prices[:-delta]
    else:
        n = (len(prices) - 1) // delta
        idx = np.arange(n + 1) * delta
        a, b = prices[idx[1:]], prices[idx[:-1]]
    values = np.log(a / b) if definition == LOG else a - b
    return ReturnSeries(
        values=values, delta=delta, definition=definition, overlapping=overlapping
    )


def autocov(
    series: ReturnSeries,
    power: float,
    tau_grid: np.ndarray,
    absolute: bool | None = None,
) -> np.ndarray:
    """Normalized autocovariance curve of |r|^power (signed r for power=1)
    at the time lags tau_grid, which must be multiples of the series delta.

        rho(tau) = (E[y_tau y_0] - E[y]^2) / Var[y]

    rho(0) = 1 exactly under this normalization.
    """
    if power <= 0:
        raise ValueError(f"power must be > 0, got {power}")
    if absolute is None:
        absolute = power != 1
    y = np.abs(series.values) ** power if absolute else series.values**power
    step = 1 if series.overlapping else series.delta
    out = np.empty(len(tau_grid))
    mu = y.mean()
    var = y.var()
    if var == 0:
        raise ValueError("degenerate series: zero variance")
    for i, tau in enumerate(np.asarray(tau_grid)):
        if tau % step != 0:
            raise ValueError(
                f"tau={tau} is not a multiple of the sample spacing {step}"
            )
        lag = int(tau) // step
        if lag >= len(y):
            raise ValueError(f"tau={tau} exceeds the series span")
        if lag == 0:
            out[i] = 1.0
        else:
            out[i] = (np.mean(y[lag:] * y[:-lag]) - mu * mu) / var
    return out


def return_autocov(series: ReturnSeries, tau_grid: np.ndarray) -> np.ndarray:
    """Signed-return autocovariance (market-efficiency proxy)."""
    return autocov(series, 1.0, tau_grid, absolute=False)


def sqreturn_autocov(series: ReturnSeries, tau_grid: np.ndarray) -> np.ndarray:
    """Squared-return autocovariance (volatility-clustering proxy)."""
    return autocov(series, 2.0, tau_grid)


class DiffusionFit(NamedTuple):
    mu: float
    sigma0: float


def diffusion_exponent(
    prices: np.ndarray,
    delta_grid: np.ndarray,
    overlapping: bool = False,
) -> DiffusionFit:
    """Least-squares fit of log std(r_delta) = log sigma0 + mu log delta.

    A pure random walk gives mu = 0.5; the all-chartist limit is
    superdiffusive, the all-fundamentalist limit subdiffusive.
    """
    delta_grid = np.asarray(delta_grid, dtype=int)
    if len(delta_grid) < 4:
        raise ValueError("need at least 4 grid points for a fit")
    stds = np.array(
        [
            extract_returns(prices, int(d), overlapping=overlapping).values.std()
            for d in delta_grid
        ]
    )
    slope, intercept = np.polyfit(np.log(delta_grid), np.log(stds), 1)
    return DiffusionFit(mu=float(slope), sigma0=float(np.exp(intercept)))


NORM_NONE = "none"
NORM_OWN = "own_variance"
NORM_CHARTIST = "chartist_variance"


@dataclass(frozen=True)
class ReturnHistogram:
    edges: np.ndarray
    mass: np.ndarray  # probability mass per bin, sums to 1
    normalization: str

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def density(self) -> np.ndarray:
        return self.mass / np.diff(self.edges)


def return_pdf(
    series: ReturnSeries,
    bins: int = 100,
    normalization: str = NORM_OWN,
    chartist_variance: float | None = None,
    span_stds: float = 10.0,
) -> ReturnHistogram:
    """Histogram of (optionally rescaled) returns over linear bins
    spanning +-span_stds standard deviations of the rescaled values.

    chartist_variance mode divides returns by the square root of the
    supplied all-chartist return variance at the series' delta.
    """
    r = series.values
    if len(r) == 0:
        raise ValueError("empty series")
    if normalization == NORM_NONE:
        y = r
    elif normalization == NORM_OWN:
        y = r / r.std()
    elif normalization == NORM_CHARTIST:
        if chartist_variance is None or chartist_variance <= 0:
            raise ValueError(
                "chartist_variance normalization needs the variance value"
            )
        y = r / np.sqrt(chartist_variance)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    lim = span_stds * y.std()
    counts, edges = np.histogram(y, bins=bins, range=(-lim, lim))
    # clip outliers into the edge bins so masses sum to 1 exactly
    n_out_lo = np.sum(y < -lim)
    n_out_hi = np.sum(y > lim)
    counts = counts.astype(float)
    counts[0] += n_out_lo
    counts[-1] += n_out_hi
    mass = counts / counts.sum()
    return ReturnHistogram(edges=edges, mass=mass, normalization=normalization)


def log_binned_pdf(
    values: np.ndarray, bins: int = 40, x_min: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Density of |values| on logarithmically spaced bins, for tail plots.
    Returns (bin centers, density)."""
    a = np.abs(np.asarray(values, dtype=float))
    a = a[a > 0]
    if a.size == 0:
        raise ValueError("no nonzero values")
    lo = x_min if x_min is not None else np.quantile(a, 0.01)
    edges = np.geomspace(max(lo, a.min()), a.max() * (1 + 1e-12), bins + 1)
    counts, _ = np.histogram(a, bins=edges)
    widths = np.diff(edges)
    density = counts / (counts.sum() * widths)
    centers = np.sqrt(edges[:-1] * edges[1:])
    return centers, density


def excess_kurtosis(values: np.ndarray, bias_corrected: bool = True) -> float:
    """Sample excess kurtosis E[(r-mu)^4]/Var^2 - 3 with the standard
    small-sample correction."""
    r = np.asarray(values, dtype=float)
    n = len(r)
    if n < 4:
        raise ValueError("need at least 4 samples")
    c = r - r.mean()
    m2 = np.mean(c**2)
    if m2 == 0:
        raise ValueError("degenerate series: zero variance")
    g2 = np.mean(c**4) / m2**2 - 3.0
    if not bias_corrected:
        return float(g2)
    return float(((n + 1) * g2 + 6.0) * (n - 1) / ((n - 2) * (n - 3)))


class RareEventResult(NamedTuple):
    exact: float
    approx: float
    n_threshold: float


def rare_event_probability(beta: float, n: int) -> RareEventResult:
    """Probability of observing at least one event of per-sample
    probability beta among n samples: exact binomial complement
    1 - (1-beta)^n, its exponential approximation 1 - exp(-n*beta), and
    the sample size 1/beta above which rare events become likely."""
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0,1], got {beta}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    exact = 1.0 - (1.0 - beta) ** n
    approx = 1.0 - np.exp(-n * beta)
    return RareEventResult(exact=float(exact), approx=float(approx),
                           n_threshold=1.0 / beta)


def batch_se(
    values: np.ndarray, stat: Callable[[np.ndarray], float], n_batches: int = 32
) -> tuple[float, float]:
    """(estimate on the full series, batch-means standard error).

    Splits the series into contiguous batches and uses the spread of the
    per-batch statistic; robust to the autocorrelation of simulated paths
    as long as batches are much longer than the correlation time.
    """
    values = np.asarray(values)
    if len(values) < 2 * n_batches:
        raise ValueError("series too short for the requested batch count")
    batches = np.array_split(values, n_batches)
    stats = np.array([stat(b) for b in batches])
    se = stats.std(ddof=1) / np.sqrt(n_batches)
    return float(stat(values)), float(se)


def tail_probability(values: np.ndarray, threshold_stds: float = 4.0) -> float:
    """Fraction of samples with |r| beyond threshold_stds standard
    deviations of the sample itself."""
    r = np.asarray(values, dtype=float)
    return float(np.mean(np.abs(r) > threshold_stds * r.std()))
