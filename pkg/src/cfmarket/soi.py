"""Self-Organized Intermittency: volatility-driven entry and exit of
agents, pushing N(t) toward the quasi-critical N* where the stylized
facts live.

The indicator is the sample variance of a short price window (log-prices
in multiplicative mode, where the dynamics is scale free).  One agent
enters when the indicator exceeds theta_in, one leaves when it falls
below theta_out; checks run every update_period steps.
"""

from __future__ import annotations

import numpy as np

from .herding import equilibrium_mean
from .params import MULTIPLICATIVE, ModelParams, SoiParams
from .rng import make_rng
from .simulate import simulate
from .state import MarketState


def volatility_indicator(prices: np.ndarray) -> float:
    """Sample variance (1/(T-1) normalization) of a full window."""
    w = np.asarray(prices, dtype=float)
    if len(w) < 2:
        raise ValueError(f"window too short: {len(w)} < 2")
    return float(w.var(ddof=1))


def update_agent_count(
    state: MarketState,
    soi: SoiParams,
    indicator: float,
    rng: np.random.Generator,
) -> MarketState:
    """One entry/exit decision; mutates and returns state.

    The entering agent's type is sampled proportional to the smoothed
    counts (n_c+1, n_f+1); an exiting agent is picked uniformly.
    """
    u = rng.random()
    apply_agent_count_update(state, soi, indicator, u)
    return state


def apply_agent_count_update(
    state: MarketState, soi: SoiParams, indicator: float, u: float
) -> None:
    """Deterministic core of update_agent_count given one uniform."""
    if indicator > soi.theta_in and state.n_active < soi.n_max:
        state.n_active += 1
        if u * (state.n_active + 1) < state.n_chartists + 1:
            state.n_chartists += 1
        else:
            state.n_fundamentalists += 1
    elif indicator < soi.theta_out and state.n_active > soi.n_min:
        if u * state.n_active < state.n_chartists:
            state.n_chartists -= 1
        else:
            state.n_fundamentalists -= 1
        state.n_active -= 1


def indicator_distribution(
    params: ModelParams,
    n_frozen: int,
    seed: int,
    t_max: int = 200_000,
    t_window: int = 20,
    stream: int = 0,
) -> np.ndarray:
    """Sampled indicator values from a frozen-N run, for threshold
    calibration.  Uses log-prices in multiplicative mode and starts the
    population at its equilibrium mean, since the chain mixes slowly."""
    p = params.with_(N=n_frozen, soi=None)
    x0 = equilibrium_mean(n_frozen, p.herding)
    series = simulate(p, seed=seed, t_max=t_max, x0=x0, stream=stream)
    vals = (
        np.log(series.p) if p.dynamics_mode == MULTIPLICATIVE else series.p
    )
    n_win = len(vals) // t_window
    windows = vals[: n_win * t_window].reshape(n_win, t_window)
    return windows.var(axis=1, ddof=1)


def calibrate_thresholds(
    params: ModelParams,
    seed: int = 7,
    n_grid: tuple[int, int, int] = (50, 500, 5000),
    t_window: int = 100,
    q_out: float = 0.25,
    q_in: float = 0.85,
    t_max: int = 2_000_000,
    **soi_kw,
) -> SoiParams:
    """Place (theta_out, theta_in) at quantiles of the indicator measured
    at the middle frozen N, so entry and exit balance there by
    construction.  The volatility bursts that exceed theta_in come from
    chartist excursions, which die out as N grows (the population chain
    slows down and freezes); quiet windows below theta_out occur at
    roughly constant rate.  Net effect: too many agents and the count
    drains, too few and the frequent bursts recruit, with the fixed point
    at the calibration N.  The outer grid values are probed to verify the
    two rates actually separate the three regimes."""
    n_lo, n_star, n_hi = n_grid
    if not 0.0 < q_out < q_in < 1.0:
        raise ValueError(f"need 0 < q_out < q_in < 1, got {q_out}, {q_in}")
    samples = {
        n: indicator_distribution(
            params, n, seed=seed, t_max=t_max, t_window=t_window,
            stream=100 + i,
        )
        for i, n in enumerate((n_lo, n_star, n_hi))
    }
    theta_out = float(np.quantile(samples[n_star], q_out))
    theta_in = float(np.quantile(samples[n_star], q_in))
    up_lo = float(np.mean(samples[n_lo] > theta_in))
    down_lo = float(np.mean(samples[n_lo] < theta_out))
    up_hi = float(np.mean(samples[n_hi] > theta_in))
    down_hi = float(np.mean(samples[n_hi] < theta_out))
    if up_lo <= down_lo or up_hi >= down_hi:
        raise ValueError(
            "thresholds do not separate the frozen-N regimes: "
            f"net rate at N={n_lo} is {up_lo - down_lo:+.3f}, "
            f"at N={n_hi} is {up_hi - down_hi:+.3f}"
        )
    return SoiParams(
        T_window=t_window, theta_in=theta_in, theta_out=theta_out, **soi_kw
    )


def rescale_thresholds(
    soi: SoiParams, sigma_from: float, sigma_to: float
) -> SoiParams:
    """Convert calibrated thresholds between dynamics with different noise
    scales.  The indicator is a price variance, which scales with sigma^2
    at leading order; any residual mismatch (e.g. stronger chartist
    amplification near the stability edge) then shows up as a genuinely
    different entry/exit rate, not as a calibration artifact."""
    f = (sigma_to / sigma_from) ** 2
    return SoiParams(
        T_window=soi.T_window,
        theta_in=soi.theta_in * f,
        theta_out=soi.theta_out * f,
        n_min=soi.n_min,
        n_max=soi.n_max,
        update_period=soi.update_period,
    )


def time_to_band(
    n_series: np.ndarray, band: tuple[float, float]
) -> int | None:
    """First index at which N(t) enters [band[0], band[1]], or None."""
    lo, hi = band
    inside = (n_series >= lo) & (n_series <= hi)
    idx = np.flatnonzero(inside)
    return int(idx[0]) if idx.size else None
