"""Multiplicative (Walras-law) price dynamics.

Relative price changes are proportional to the excess demand:

    ln p_{t+1} = ln p_t + ED + sigma xi_t

ED is dimensionless; two normalizations of the linear-model demand are
supported.  With by_price both agent types benchmark against the current
price; with by_reference chartists use the moving average and
fundamentalists the fundamental price (which systematically inflates the
chartist term above the moving average).
"""

from __future__ import annotations

import math

import numpy as np

from .params import BY_PRICE, BY_REFERENCE, ModelParams
from .simulate import RATIO_MAX, RATIO_MIN, DivergenceError, PriceSeries
from .state import MarketState, moving_average


def excess_demand(
    state: MarketState, params: ModelParams, mode: str | None = None
) -> float:
    """Dimensionless excess demand of the linear model under the given
    normalization (defaults to the params setting)."""
    mode = params.ed_normalization if mode is None else mode
    p = state.p
    p_m = moving_average(state)
    p_f = state.p_f_current
    x = state.x
    chart = x * params.b / (params.M - 1) * (p - p_m)
    fund = (1.0 - x) * params.gamma * (p_f - p)
    if mode == BY_PRICE:
        if p == 0:
            raise ZeroDivisionError("by_price normalization with p = 0")
        return chart / p + fund / p
    if mode == BY_REFERENCE:
        if p_m == 0 or p_f == 0:
            raise ZeroDivisionError(
                "by_reference normalization needs p_M != 0 and p_f != 0"
            )
        return chart / p_m + fund / p_f
    raise ValueError(f"unknown normalization {mode!r}")


def step_multiplicative(
    state: MarketState, params: ModelParams, xi: float
) -> MarketState:
    """One geometric price step; keeps the log-price as the primary state
    variable and exposes its exponential."""
    if not state.p > 0:
        raise ValueError(f"multiplicative step requires p > 0, got {state.p}")
    ed = excess_demand(state, params)
    new_lp = state.log_p + ed + params.sigma * xi
    state.advance(math.exp(new_lp), new_lp)
    return state


def linearized_step(
    state: MarketState, params: ModelParams, xi: float
) -> MarketState:
    """First-order expansion of the multiplicative step (by_price mode):
    identical to the linear dynamics except the noise scale is sigma*p_t.
    Used for comparison runs only."""
    if params.ed_normalization != BY_PRICE:
        raise ValueError("linearized step is defined for by_price mode")
    p_m = moving_average(state)
    x = state.x
    dp = (
        params.sigma * state.p * xi
        + x * params.b / (params.M - 1) * (state.p - p_m)
        + (1.0 - x) * params.gamma * (state.p_f_current - state.p)
    )
    new_p = state.p + dp
    state.advance(new_p, math.log(new_p) if new_p > 0 else 0.0)
    return state


def divergence_guard(
    state: MarketState,
    bounds: tuple[float, float] = (RATIO_MIN, RATIO_MAX),
) -> None:
    """Raise DivergenceError when p/p_f leaves [bounds[0], bounds[1]].
    The simulation kernel applies the same check every step."""
    ratio_min, ratio_max = bounds
    ratio = state.p / state.p_f_current
    if not np.isfinite(ratio) or ratio < ratio_min or ratio > ratio_max:
        raise DivergenceError(state.t, state.p, state.x, 0.0)


def omega_diagnostic(
    series: PriceSeries | np.ndarray, p_f: float | None = None
) -> float:
    """Relative fluctuation of the effective noise scale sigma*p_t:

        Omega = std(p) / E[p]

    Small Omega justifies replacing the multiplicative dynamics with the
    linear one.  Computed on a stationary segment of a calibrated run;
    invariant under rescaling of the price level, so p_f only enters as a
    sanity check that the segment actually hovers around it.
    """
    prices = series.p if isinstance(series, PriceSeries) else np.asarray(series)
    mean = float(prices.mean())
    if not mean > 0:
        raise ValueError(f"mean price must be > 0, got {mean}")
    if p_f is not None and not 0.5 < mean / p_f < 2.0:
        raise ValueError(
            f"segment mean {mean:.6g} is far from p_f={p_f:.6g}: "
            "not a stationary segment"
        )
    return float(prices.std()) / mean
