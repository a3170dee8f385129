"""Market state and the elementary linear-dynamics time step.

The price update is

    p_{t+1} - p_t = x * b/(M-1) * (p_t - p_M)
                  + (1-x) * gamma * (p_f - p_t) + sigma * xi_t

where p_M is the arithmetic mean of the M prices preceding p_t.  This
convention makes the all-chartist limit exactly equivalent to the M-lag
companion-matrix recursion on price differences (see analytic.py), since

    b/(M-1) * (p_t - p_M) = a * sum_{i=1..M} (M+1-i)(p_{t-i+1} - p_{t-i})

with a = b/(M(M-1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .params import MULTIPLICATIVE, ModelParams


@dataclass
class MarketState:
    """Mutable per-run state.  The history ring buffer holds the last M
    prices strictly before the current one (padded with p0 early on)."""

    t: int
    p: float
    history: np.ndarray
    pos: int  # ring index of the oldest history entry
    n_chartists: int
    n_fundamentalists: int
    n_active: int
    p_f_current: float
    log_p: float = 0.0  # maintained only in multiplicative mode

    @property
    def x(self) -> float:
        return self.n_chartists / self.n_active

    def advance(self, new_p: float, new_log_p: float = 0.0) -> None:
        """Push the current price into the history and install new_p."""
        self.history[self.pos] = self.p
        self.pos = (self.pos + 1) % len(self.history)
        self.p = new_p
        self.log_p = new_log_p
        self.t += 1


def make_state(params: ModelParams, p0: float, x0: float) -> MarketState:
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must be in [0,1], got {x0}")
    if params.dynamics_mode == MULTIPLICATIVE and not p0 > 0:
        raise ValueError(f"multiplicative mode requires p0 > 0, got {p0}")
    n_c = int(round(x0 * params.N))
    return MarketState(
        t=0,
        p=p0,
        history=np.full(params.M, float(p0)),
        pos=0,
        n_chartists=n_c,
        n_fundamentalists=params.N - n_c,
        n_active=params.N,
        p_f_current=params.p_f,
        log_p=math.log(p0) if params.dynamics_mode == MULTIPLICATIVE else 0.0,
    )


def moving_average(state: MarketState) -> float:
    """Arithmetic mean of the stored price history."""
    if len(state.history) == 0:
        raise ValueError("empty price history")
    return float(state.history.mean())


def step_linear(state: MarketState, params: ModelParams, xi: float) -> MarketState:
    """One linear price step with deviate xi; mutates and returns state."""
    p_m = moving_average(state)
    x = state.x
    dp = (
        x * params.b / (params.M - 1) * (state.p - p_m)
        + (1.0 - x) * params.gamma * (state.p_f_current - state.p)
        + params.sigma * xi
    )
    state.advance(state.p + dp)
    return state


def step_fundamental_price(
    state: MarketState, params: ModelParams, xi: float
) -> MarketState:
    """Random-walk update of the fundamental price (no-op for sigma_pf=0)."""
    if params.sigma_pf > 0.0:
        state.p_f_current += params.sigma_pf * xi
    return state
