"""Population dynamics of the chartist fraction x(t).

One uniformly chosen agent per step attempts a strategy switch with a
rate that grows with the size of the opposite camp (imitation) plus a
spontaneous floor.  The chartist -> fundamentalist direction carries a
multiplicative bias >= 1, which produces the two properties the price
dynamics needs: intermittent chartist bubbles at moderate N, and a
typical chartist fraction that shrinks as N grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import HerdingParams
from .state import MarketState


@dataclass(frozen=True)
class PopulationDistribution:
    """Normalized histogram of the chartist fraction on [0, 1]."""

    edges: np.ndarray  # length nbins+1
    mass: np.ndarray  # length nbins, sums to 1

    def __post_init__(self):
        if abs(self.mass.sum() - 1.0) > 1e-12:
            raise ValueError("histogram masses must sum to 1")
        if self.edges[0] < -1e-12 or self.edges[-1] > 1.0 + 1e-12:
            raise ValueError("support must be contained in [0,1]")

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def mean(self) -> float:
        return float(self.mass @ self.centers)


def switch_probabilities(
    n_c: int, n_f: int, h: HerdingParams
) -> tuple[float, float]:
    """(P(f->c), P(c->f)) for the currently picked agent.  N=1 degenerates
    to spontaneous switching only."""
    n = n_c + n_f
    denom = n - 1 if n > 1 else 1
    herd_c = n_c / denom if n > 1 else 0.0
    herd_f = n_f / denom if n > 1 else 0.0
    p_fc = h.base_rate * (h.epsilon + herd_c)
    p_cf = h.base_rate * (h.epsilon + herd_f) * h.bias
    return p_fc, p_cf


def step_population(
    state: MarketState, h: HerdingParams, rng: np.random.Generator
) -> MarketState:
    """One switching attempt; mutates and returns state."""
    if state.n_active < 1:
        raise ValueError("no active agents")
    u_pick = rng.random()
    u_switch = rng.random()
    apply_population_step(state, h, u_pick, u_switch)
    return state


def apply_population_step(
    state: MarketState, h: HerdingParams, u_pick: float, u_switch: float
) -> None:
    """Deterministic core of step_population given two uniform deviates."""
    p_fc, p_cf = switch_probabilities(state.n_chartists, state.n_fundamentalists, h)
    if u_pick < state.n_chartists / state.n_active:
        if u_switch < p_cf:
            state.n_chartists -= 1
            state.n_fundamentalists += 1
    else:
        if u_switch < p_fc:
            state.n_chartists += 1
            state.n_fundamentalists -= 1


def estimate_feq(x_series: np.ndarray, bins: int = 50) -> PopulationDistribution:
    """Normalized histogram of an x(t) series on [0, 1]."""
    x_series = np.asarray(x_series, dtype=float)
    if x_series.size == 0:
        raise ValueError("empty series")
    if x_series.size < 10 * bins:
        raise ValueError(
            f"series too short: need >= {10 * bins} samples for {bins} bins"
        )
    counts, edges = np.histogram(x_series, bins=bins, range=(0.0, 1.0))
    mass = counts / counts.sum()
    # renormalize away accumulated rounding so the invariant is exact
    mass = mass / mass.sum()
    return PopulationDistribution(edges=edges, mass=mass)


def stationary_distribution_exact(N: int, h: HerdingParams) -> np.ndarray:
    """Exact stationary law of n_chartists for the one-attempt-per-step
    birth-death chain; index k = number of chartists, length N+1.

    Used as an independent oracle for the Monte Carlo histogram and for
    threshold/bias tuning.  Requires epsilon > 0 (irreducible chain).
    """
    if h.epsilon <= 0:
        raise ValueError("exact stationary law needs epsilon > 0")
    if N < 2:
        return np.ones(N + 1) / (N + 1)
    k = np.arange(N, dtype=float)
    up = (N - k) / N * (h.epsilon + k / (N - 1))
    down = (k + 1) / N * h.bias * (h.epsilon + (N - k - 1) / (N - 1))
    log_ratio = np.log(up) - np.log(down)
    log_pi = np.concatenate([[0.0], np.cumsum(log_ratio)])
    log_pi -= log_pi.max()
    pi = np.exp(log_pi)
    return pi / pi.sum()


def equilibrium_mean(N: int, h: HerdingParams) -> float:
    """E[x] under the exact stationary law; the preferred starting point
    for long runs, since the chain mixes over ~N^2 steps.  Saturates at
    about epsilon/ln(bias) for large N and grows toward 1/2 as the
    imitation term takes over at small N."""
    pi = stationary_distribution_exact(N, h)
    return float(pi @ (np.arange(N + 1) / N))
