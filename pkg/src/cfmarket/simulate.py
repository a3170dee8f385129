"""Run harness: chunked, seeded simulation of the full model.

Bit-reproducible for a fixed (params, seed, stream, t_max): noise is
drawn in fixed-size chunks from a dedicated PCG64 stream, so the output
never depends on chunk scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .params import BY_PRICE, MULTIPLICATIVE, ModelParams
from .rng import make_rng
from .state import make_state

CHUNK = 1 << 19

# divergence-guard defaults, as ratios to the fundamental price
RATIO_MIN = 1e-6
RATIO_MAX = 1e6


class DivergenceError(RuntimeError):
    """Multiplicative run left the admissible price band."""

    def __init__(self, t: int, p: float, x: float, ed: float):
        self.t = t
        self.p = p
        self.x = x
        self.ed = ed
        super().__init__(
            f"price diverged at t={t}: p={p:.6g}, x={x:.4f}, ED={ed:.6g}"
        )

    def diagnostics(self) -> dict:
        return {"t": self.t, "p": self.p, "x": self.x, "ed": self.ed}


@dataclass
class PriceSeries:
    """Simulated path after warmup, with population and p_f alongside."""

    t: np.ndarray
    p: np.ndarray
    x: np.ndarray
    n: np.ndarray
    p_f: np.ndarray
    ed: np.ndarray | None
    params: ModelParams
    seed: int
    stream: int = 0
    warmup: int = 0

    def __len__(self) -> int:
        return len(self.p)


def simulate(
    params: ModelParams,
    seed: int,
    t_max: int,
    warmup: int | None = None,
    x0: float = 0.5,
    p0: float | None = None,
    freeze_x: bool = False,
    stream: int = 0,
    guard_bounds: tuple[float, float] = (RATIO_MIN, RATIO_MAX),
) -> PriceSeries:
    """Simulate t_max steps and return the path with the first `warmup`
    steps discarded.  Raises DivergenceError in multiplicative mode when
    the price leaves [p_f*ratio_min, p_f*ratio_max]."""
    if warmup is None:
        warmup = params.warmup_default
    if not t_max > warmup >= 0:
        raise ValueError(f"need t_max > warmup >= 0, got {t_max}, {warmup}")
    if p0 is None:
        p0 = params.p_f
    state = make_state(params, p0, x0)

    mult = params.dynamics_mode == MULTIPLICATIVE
    ratio_min, ratio_max = guard_bounds
    if mult and not ratio_min <= p0 / params.p_f <= ratio_max:
        raise DivergenceError(0, p0, x0, 0.0)

    rng = make_rng(seed, stream)
    h = params.herding
    soi = params.soi
    soi_on = soi is not None
    t_win = soi.T_window if soi_on else 2
    win0 = math.log(p0) if mult else p0
    win = np.full(t_win, win0, dtype=np.float64)
    wpos = 0
    theta_in = soi.theta_in if soi_on else 0.0
    theta_out = soi.theta_out if soi_on else 0.0
    n_min = soi.n_min if soi_on else 0
    n_max = soi.n_max if soi_on else 0
    period = soi.update_period if soi_on else 1

    out_p = np.empty(t_max)
    out_x = np.empty(t_max)
    out_n = np.empty(t_max, dtype=np.int64)
    out_pf = np.empty(t_max)
    out_ed = np.empty(t_max) if mult else None

    p = state.p
    lp = state.log_p
    hist = state.history.copy()
    pos = state.pos
    hist_sum = float(hist.sum())
    n_c = state.n_chartists
    n_act = state.n_active
    p_f = state.p_f_current

    done = 0
    while done < t_max:
        n = min(CHUNK, t_max - done)
        xi = rng.standard_normal(n)
        xi_pf = rng.standard_normal(n)
        u_pick = rng.random(n)
        u_switch = rng.random(n)
        u_type = rng.random(n)
        if mult:
            (status, stop, lp, pos, hist_sum, n_c, n_act, p_f, wpos) = (
                kernels.run_chunk_multiplicative(
                    n, done, lp, hist, pos, hist_sum, n_c, n_act, p_f,
                    win, wpos,
                    params.b, params.gamma, params.sigma, params.sigma_pf,
                    params.ed_normalization == BY_PRICE,
                    ratio_min, ratio_max,
                    h.base_rate, h.epsilon, h.bias, freeze_x,
                    soi_on, theta_in, theta_out, n_min, n_max, period,
                    xi, xi_pf, u_pick, u_switch, u_type,
                    out_p[done:], out_x[done:], out_n[done:], out_pf[done:],
                    out_ed[done:],
                )
            )
            if status == kernels.STATUS_DIVERGED:
                k = done + stop - 1
                raise DivergenceError(
                    k + 1, out_p[k], out_x[k], out_ed[k]
                )
        else:
            (p, pos, hist_sum, n_c, n_act, p_f, wpos) = kernels.run_chunk_linear(
                n, done, p, hist, pos, hist_sum, n_c, n_act, p_f,
                win, wpos,
                params.b, params.gamma, params.sigma, params.sigma_pf,
                h.base_rate, h.epsilon, h.bias, freeze_x,
                soi_on, theta_in, theta_out, n_min, n_max, period,
                xi, xi_pf, u_pick, u_switch, u_type,
                out_p[done:], out_x[done:], out_n[done:], out_pf[done:],
            )
        done += n

    sl = slice(warmup, t_max)
    return PriceSeries(
        t=np.arange(warmup + 1, t_max + 1, dtype=np.int64),
        p=out_p[sl],
        x=out_x[sl],
        n=out_n[sl],
        p_f=out_pf[sl],
        ed=out_ed[sl] if mult else None,
        params=params,
        seed=seed,
        stream=stream,
        warmup=warmup,
    )
