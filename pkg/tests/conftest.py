"""Shared fixtures and pure-Python reference implementations.

The reference simulator below mirrors the numba kernels operation for
operation (including the running-sum moving average and its resync on
ring wrap), so tests can assert bit-level agreement between the two
paths rather than approximate closeness.
"""

from __future__ import annotations

import numpy as np
import pytest

from cfmarket.params import BY_PRICE, MULTIPLICATIVE, ModelParams
from cfmarket.rng import make_rng
from cfmarket.simulate import CHUNK, RATIO_MAX, RATIO_MIN, DivergenceError


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure simulation,
    not compilation."""
    from cfmarket.simulate import simulate

    simulate(ModelParams(), seed=0, t_max=64, warmup=0)
    simulate(
        ModelParams(b=1.0, p_f=1.0, sigma=0.001,
                    dynamics_mode=MULTIPLICATIVE),
        seed=0, t_max=64, warmup=0,
    )


def reference_simulate(
    params: ModelParams,
    seed: int,
    t_max: int,
    warmup: int = 0,
    x0: float = 0.5,
    p0: float | None = None,
    freeze_x: bool = False,
    stream: int = 0,
):
    """Pure-Python mirror of simulate(); returns (p, x, n, p_f) arrays."""
    import math

    if p0 is None:
        p0 = params.p_f
    mult = params.dynamics_mode == MULTIPLICATIVE
    by_price = params.ed_normalization == BY_PRICE
    h = params.herding
    soi = params.soi
    soi_on = soi is not None
    t_win = soi.T_window if soi_on else 2
    win = np.full(t_win, math.log(p0) if mult else p0)
    wpos = 0

    M = params.M
    hist = np.full(M, float(p0))
    pos = 0
    hist_sum = float(p0) * M
    n_c = int(round(x0 * params.N))
    n_act = params.N
    p = float(p0)
    lp = math.log(p0) if mult else 0.0
    p_f = params.p_f

    rng = make_rng(seed, stream)
    out_p = np.empty(t_max)
    out_x = np.empty(t_max)
    out_n = np.empty(t_max, dtype=np.int64)
    out_pf = np.empty(t_max)

    done = 0
    while done < t_max:
        n = min(CHUNK, t_max - done)
        xi = rng.standard_normal(n)
        xi_pf = rng.standard_normal(n)
        u_pick = rng.random(n)
        u_switch = rng.random(n)
        u_type = rng.random(n)
        for i in range(n):
            if not freeze_x:
                denom = n_act - 1 if n_act > 1 else 1
                if u_pick[i] * n_act < n_c:
                    p_cf = h.base_rate * (h.epsilon + (n_act - n_c) / denom) * h.bias
                    if u_switch[i] < p_cf:
                        n_c -= 1
                else:
                    p_fc = h.base_rate * (h.epsilon + n_c / denom)
                    if u_switch[i] < p_fc:
                        n_c += 1
            x = n_c / n_act
            if mult:
                p = math.exp(lp)
            p_m = hist_sum / M
            if mult:
                if by_price:
                    ed = (x * params.b / (M - 1) * (p - p_m) / p
                          + (1.0 - x) * params.gamma * (p_f - p) / p)
                else:
                    ed = (x * params.b / (M - 1) * (p - p_m) / p_m
                          + (1.0 - x) * params.gamma * (p_f - p) / p_f)
            else:
                dp = (x * params.b / (M - 1) * (p - p_m)
                      + (1.0 - x) * params.gamma * (p_f - p)
                      + params.sigma * xi[i])
            hist_sum += p - hist[pos]
            hist[pos] = p
            pos += 1
            if pos == M:
                pos = 0
                hist_sum = 0.0
                for j in range(M):
                    hist_sum += hist[j]
            if mult:
                lp = lp + ed + params.sigma * xi[i]
                p = math.exp(lp)
            else:
                p = p + dp
            if params.sigma_pf > 0.0:
                p_f += params.sigma_pf * xi_pf[i]
            win[wpos] = lp if mult else p
            wpos += 1
            if wpos == t_win:
                wpos = 0
            t = done + i + 1
            if soi_on and t % soi.update_period == 0 and t >= t_win:
                # sequential mean/ssd, matching the kernel's summation order
                mean = 0.0
                for j in range(t_win):
                    mean += win[j]
                mean /= t_win
                ssd = 0.0
                for j in range(t_win):
                    dd = win[j] - mean
                    ssd += dd * dd
                ind = ssd / (t_win - 1)
                if ind > soi.theta_in and n_act < soi.n_max:
                    n_act += 1
                    if u_type[i] * (n_act + 1) < n_c + 1:
                        n_c += 1
                elif ind < soi.theta_out and n_act > soi.n_min:
                    if u_type[i] * n_act < n_c:
                        n_c -= 1
                    n_act -= 1
            out_p[done + i] = p
            out_x[done + i] = n_c / n_act
            out_n[done + i] = n_act
            out_pf[done + i] = p_f
            if mult:
                ratio = p / p_f
                if not np.isfinite(ratio) or ratio < RATIO_MIN or ratio > RATIO_MAX:
                    raise DivergenceError(t, p, x, ed)
        done += n

    sl = slice(warmup, t_max)
    return out_p[sl], out_x[sl], out_n[sl], out_pf[sl]
