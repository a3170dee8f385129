"""Numba kernels for the inner simulation loop.

One kernel per dynamics mode.  Each consumes pre-generated noise arrays
for a chunk of steps and returns the updated scalar state, so the Python
driver stays in charge of RNG streams, chunking and output assembly.
The per-step logic mirrors the pure-Python step functions in state.py /
herding.py / multiplicative.py / soi.py exactly; tests assert bit-level
agreement between the two paths.

Composition order per step: (1) herding update of the populations,
(2) price step using the post-update x, (3) fundamental-price step,
(4) SOI agent-count update every update_period steps.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_DIVERGED = 1


@njit(cache=True)
def _window_variance(win):
    n = win.shape[0]
    mean = 0.0
    for j in range(n):
        mean += win[j]
    mean /= n
    s = 0.0
    for j in range(n):
        d = win[j] - mean
        s += d * d
    return s / (n - 1)


@njit(cache=True)
def _herding_update(n_c, n_act, base_rate, eps, bias, u_pick, u_switch):
    denom = n_act - 1 if n_act > 1 else 1
    if u_pick * n_act < n_c:
        p_cf = base_rate * (eps + (n_act - n_c) / denom) * bias
        if u_switch < p_cf:
            n_c -= 1
    else:
        p_fc = base_rate * (eps + n_c / denom)
        if u_switch < p_fc:
            n_c += 1
    return n_c


@njit(cache=True)
def _soi_update(n_c, n_act, ind, theta_in, theta_out, n_min, n_max, u_type):
    if ind > theta_in and n_act < n_max:
        n_act += 1
        if u_type * (n_act + 1) < n_c + 1:  # entering type ~ (n_c+1, n_f+1)
            n_c += 1
    elif ind < theta_out and n_act > n_min:
        if u_type * n_act < n_c:  # exiting agent uniform among current
            n_c -= 1
        n_act -= 1
    return n_c, n_act


@njit(cache=True)
def run_chunk_linear(
    n_steps,
    t0,
    p,
    hist,
    pos,
    hist_sum,
    n_c,
    n_act,
    p_f,
    win,
    wpos,
    b,
    gamma,
    sigma,
    sigma_pf,
    base_rate,
    eps,
    bias,
    freeze_x,
    soi_on,
    theta_in,
    theta_out,
    n_min,
    n_max,
    period,
    xi,
    xi_pf,
    u_pick,
    u_switch,
    u_type,
    out_p,
    out_x,
    out_n,
    out_pf,
):
    M = hist.shape[0]
    t_win = win.shape[0]
    for i in range(n_steps):
        if not freeze_x:
            n_c = _herding_update(
                n_c, n_act, base_rate, eps, bias, u_pick[i], u_switch[i]
            )
        x = n_c / n_act
        p_m = hist_sum / M
        dp = (
            x * b / (M - 1) * (p - p_m)
            + (1.0 - x) * gamma * (p_f - p)
            + sigma * xi[i]
        )
        hist_sum += p - hist[pos]
        hist[pos] = p
        pos += 1
        if pos == M:
            pos = 0
            hist_sum = 0.0  # resync the running sum to kill fp drift
            for j in range(M):
                hist_sum += hist[j]
        p = p + dp
        if sigma_pf > 0.0:
            p_f += sigma_pf * xi_pf[i]
        win[wpos] = p
        wpos += 1
        if wpos == t_win:
            wpos = 0
        t = t0 + i + 1
        if soi_on and t % period == 0 and t >= t_win:
            ind = _window_variance(win)
            n_c, n_act = _soi_update(
                n_c, n_act, ind, theta_in, theta_out, n_min, n_max, u_type[i]
            )
        out_p[i] = p
        out_x[i] = n_c / n_act
        out_n[i] = n_act
        out_pf[i] = p_f
    return p, pos, hist_sum, n_c, n_act, p_f, wpos


@njit(cache=True)
def run_chunk_multiplicative(
    n_steps,
    t0,
    lp,
    hist,
    pos,
    hist_sum,
    n_c,
    n_act,
    p_f,
    win,
    wpos,
    b,
    gamma,
    sigma,
    sigma_pf,
    by_price,
    ratio_min,
    ratio_max,
    base_rate,
    eps,
    bias,
    freeze_x,
    soi_on,
    theta_in,
    theta_out,
    n_min,
    n_max,
    period,
    xi,
    xi_pf,
    u_pick,
    u_switch,
    u_type,
    out_p,
    out_x,
    out_n,
    out_pf,
    out_ed,
):
    M = hist.shape[0]
    t_win = win.shape[0]
    status = STATUS_OK
    stop = n_steps
    for i in range(n_steps):
        if not freeze_x:
            n_c = _herding_update(
                n_c, n_act, base_rate, eps, bias, u_pick[i], u_switch[i]
            )
        x = n_c / n_act
        p = np.exp(lp)
        p_m = hist_sum / M
        if by_price:
            ed = (
                x * b / (M - 1) * (p - p_m) / p
                + (1.0 - x) * gamma * (p_f - p) / p
            )
        else:
            ed = (
                x * b / (M - 1) * (p - p_m) / p_m
                + (1.0 - x) * gamma * (p_f - p) / p_f
            )
        hist_sum += p - hist[pos]
        hist[pos] = p
        pos += 1
        if pos == M:
            pos = 0
            hist_sum = 0.0
            for j in range(M):
                hist_sum += hist[j]
        lp = lp + ed + sigma * xi[i]
        p = np.exp(lp)
        if sigma_pf > 0.0:
            p_f += sigma_pf * xi_pf[i]
        win[wpos] = lp  # indicator on log-prices in multiplicative mode
        wpos += 1
        if wpos == t_win:
            wpos = 0
        t = t0 + i + 1
        if soi_on and t % period == 0 and t >= t_win:
            ind = _window_variance(win)
            n_c, n_act = _soi_update(
                n_c, n_act, ind, theta_in, theta_out, n_min, n_max, u_type[i]
            )
        out_p[i] = p
        out_x[i] = n_c / n_act
        out_n[i] = n_act
        out_pf[i] = p_f
        out_ed[i] = ed
        ratio = p / p_f
        if not np.isfinite(ratio) or ratio < ratio_min or ratio > ratio_max:
            status = STATUS_DIVERGED
            stop = i + 1
            break
    return status, stop, lp, pos, hist_sum, n_c, n_act, p_f, wpos
