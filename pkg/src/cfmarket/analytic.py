"""Closed-form results for the two limit cases of the linear dynamics.

All-fundamentalist limit (x=0): the price is a discrete AR(1),
p_{t+1} = (1-gamma) p_t + sigma xi_t (p_f = 0 w.l.o.g.), with explicit
second moment, return variance and autocovariances.

All-chartist limit (x=1): price differences follow an M-dimensional
companion-matrix recursion r_{t+1} = T r_t + eta_t with first row
a_k = a (M+1-k), a = b/(M(M-1)).  Return variances and autocovariances
are exact sums over the scalar impulse response s_n = (T^n)_{11}.

These are the oracles the simulation is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


# ---------------------------------------------------------------------------
# x = 0: AR(1) / discrete Ornstein-Uhlenbeck
# ---------------------------------------------------------------------------

def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0,1), got {gamma}")


def ar1_price_second_moment(gamma: float, sigma: float, t: float) -> float:
    """E[p_{t+1}^2] after t+1 noise kicks from p_0 = 0; t may be inf.

    sigma^2 * [(1-g)^-2 - (1-g)^(2t)] / [(1-g)^-2 - 1]
    """
    _check_gamma(gamma)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    lam = 1.0 - gamma
    transient = 0.0 if math.isinf(t) else lam ** (2 * t)
    return sigma**2 * (lam**-2 - transient) / (lam**-2 - 1.0)


def ar1_return_variance(gamma: float, sigma: float, delta: float) -> float:
    """Stationary Var[p_{t+delta} - p_t]; reduces to sigma^2*delta as
    gamma -> 0 and saturates at twice the price variance for large delta."""
    _check_gamma(gamma)
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    lam = 1.0 - gamma
    return sigma**2 * 2.0 * lam**-2 / (lam**-2 - 1.0) * (1.0 - lam**delta)


def ar1_return_autocov(gamma: float, delta: float, tau: float) -> float:
    """Exact normalized return autocovariance at lag tau >= delta:

        rho(tau) = -(1/2) (1-g)^(tau-delta) (1 - (1-g)^delta)

    Negative for all tau, with decay time 1/|ln(1-g)| ~ 1/gamma.
    """
    _check_gamma(gamma)
    if tau < delta:
        raise ValueError(f"need tau >= delta, got tau={tau}, delta={delta}")
    lam = 1.0 - gamma
    return -0.5 * lam ** (tau - delta) * (1.0 - lam**delta)


def ar1_return_autocov_smallgamma(gamma: float, delta: float, tau: float) -> float:
    """Leading small-gamma approximation -(gamma*delta/2) * exp(-tau*gamma)."""
    _check_gamma(gamma)
    return -0.5 * gamma * delta * math.exp(-tau * gamma)


def ar1_sqreturn_autocov(gamma: float, delta: float, tau: float) -> float:
    """Normalized squared-return autocovariance.  Returns of the AR(1)
    are jointly Gaussian, so corr(r_0^2, r_tau^2) = corr(r_0, r_tau)^2,
    which decays at twice the rate of the return autocovariance."""
    return ar1_return_autocov(gamma, delta, tau) ** 2


def ar1_sqreturn_autocov_decay(gamma: float) -> float:
    """Decay *rate* of the squared-return autocovariance: 2*gamma
    (decay time ~ 1/(2*gamma), half the return-autocovariance time).
    The prefactor is not computed; it is estimated empirically."""
    _check_gamma(gamma)
    return 2.0 * gamma


def ou_return_variance(gamma: float, sigma: float, delta: float) -> float:
    """Return variance of the continuum Ornstein-Uhlenbeck limit:
    sigma^2 (1 - exp(-gamma*delta)) / gamma."""
    _check_gamma(gamma)
    return sigma**2 * (1.0 - math.exp(-gamma * delta)) / gamma


def ou_continuum_check(
    gamma: float, sigma: float, delta: float
) -> tuple[float, float]:
    """(discrete return variance, OU return variance); the relative gap
    is O(gamma)."""
    return (
        ar1_return_variance(gamma, sigma, delta),
        ou_return_variance(gamma, sigma, delta),
    )


# ---------------------------------------------------------------------------
# x = 1: companion-matrix model
# ---------------------------------------------------------------------------

STATIONARITY_MARGIN = 1e-9


class NonStationaryModelError(ValueError):
    """Asymptotic query on a model whose spectrum reaches |1|."""


@dataclass(frozen=True)
class CompanionModel:
    """The M x M matrix T of the all-chartist limit with its spectrum."""

    b: float
    M: int
    a: float
    T: np.ndarray
    eigenvalues: np.ndarray
    stationary: bool

    def impulse_response(self, n: int) -> np.ndarray:
        """s_k = (T^k)_{11} for k = 0..n, via the scalar recursion
        s_k = sum_j a_j s_{k-j} implied by the companion structure."""
        coef = self.a * (self.M + 1 - np.arange(1, self.M + 1))
        s = np.zeros(n + 1)
        s[0] = 1.0
        for k in range(1, n + 1):
            m = min(k, self.M)
            s[k] = coef[:m] @ s[k - m:k][::-1]
        return s


def companion_model(b: float, M: int) -> CompanionModel:
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    if b < 0:
        raise ValueError(f"b must be >= 0, got {b}")
    a = b / (M * (M - 1))
    T = np.zeros((M, M))
    T[0, :] = a * (M + 1 - np.arange(1, M + 1))
    T[1:, :-1][np.diag_indices(M - 1)] = 1.0
    eig = np.linalg.eigvals(T)
    stationary = bool(np.max(np.abs(eig)) < 1.0 - STATIONARITY_MARGIN)
    return CompanionModel(b=b, M=M, a=a, T=T, eigenvalues=eig, stationary=stationary)


def _window_coefficients(S: np.ndarray, w: int, delta: int) -> np.ndarray:
    """Coefficients C_j of the noise deviates xi_j (j = 1..w+delta) in the
    return p_{w+delta} - p_w, where S is the prefix sum of the impulse
    response (S[n] = sum_{i<n} s_i)."""
    j = np.arange(1, w + delta + 1)
    lo = np.maximum(w + 1 - j, 0)
    return S[w + delta - j + 1] - S[lo]


def _require_horizon(model: CompanionModel, delta: int, t: int | None) -> int:
    if t is not None:
        return t
    if not model.stationary:
        raise NonStationaryModelError(
            f"asymptotic query rejected: spectral radius of T is "
            f"{np.max(np.abs(model.eigenvalues)):.6f} for b={model.b}, M={model.M}"
        )
    # geometric tail: run until the start-time dependence is negligible
    rho = float(np.max(np.abs(model.eigenvalues)))
    horizon = max(4 * model.M, 256)
    if rho > 0:
        horizon = max(horizon, int(math.log(1e-12) / math.log(rho)) + delta)
    return horizon


def chartist_return_variance(
    model: CompanionModel,
    sigma: float,
    delta: int,
    t: int | None = None,
) -> float:
    """Exact Var[p_{t+delta} - p_t] for the all-chartist dynamics started
    from a flat history.  t=None requests the stationary (large-t) value
    and requires a stationary model."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    w = _require_horizon(model, delta, t)
    s = model.impulse_response(w + delta)
    S = np.concatenate([[0.0], np.cumsum(s)])
    c = _window_coefficients(S, w, delta)
    return sigma**2 * float(c @ c)


def chartist_return_autocov(
    model: CompanionModel,
    sigma: float,
    delta: int,
    tau: int,
    t: int | None = None,
) -> float:
    """Normalized stationary autocovariance of delta-lag returns at lag
    tau.  Nonnegative for every tau: all impulse-response terms s_n are
    nonnegative, so the coefficient overlap is a sum of products of
    nonnegative numbers."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    w = _require_horizon(model, delta, t)
    s = model.impulse_response(w + tau + delta)
    S = np.concatenate([[0.0], np.cumsum(s)])
    c0 = _window_coefficients(S, w, delta)
    c1 = _window_coefficients(S, w + tau, delta)
    var = float(c0 @ c0)
    cov = float(c0 @ c1[: len(c0)])
    return cov / var


def chartist_return_variance_curve(
    model: CompanionModel,
    sigma: float,
    deltas: np.ndarray,
    t: int | None = None,
) -> np.ndarray:
    """Vectorized chartist_return_variance over a delta grid (shared
    impulse response)."""
    deltas = np.asarray(deltas, dtype=int)
    dmax = int(deltas.max())
    w = _require_horizon(model, dmax, t)
    s = model.impulse_response(w + dmax)
    S = np.concatenate([[0.0], np.cumsum(s)])
    out = np.empty(len(deltas))
    for i, d in enumerate(deltas):
        c = _window_coefficients(S, w, int(d))
        out[i] = sigma**2 * float(c @ c)
    return out
