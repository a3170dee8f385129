"""Returns as an x-weighted superposition of the two limit-case Gaussians.

For a frozen chartist fraction x the approximate return is
r = x r_c + (1-x) r_f with independent zero-mean Gaussian components, so
p(r|x) is Gaussian with variance x^2 sigma_c^2 + (1-x)^2 sigma_f^2.
Averaging over the stationary population distribution f_eq(x) produces a
Gaussian mixture: fat-tailed, but by construction unable to reproduce
volatility clustering.  Both the successes and the failure modes of this
approximation are reproduced (and asserted) downstream.

The input variances come from the analytic module (AR(1) return variance
for the fundamentalist side, companion-matrix variance for the chartist
side), never from fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erfc

from .herding import PopulationDistribution


def point_mass(x: float) -> PopulationDistribution:
    """Degenerate population distribution concentrated at x."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0,1], got {x}")
    return PopulationDistribution(
        edges=np.array([x, x]), mass=np.array([1.0])
    )


def conditional_variance(x: float, sigma_f2: float, sigma_c2: float) -> float:
    """Variance of r = x r_c + (1-x) r_f for independent components."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0,1], got {x}")
    if sigma_f2 <= 0 or sigma_c2 <= 0:
        raise ValueError("variances must be positive")
    return x * x * sigma_c2 + (1.0 - x) ** 2 * sigma_f2


def conditional_return_pdf(
    x: float, sigma_f2: float, sigma_c2: float
) -> Callable[[np.ndarray], np.ndarray]:
    """Zero-mean Gaussian density of the conditional return."""
    var = conditional_variance(x, sigma_f2, sigma_c2)
    norm = 1.0 / math.sqrt(2.0 * math.pi * var)

    def pdf(r):
        r = np.asarray(r, dtype=float)
        return norm * np.exp(-r * r / (2.0 * var))

    return pdf


def _bin_variances(
    feq: PopulationDistribution, sigma_f2: float, sigma_c2: float
) -> np.ndarray:
    return np.array(
        [conditional_variance(float(x), sigma_f2, sigma_c2) for x in feq.centers]
    )


@dataclass(frozen=True)
class MixturePdf:
    grid: np.ndarray
    density: np.ndarray

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))


def _check_feq(feq: PopulationDistribution) -> None:
    if abs(feq.mass.sum() - 1.0) > 1e-9:
        raise ValueError("population distribution must be normalized")


def mixture_return_pdf(
    feq: PopulationDistribution,
    sigma_f2: float,
    sigma_c2: float,
    grid: np.ndarray | None = None,
    n_grid: int = 2048,
) -> MixturePdf:
    """E_x[p(r|x)] by midpoint quadrature over the f_eq histogram bins.

    The default grid is symmetric about 0 and wide enough to cover the
    widest mixture component, so the tabulated density integrates to 1
    within 1e-6.
    """
    _check_feq(feq)
    variances = _bin_variances(feq, sigma_f2, sigma_c2)
    if grid is None:
        lim = 8.0 * math.sqrt(variances[feq.mass > 0].max())
        grid = np.linspace(-lim, lim, n_grid)
    else:
        grid = np.asarray(grid, dtype=float)
        if abs(grid[0] + grid[-1]) > 1e-9 * max(1.0, abs(grid[-1])):
            raise ValueError("grid must be symmetric about 0")
    density = np.zeros_like(grid)
    for w, var in zip(feq.mass, variances):
        if w == 0:
            continue
        density += (
            w / math.sqrt(2.0 * math.pi * var) * np.exp(-grid**2 / (2.0 * var))
        )
    return MixturePdf(grid=grid, density=density)


def mixture_moments(
    feq: PopulationDistribution, sigma_f2: float, sigma_c2: float
) -> tuple[float, float]:
    """(variance, fourth moment) of the mixture, in closed form."""
    _check_feq(feq)
    variances = _bin_variances(feq, sigma_f2, sigma_c2)
    m2 = float(feq.mass @ variances)
    m4 = float(3.0 * feq.mass @ variances**2)
    return m2, m4


def mixture_excess_kurtosis(
    feq: PopulationDistribution, sigma_f2: float, sigma_c2: float
) -> float:
    """Always >= 0, with equality iff the mixture is a single Gaussian."""
    m2, m4 = mixture_moments(feq, sigma_f2, sigma_c2)
    return m4 / m2**2 - 3.0


def mixture_tail_probability(
    feq: PopulationDistribution,
    sigma_f2: float,
    sigma_c2: float,
    threshold: float,
) -> float:
    """P(|r| > threshold) of the mixture, exact via the Gaussian tail."""
    _check_feq(feq)
    variances = _bin_variances(feq, sigma_f2, sigma_c2)
    tails = erfc(threshold / np.sqrt(2.0 * variances))
    return float(feq.mass @ tails)


# ---------------------------------------------------------------------------
# approximate autocovariances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitMoments:
    """Second and fourth moments of the two limit-case return laws; the
    fourth moments default to the Gaussian relation M4 = 3 sigma^4."""

    sigma_f2: float
    sigma_c2: float
    m_f4: float | None = None
    m_c4: float | None = None

    def __post_init__(self):
        if self.sigma_f2 <= 0 or self.sigma_c2 <= 0:
            raise ValueError("variances must be positive")
        if self.m_f4 is not None and self.m_f4 <= 0:
            raise ValueError("fourth moments must be positive")
        if self.m_c4 is not None and self.m_c4 <= 0:
            raise ValueError("fourth moments must be positive")

    @property
    def fourth_f(self) -> float:
        return 3.0 * self.sigma_f2**2 if self.m_f4 is None else self.m_f4

    @property
    def fourth_c(self) -> float:
        return 3.0 * self.sigma_c2**2 if self.m_c4 is None else self.m_c4


def return_autocov_weights(
    x: float, sigma_f2: float, sigma_c2: float
) -> tuple[float, float]:
    """(w_c, w_f) weighting the limit-case return autocovariances; they
    sum to 1 for every x and variance ratio."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0,1], got {x}")
    vc = x * x * sigma_c2
    vf = (1.0 - x) ** 2 * sigma_f2
    tot = vc + vf
    return vc / tot, vf / tot


def approx_return_autocov(
    x: float, sigma_f2: float, sigma_c2: float, rho_f: float, rho_c: float
) -> float:
    """Superposition approximation of the return autocovariance at a
    frozen x; reduces to rho_f at x=0 and rho_c at x=1."""
    w_c, w_f = return_autocov_weights(x, sigma_f2, sigma_c2)
    return w_c * rho_c + w_f * rho_f


def sqreturn_autocov_weights(
    x: float, moments: LimitMoments
) -> tuple[float, float, float]:
    """(w_c, w_f, w_cross) for the squared-return autocovariance.

    From r = x r_c + (1-x) r_f with independent components:

        cov(r_t^2, r_{t+tau}^2) = x^4 Vc rho_{c^2} + (1-x)^4 Vf rho_{f^2}
                                + 4 x^2 (1-x)^2 s_c^2 s_f^2 rho_c rho_f

    with Vc = M_c^4 - sigma_c^4 (the variance of r_c^2) and likewise Vf;
    the weights are the three terms normalized by their sum, so they lie
    in [0,1] and sum to 1.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0,1], got {x}")
    v_c = moments.fourth_c - moments.sigma_c2**2
    v_f = moments.fourth_f - moments.sigma_f2**2
    if v_c <= 0 or v_f <= 0:
        raise ValueError("fourth moments must exceed the squared variance")
    a = x**4 * v_c
    b = (1.0 - x) ** 4 * v_f
    c = 4.0 * x**2 * (1.0 - x) ** 2 * moments.sigma_c2 * moments.sigma_f2
    tot = a + b + c
    return a / tot, b / tot, c / tot


def approx_sqreturn_autocov(
    x: float,
    moments: LimitMoments,
    rho_f: float,
    rho_c: float,
    rho_f_sq: float | None = None,
    rho_c_sq: float | None = None,
) -> float:
    """Superposition approximation of the squared-return autocovariance.

    The limit cases are Gaussian, where the squared-return autocovariance
    is the square of the return autocovariance; that relation is the
    default when rho_*_sq are not supplied.
    """
    if rho_f_sq is None:
        rho_f_sq = rho_f * rho_f
    if rho_c_sq is None:
        rho_c_sq = rho_c * rho_c
    w_c, w_f, w_x = sqreturn_autocov_weights(x, moments)
    return w_c * rho_c_sq + w_f * rho_f_sq + w_x * rho_c * rho_f


def averaged_autocovs(
    feq: PopulationDistribution,
    moments: LimitMoments,
    rho_f: float,
    rho_c: float,
    rho_f_sq: float | None = None,
    rho_c_sq: float | None = None,
) -> tuple[float, float]:
    """Quadrature of the two conditional autocovariances over f_eq:
    (return autocovariance, squared-return autocovariance)."""
    _check_feq(feq)
    rho_r = 0.0
    rho_r2 = 0.0
    for w, x in zip(feq.mass, feq.centers):
        if w == 0:
            continue
        rho_r += w * approx_return_autocov(
            float(x), moments.sigma_f2, moments.sigma_c2, rho_f, rho_c
        )
        rho_r2 += w * approx_sqreturn_autocov(
            float(x), moments, rho_f, rho_c, rho_f_sq, rho_c_sq
        )
    return rho_r, rho_r2
