"""Parameter containers for the chartist-fundamentalist market model.

All scalar knobs of the dynamics live here.  Defaults correspond to the
linear calibration used throughout the validation suite; the multiplicative
calibration (``b=1.7, gamma=0.01, sigma=0.00112``) is available via
:func:`multiplicative_defaults`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class HerdingParams:
    """Kirman-style switching rates between chartists and fundamentalists.

    One uniformly chosen agent per time step attempts a switch:

        P(f -> c) = base_rate * (epsilon + n_c / (N - 1))
        P(c -> f) = base_rate * (epsilon + n_f / (N - 1)) * bias

    ``bias >= 1`` tilts the stationary distribution of the chartist
    fraction toward 0, increasingly so for large N.
    """

    base_rate: float = 0.5
    epsilon: float = 0.002
    bias: float = 1.02

    def __post_init__(self):
        if not self.base_rate > 0:
            raise ValueError(f"base_rate must be > 0, got {self.base_rate}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.bias < 1:
            raise ValueError(f"bias must be >= 1, got {self.bias}")
        # both transition probabilities are bounded by base_rate*(eps+1)*bias
        if self.base_rate * (self.epsilon + 1.0) * self.bias > 1.0:
            raise ValueError(
                "switch probability can exceed 1: "
                f"base_rate*(epsilon+1)*bias = "
                f"{self.base_rate * (self.epsilon + 1.0) * self.bias:.3f}"
            )


@dataclass(frozen=True)
class SoiParams:
    """Thresholds and pacing of the agent entry/exit feedback.

    Agents enter when the windowed volatility indicator exceeds
    ``theta_in`` and leave when it falls below ``theta_out``; the check
    runs every ``update_period`` steps and moves one agent at a time.
    ``n_max`` models a finite pool of potential entrants; without it a
    burst that freezes a hot chartist fraction can recruit without bound.
    """

    T_window: int = 100
    theta_in: float = 2.0
    theta_out: float = 1.0
    n_min: int = 10
    n_max: int = 800
    update_period: int = 10

    def __post_init__(self):
        if self.T_window < 2:
            raise ValueError(f"T_window must be >= 2, got {self.T_window}")
        if not self.theta_in > 0:
            raise ValueError(f"theta_in must be > 0, got {self.theta_in}")
        if self.theta_out < 0:
            raise ValueError(f"theta_out must be >= 0, got {self.theta_out}")
        if not self.theta_out < self.theta_in:
            raise ValueError(
                f"hysteresis requires theta_out < theta_in, got "
                f"{self.theta_out} >= {self.theta_in}"
            )
        if self.n_min < 2:
            raise ValueError(f"n_min must be >= 2, got {self.n_min}")
        if self.n_max < self.n_min:
            raise ValueError("n_max must be >= n_min")
        if self.update_period < 1:
            raise ValueError("update_period must be >= 1")


LINEAR = "linear"
MULTIPLICATIVE = "multiplicative"

BY_PRICE = "by_price"
BY_REFERENCE = "by_reference"


@dataclass(frozen=True)
class ModelParams:
    """All scalar parameters of the price dynamics.

    b        : chartist strength (>= 0)
    gamma    : fundamentalist reversion, in (0, 1)
    sigma    : noise scale (> 0)
    M        : moving-average window, >= 2.  The chartist signal compares
               the current price with the mean of the M preceding prices.
    N        : agent count (>= 1); mutable at runtime only under SOI
    p_f      : fundamental price (0 allowed only in linear mode)
    sigma_pf : scale of the fundamental-price random walk (0 = constant)
    """

    b: float = 1.0
    gamma: float = 0.006
    sigma: float = 1.0
    M: int = 20
    N: int = 500
    p_f: float = 0.0
    sigma_pf: float = 0.0
    dynamics_mode: str = LINEAR
    ed_normalization: str = BY_PRICE
    herding: HerdingParams = field(default_factory=HerdingParams)
    soi: SoiParams | None = None

    def __post_init__(self):
        if self.b < 0:
            raise ValueError(f"b must be >= 0, got {self.b}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0,1), got {self.gamma}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.M < 2:
            raise ValueError(f"M must be >= 2, got {self.M}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.sigma_pf < 0:
            raise ValueError(f"sigma_pf must be >= 0, got {self.sigma_pf}")
        if self.dynamics_mode not in (LINEAR, MULTIPLICATIVE):
            raise ValueError(f"unknown dynamics_mode {self.dynamics_mode!r}")
        if self.ed_normalization not in (BY_PRICE, BY_REFERENCE):
            raise ValueError(
                f"unknown ed_normalization {self.ed_normalization!r}"
            )
        if self.dynamics_mode == MULTIPLICATIVE and not self.p_f > 0:
            raise ValueError("multiplicative mode requires p_f > 0")

    def with_(self, **kw) -> "ModelParams":
        return replace(self, **kw)

    @property
    def warmup_default(self) -> int:
        """Exceeds both stationarity scales: ~1/gamma for x=0, ~M for x=1."""
        return int(10 * max(1.0 / self.gamma, float(self.M)))


def multiplicative_defaults(**kw) -> ModelParams:
    """Calibrated parameter set for the stylized-facts regime of the
    multiplicative dynamics."""
    base = dict(
        b=1.7,
        gamma=0.01,
        sigma=0.00112,
        p_f=1.0,
        dynamics_mode=MULTIPLICATIVE,
    )
    base.update(kw)
    return ModelParams(**base)
