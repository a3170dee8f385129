"""Chartist-fundamentalist agent-based market model: seeded simulator,
closed-form oracles for the solvable limits, and statistics over the
generated paths."""

from .params import (
    HerdingParams,
    ModelParams,
    SoiParams,
    multiplicative_defaults,
)
from .simulate import DivergenceError, PriceSeries, simulate

__all__ = [
    "HerdingParams",
    "ModelParams",
    "SoiParams",
    "multiplicative_defaults",
    "DivergenceError",
    "PriceSeries",
    "simulate",
]

__version__ = "0.1.0"
