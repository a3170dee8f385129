"""Parameter containers: validation rules and defaults."""

import pytest
from hypothesis import given, strategies as st

from cfmarket.params import (
    HerdingParams,
    ModelParams,
    SoiParams,
    multiplicative_defaults,
)


def test_defaults_valid():
    p = ModelParams()
    assert p.b == 1.0 and p.gamma == 0.006 and p.M == 20 and p.N == 500


def test_multiplicative_defaults():
    p = multiplicative_defaults()
    assert p.dynamics_mode == "multiplicative"
    assert p.b == 1.7 and p.gamma == 0.01 and p.sigma == 0.00112
    assert p.p_f == 1.0


def test_multiplicative_defaults_overrides():
    p = multiplicative_defaults(N=100, b=1.0)
    assert p.N == 100 and p.b == 1.0 and p.dynamics_mode == "multiplicative"


@pytest.mark.parametrize(
    "kw",
    [
        dict(gamma=0.0),
        dict(gamma=1.0),
        dict(sigma=0.0),
        dict(M=1),
        dict(N=0),
        dict(b=-0.1),
        dict(sigma_pf=-1.0),
        dict(dynamics_mode="geometric"),
        dict(ed_normalization="by_volume"),
        dict(dynamics_mode="multiplicative", p_f=0.0),
    ],
)
def test_model_params_rejects(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


@pytest.mark.parametrize(
    "kw",
    [
        dict(base_rate=0.0),
        dict(epsilon=-0.01),
        dict(bias=0.99),
        dict(base_rate=0.9, bias=1.2),  # probability above 1
    ],
)
def test_herding_params_rejects(kw):
    with pytest.raises(ValueError):
        HerdingParams(**kw)


@pytest.mark.parametrize(
    "kw",
    [
        dict(T_window=1),
        dict(theta_in=0.0),
        dict(theta_out=-0.5),
        dict(theta_in=1.0, theta_out=1.0),
        dict(n_min=1),
        dict(n_min=100, n_max=50),
        dict(update_period=0),
    ],
)
def test_soi_params_rejects(kw):
    with pytest.raises(ValueError):
        SoiParams(**kw)


@given(
    base_rate=st.floats(0.01, 0.9),
    epsilon=st.floats(0.0, 0.1),
    bias=st.floats(1.0, 1.1),
)
def test_switch_probabilities_bounded(base_rate, epsilon, bias):
    """Admissible herding parameters never yield probabilities above 1."""
    try:
        h = HerdingParams(base_rate=base_rate, epsilon=epsilon, bias=bias)
    except ValueError:
        return
    from cfmarket.herding import switch_probabilities

    for n_c in (0, 1, 250, 499, 500):
        p_fc, p_cf = switch_probabilities(n_c, 500 - n_c, h)
        assert 0.0 <= p_fc <= 1.0
        assert 0.0 <= p_cf <= 1.0


def test_with_replaces_one_field():
    p = ModelParams()
    q = p.with_(N=50)
    assert q.N == 50 and q.b == p.b
    assert p.N == 500


def test_warmup_default_exceeds_both_scales():
    p = ModelParams(gamma=0.006, M=20)
    assert p.warmup_default == int(10 / 0.006)
    p2 = ModelParams(gamma=0.5, M=300)
    assert p2.warmup_default == 3000
