"""Acceptance gate: twelve end-to-end behavioral criteria.

Each test freezes a deterministic recipe (seeds, run lengths, estimator
settings) and asserts the stated tolerance.  The simulator is
bit-reproducible, so these runs give the same numbers on every machine;
the tolerances are the acceptance bands, not statistical hopes.
"""

import math
import time

import numpy as np
import pytest
from scipy.stats import ks_2samp

from cfmarket.analytic import (
    ar1_price_second_moment,
    ar1_return_autocov,
    ar1_return_variance,
    chartist_return_autocov,
    chartist_return_variance,
    companion_model,
)
from cfmarket.herding import equilibrium_mean, estimate_feq
from cfmarket.multiplicative import omega_diagnostic
from cfmarket.params import ModelParams, multiplicative_defaults
from cfmarket.rng import make_rng
from cfmarket.simulate import simulate
from cfmarket.soi import (
    calibrate_thresholds,
    rescale_thresholds,
    time_to_band,
)
from cfmarket.stats import (
    autocov,
    batch_se,
    diffusion_exponent,
    excess_kurtosis,
    extract_returns,
    rare_event_probability,
    sqreturn_autocov,
)
from cfmarket.superposition import (
    LimitMoments,
    averaged_autocovs,
    mixture_tail_probability,
)
from cfmarket.validate import validate_chartist, validate_fundamentalist


def test_c01_fundamentalist_stationary_price_variance():
    """Frozen-fundamentalist price variance hits the closed-form
    stationary value within 3 batch-means standard errors, in seconds."""
    t0 = time.monotonic()
    p = ModelParams()
    s = simulate(p, seed=103, t_max=p.warmup_default + 1_000_000, x0=0.0,
                 freeze_x=True)
    v, se = batch_se(s.p, lambda b: float(np.mean(b**2)))
    want = ar1_price_second_moment(p.gamma, p.sigma, math.inf)
    assert abs(v - want) < 3 * se
    assert time.monotonic() - t0 < 10.0


def test_c02_fundamentalist_return_variance_curve():
    """Var[r_delta] over delta in {1,10,100,1000} matches the closed form
    within 3 standard errors, including the large-delta plateau."""
    p = ModelParams()
    rep = validate_fundamentalist(
        p, seed=102, t_max=2_000_000, deltas=(1, 10, 100, 1000)
    )
    assert rep.passed, [r for r in rep.rows if not r.passed]
    # the plateau: the delta=1000 value is already within 2% of 2 Var[p]
    v_inf = 2 * ar1_price_second_moment(p.gamma, p.sigma, math.inf)
    assert ar1_return_variance(p.gamma, p.sigma, 1000) == pytest.approx(
        v_inf, rel=0.02
    )


def test_c03_fundamentalist_autocovariance_decay_times():
    """Return autocovariance is negative with a fitted decay time within
    25% of 1/gamma; squared-return decay rate within 25% of 2*gamma."""
    p = ModelParams()
    taus_r = np.arange(100, 401, 100)
    taus_s = np.arange(100, 301, 100)
    rhos, rho2s = [], []
    for seed in (11, 12, 13):
        s = simulate(p, seed=seed, t_max=4_000_000, x0=0.0, freeze_x=True)
        r = extract_returns(s.p, 100, overlapping=True)
        rhos.append(autocov(r, 1.0, taus_r, absolute=False))
        rho2s.append(autocov(r, 2.0, taus_s))
    rho = np.mean(rhos, axis=0)
    rho2 = np.mean(rho2s, axis=0)
    assert np.all(rho < 0)
    t_ret = -1.0 / np.polyfit(taus_r, np.log(-rho), 1)[0]
    t_sq = -1.0 / np.polyfit(taus_s, np.log(rho2), 1)[0]
    t_gamma = 1.0 / p.gamma  # 166.7
    assert 0.75 * t_gamma < t_ret < 1.25 * t_gamma
    assert 0.75 * t_gamma / 2 < t_sq < 1.25 * t_gamma / 2


def test_c04_chartist_exact_variance_and_autocovariance():
    """Matrix-power return variance matches a 1e5-path Monte Carlo within
    3 standard errors at delta in {1,10,100}; the return autocovariance
    of the frozen chartist limit is nonnegative at every lag tested."""
    p = ModelParams(b=1.0, M=20)
    rep = validate_chartist(
        p, seed=13, n_paths=100_000, t_run=600, deltas=(1, 10, 100)
    )
    assert rep.passed, [r for r in rep.rows if not r.passed]
    model = companion_model(p.b, p.M)
    for tau in (0, 10, 50, 100, 500, 1000):
        assert chartist_return_autocov(model, p.sigma, 10, tau) >= 0.0


def test_c05_diffusion_exponent_limits_and_n_sweep():
    """Fitted diffusion exponents of the two frozen limits and a pure
    random walk land in their reference bands; the full model's exponent
    is strictly bracketed by the limits and non-increasing in N."""
    grid = np.arange(1, 101)
    p = ModelParams()
    s1 = simulate(p, seed=61, t_max=4_000_000, warmup=0, x0=1.0,
                  freeze_x=True)
    mu_c = diffusion_exponent(s1.p, grid).mu
    s0 = simulate(p, seed=62, t_max=4_000_000, warmup=0, x0=0.0,
                  freeze_x=True)
    mu_f = diffusion_exponent(s0.p, grid).mu
    rw = np.cumsum(make_rng(63).standard_normal(4_000_000))
    mu_rw = diffusion_exponent(rw, grid).mu
    assert 0.66 <= mu_c <= 0.74
    assert 0.41 <= mu_f <= 0.47
    assert 0.49 <= mu_rw <= 0.51

    mus = []
    for n in (50, 100, 200, 500):
        pn = p.with_(N=n)
        x0 = equilibrium_mean(n, pn.herding)
        mus.append(float(np.mean([
            diffusion_exponent(
                simulate(pn, seed=71, t_max=4_000_000, warmup=0, x0=x0,
                         stream=st).p,
                grid,
            ).mu
            for st in (0, 1, 2)
        ])))
    assert all(mu_f < m < mu_c for m in mus)
    assert all(a >= b for a, b in zip(mus, mus[1:]))


def test_c06_return_variance_ratio_saturates():
    """Full model: Var[r_delta]/delta falls toward zero as delta grows."""
    p = ModelParams()
    s = simulate(p, seed=21, t_max=10_000_000, warmup=0,
                 x0=equilibrium_mean(500, p.herding))
    ratios = []
    for d in (100, 1000, 10_000, 100_000):
        r = extract_returns(s.p, d, overlapping=(d >= 1000)).values
        ratios.append(float(np.var(r)) / d)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 0.05 * ratios[0]


def test_c07_fat_tails_persist_unless_fundamental_walks():
    """Excess kurtosis of the full model stays positive out to
    delta=1e4; adding a random-walking reference price washes the
    largest-delta tails out to near-Gaussian."""
    p = ModelParams()
    x0 = equilibrium_mean(500, p.herding)
    seeds = (81, 82, 83, 84, 85, 86)
    kurt = {}
    for sig_pf in (0.0, 0.1):
        pp = p.with_(sigma_pf=sig_pf)
        acc = {d: [] for d in (100, 1000, 10_000)}
        for seed in seeds:
            s = simulate(pp, seed=seed, t_max=10_000_000, warmup=0, x0=x0)
            for d in acc:
                r = extract_returns(s.p, d, overlapping=(d >= 1000)).values
                acc[d].append(excess_kurtosis(r))
        kurt[sig_pf] = {d: float(np.mean(v)) for d, v in acc.items()}
    for d in (100, 1000, 10_000):
        assert kurt[0.0][d] > 0.0
    assert kurt[0.1][10_000] < 0.1
    assert kurt[0.1][10_000] < kurt[0.0][10_000]


def test_c08_superposition_tracks_then_overestimates_tails():
    """The frozen-x Gaussian mixture with the empirical population law
    reproduces simulated 4-sigma tail probabilities within a factor of 2
    up to delta=1e3, overestimates them at delta=1e4, and shows no
    volatility clustering where the simulation does."""
    p = ModelParams(N=100)
    model = companion_model(p.b, p.M)
    x0 = equilibrium_mean(100, p.herding)
    runs = [
        simulate(p, seed=sd, t_max=20_000_000, warmup=0, x0=x0)
        for sd in (51, 52, 53)
    ]
    feq = estimate_feq(np.concatenate([s.x for s in runs]), bins=50)

    ratios = {}
    for d in (100, 1000, 10_000):
        r = np.concatenate([
            extract_returns(s.p, d, overlapping=(d >= 1000)).values
            for s in runs
        ])
        sf2 = ar1_return_variance(p.gamma, p.sigma, d)
        sc2 = chartist_return_variance(model, p.sigma, d)
        thr = 4.0 * float(r.std())
        sim_tail = float(np.mean(np.abs(r) > thr))
        mix_tail = mixture_tail_probability(feq, sf2, sc2, thr)
        ratios[d] = mix_tail / sim_tail
    assert 0.5 < ratios[100] < 2.0
    assert 0.5 < ratios[1000] < 2.0
    assert ratios[10_000] > 2.0

    # volatility clustering: the approximation has none left at tau=500,
    # the simulation plainly does
    d, tau = 100, 500
    sf2 = ar1_return_variance(p.gamma, p.sigma, d)
    sc2 = chartist_return_variance(model, p.sigma, d)
    moments = LimitMoments(sigma_f2=sf2, sigma_c2=sc2)
    rho_f = ar1_return_autocov(p.gamma, d, tau)
    rho_c = chartist_return_autocov(model, p.sigma, d, tau)
    _, approx_sq = averaged_autocovs(feq, moments, rho_f, rho_c)
    sim_sq = float(np.mean([
        sqreturn_autocov(extract_returns(s.p, d), np.array([tau]))[0]
        for s in runs
    ]))
    assert abs(approx_sq) < 0.01
    assert sim_sq > 0.1


def test_c09_multiplicative_calibration_and_omega():
    """The calibrated multiplicative parameter set produces at least 3x
    the excess kurtosis of a weak-chartist reference; the relative noise
    scale Omega sits in [0.02, 0.05] and is non-decreasing across the
    fundamental-price grid (exactly constant: the dynamics is scale
    free)."""
    calib = multiplicative_defaults(N=200)
    ref = multiplicative_defaults(N=200, b=1.0, gamma=0.006)
    x0 = equilibrium_mean(200, calib.herding)
    kurt = {}
    for tag, pp in (("calib", calib), ("ref", ref)):
        ks = [
            excess_kurtosis(
                extract_returns(
                    simulate(pp, seed=sd, t_max=4_000_000, warmup=0,
                             x0=x0).p,
                    100, definition="log",
                ).values
            )
            for sd in (91, 92, 93, 94)
        ]
        kurt[tag] = float(np.mean(ks))
    assert kurt["calib"] >= 3.0 * kurt["ref"]

    omegas = []
    for pf in (1.0, 10.0, 50.0, 100.0, 500.0, 1000.0):
        pp = multiplicative_defaults(p_f=pf)
        s = simulate(pp, seed=95, t_max=1_000_000, warmup=0, x0=0.75,
                     freeze_x=True, p0=pf)
        omegas.append(omega_diagnostic(s.p, p_f=pf))
    omegas = np.array(omegas)
    assert np.all((omegas >= 0.02) & (omegas <= 0.05))
    assert np.all(np.diff(omegas) >= -1e-9 * omegas[:-1])


def test_c10_phi_ordering_of_absolute_moment_correlations():
    """Autocovariance of |r|^phi at a short lag peaks at phi=1 in the
    multiplicative model and at phi=2 in the linear model."""
    phis = (0.5, 1.0, 1.5, 2.0)
    argmax = {}
    for tag, pp, defn in (
        ("mult", multiplicative_defaults(N=150), "log"),
        ("lin", ModelParams(N=200), "difference"),
    ):
        x0 = equilibrium_mean(pp.N, pp.herding)
        acc = np.zeros(len(phis))
        for seed in (31, 32, 33, 34, 35, 36):
            s = simulate(pp, seed=seed, t_max=10_000_000, warmup=0, x0=x0)
            r = extract_returns(s.p, 100, definition=defn, overlapping=True)
            acc += [
                autocov(r, ph, np.array([200]), absolute=True)[0]
                for ph in phis
            ]
        argmax[tag] = phis[int(np.argmax(acc))]
    assert argmax["mult"] == 1.0
    assert argmax["lin"] == 2.0


def test_c11_soi_convergence_and_mode_asymmetry():
    """Under thresholds calibrated once on the linear model (and mapped
    to multiplicative units by the sigma^2 noise scale), N(t) converges
    from 50 and from 5000 into a common band and stays there for the
    final half of a 1e6-step run in both modes; the multiplicative
    approach from above is consistently slower than the linear one."""
    lin = ModelParams()
    mult = multiplicative_defaults()
    soi_lin = calibrate_thresholds(
        lin, seed=7, n_min=10, n_max=800, update_period=10
    )
    # frozen values: the calibration is bit-reproducible
    assert soi_lin.theta_out == pytest.approx(7.3670827940801065, rel=1e-12)
    assert soi_lin.theta_in == pytest.approx(28.906976104503517, rel=1e-12)
    soi_mult = rescale_thresholds(soi_lin, lin.sigma, mult.sigma)

    band = (100, 800)
    ttb = {"lin": [], "mult": []}
    for mode, base, soi in (("lin", lin, soi_lin), ("mult", mult, soi_mult)):
        for n0, seeds in ((50, (31,)), (5000, (31, 32, 33, 34, 35, 36))):
            for seed in seeds:
                p = base.with_(N=n0, soi=soi)
                s = simulate(p, seed=seed, t_max=1_000_000, warmup=0,
                             x0=0.5, stream=seed * 17)
                half = s.n[len(s.n) // 2:]
                frac = float(np.mean((half >= band[0]) & (half <= band[1])))
                assert frac >= 0.85, (mode, n0, seed, frac)
                assert band[0] < float(half.mean()) < band[1]
                if n0 == 5000:
                    hit = time_to_band(s.n, band)
                    assert hit is not None
                    ttb[mode].append(hit)
    assert max(ttb["lin"]) < min(ttb["mult"])


def test_c12_appendix_suite():
    """Exact rare-event probabilities; difference vs log returns agree on
    a linear run far from zero; chartist-normalized pdf tails collapse
    between delta=100 and 1000 but not at delta=1e4."""
    # (a) rare events: exact binomial complement on a grid
    for prob in (1e-6, 1e-3, 0.05, 0.5, 1.0):
        for n in (0, 1, 10, 1000):
            r = rare_event_probability(prob, n)
            assert r.exact == pytest.approx(
                1.0 - (1.0 - prob) ** n, rel=1e-14, abs=1e-300
            )

    # (b) difference vs log returns on a linear run around p_f=1000
    p = ModelParams()
    x0 = equilibrium_mean(500, p.herding)
    s = simulate(p.with_(p_f=1000.0), seed=41, t_max=2_000_000, x0=x0)
    taus = np.arange(100, 501, 100)
    rd = extract_returns(s.p, 100)
    rl = extract_returns(s.p, 100, definition="log")
    gap_r = np.abs(
        autocov(rd, 1.0, taus, absolute=False)
        - autocov(rl, 1.0, taus, absolute=False)
    ).max()
    gap_sq = np.abs(
        autocov(rd, 2.0, taus) - autocov(rl, 2.0, taus)
    ).max()
    assert gap_r < 0.01
    assert gap_sq < 0.01

    # (c) tail collapse under chartist-variance normalization
    model = companion_model(p.b, p.M)
    s2 = simulate(p, seed=42, t_max=10_000_000, warmup=0, x0=x0)
    norm = {}
    for d in (100, 1000, 10_000):
        r = extract_returns(s2.p, d, overlapping=(d >= 1000)).values
        norm[d] = np.abs(r) / math.sqrt(
            chartist_return_variance(model, p.sigma, d)
        )
    y0 = 1.0
    tails = {d: y[y > y0] for d, y in norm.items()}
    assert ks_2samp(tails[100], tails[1000]).statistic < 0.2
    # at delta=1e4 the normalized tail mass has collapsed away entirely
    mass = {d: len(t) / len(norm[d]) for d, t in tails.items()}
    assert mass[10_000] < 0.01 * mass[100]
