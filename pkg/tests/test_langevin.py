import math

import numpy as np
import pytest

from thermodeco import (
    MediumParams,
    ModeSpec,
    NoiseStream,
    SimConfig,
    deterministic_decay,
    draw_noise_increment,
    drift_residual,
    simulate_ensemble,
    simulate_mode,
    step_euler_maruyama,
    step_exact_ou,
)

UNIT = MediumParams(T0=1.0, c0=1.0, D0=1.0)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(dt=0.0, t_end=1.0)
    with pytest.raises(ValueError):
        SimConfig(dt=1.0, t_end=0.5)
    with pytest.raises(ValueError):
        SimConfig(dt=0.1, t_end=1.0, method="heun")
    assert SimConfig(dt=0.1, t_end=1.0).n_steps == 10


def test_noise_stream_reproducible():
    a = NoiseStream(1.0, seed=42, substream=3)
    b = NoiseStream(1.0, seed=42, substream=3)
    assert np.array_equal(a.normal(100), b.normal(100))
    c = NoiseStream(1.0, seed=42, substream=4)
    assert not np.array_equal(NoiseStream(1.0, 42, 3).normal(100), c.normal(100))


def test_draw_noise_increment_zero_gamma():
    s = NoiseStream(0.0, seed=0)
    assert all(draw_noise_increment(s, 0.1) == 0.0 for _ in range(10))


def test_draw_noise_increment_moments():
    # 2*Gamma/dt = 20 for Gamma=1, dt=0.1
    s = NoiseStream(1.0, seed=7)
    draws = np.array([draw_noise_increment(s, 0.1) for _ in range(10_000)])
    n = draws.size
    assert abs(draws.mean()) <= 3 * math.sqrt(20.0 / n)
    # stderr of the variance of N(0,20): 20*sqrt(2/n)
    assert abs(np.var(draws, ddof=1) - 20.0) <= 3 * 20.0 * math.sqrt(2.0 / n)


def test_euler_step_deterministic_branch():
    s = NoiseStream(0.0, seed=0)
    assert step_euler_maruyama(UNIT, 1.0, 1.0, 0.1, s, noise_scale=0.0) == pytest.approx(0.9, rel=1e-15)


def test_euler_step_conserved_mode():
    s = NoiseStream(0.0, seed=0)
    assert step_euler_maruyama(UNIT, 0.0, 0.37, 0.5, s) == 0.37


def test_exact_step_deterministic_branch():
    s = NoiseStream(0.0, seed=0)
    x = step_exact_ou(UNIT, 1.0, 1.0, math.log(2.0), s, noise_scale=0.0)
    assert x == pytest.approx(0.5, rel=1e-14)


def test_exact_step_conserved_mode():
    s = NoiseStream(0.0, seed=0)
    assert step_exact_ou(UNIT, 0.0, 0.7, 1.0, s) == 0.7


def test_exact_step_one_step_variance():
    # transition variance from x=0 over dt=1 is 1 - e^-2
    s = NoiseStream(1.0, seed=11)
    x = step_exact_ou(UNIT, 1.0, np.zeros(1_000_000), 1.0, s)
    expected = 1.0 - math.exp(-2.0)
    stderr = expected * math.sqrt(2.0 / x.size)
    assert abs(np.var(x, ddof=1) - expected) <= 3 * stderr


def test_simulate_mode_zero_noise_matches_decay():
    cfg = SimConfig(dt=0.05, t_end=5.0, seed=1, initial=2.0, noise_scale=0.0)
    for method in ("exact-ou", "euler-maruyama"):
        hist = simulate_mode(UNIT, 1.0, SimConfig(**{**cfg.__dict__, "method": method}))
        oracle = np.array([deterministic_decay(UNIT, 1.0, 2.0, t) for t in hist.times])
        if method == "exact-ou":
            assert np.max(np.abs(hist.values - oracle)) <= 1e-12
        else:
            # Euler is O(dt): coarse bound here, convergence tested below
            assert np.max(np.abs(hist.values - oracle)) <= 0.1


def test_euler_zero_noise_first_order_convergence():
    errs = []
    for dt in (0.02, 0.01, 0.005):
        cfg = SimConfig(dt=dt, t_end=2.0, method="euler-maruyama", seed=1, initial=1.0, noise_scale=0.0)
        hist = simulate_mode(UNIT, 1.0, cfg)
        errs.append(abs(hist.values[-1] - deterministic_decay(UNIT, 1.0, 1.0, 2.0)))
    assert 1.5 <= errs[0] / errs[1] <= 3.0
    assert 1.5 <= errs[1] / errs[2] <= 3.0


def test_simulate_mode_deterministic_given_seed():
    cfg = SimConfig(dt=0.01, t_end=10.0, seed=99, initial="sample-equilibrium")
    h1 = simulate_mode(UNIT, 1.0, cfg)
    h2 = simulate_mode(UNIT, 1.0, cfg)
    assert np.array_equal(h1.values, h2.values)


def test_simulate_mode_matches_scalar_stepping():
    cfg = SimConfig(dt=0.1, t_end=2.0, seed=5, initial=0.3)
    hist = simulate_mode(UNIT, 1.0, cfg)
    stream = NoiseStream(1.0, seed=5, substream=0)
    x = 0.3
    vals = [x]
    for _ in range(cfg.n_steps):
        x = step_exact_ou(UNIT, 1.0, x, cfg.dt, stream)
        vals.append(x)
    assert np.array_equal(hist.values, np.array(vals))


def test_simulate_mode_stationary_variance():
    cfg = SimConfig(dt=0.01, t_end=1_100.0, seed=3, initial="sample-equilibrium")
    hist = simulate_mode(UNIT, 1.0, cfg)
    post = hist.values[10_000:]  # burn-in 100/gamma
    var = np.var(post, ddof=1)
    # effective sample size of consecutive OU squared fluctuations
    r = math.exp(-2 * 0.01)
    n_eff = post.size * (1 - r) / (1 + r)
    assert abs(var - 1.0) <= 3 * math.sqrt(2.0 / n_eff)


def test_exact_stepper_composition():
    # step(dt1) then step(dt2) has the transition law of step(dt1+dt2)
    n = 100_000
    x0 = 1.5
    s = NoiseStream(1.0, seed=21)
    x = step_exact_ou(UNIT, 1.0, np.full(n, x0), 0.3, s)
    x = step_exact_ou(UNIT, 1.0, x, 0.7, s)
    mean_exp = x0 * math.exp(-1.0)
    var_exp = 1.0 - math.exp(-2.0)
    assert abs(x.mean() - mean_exp) <= 3 * math.sqrt(var_exp / n)
    assert abs(np.var(x, ddof=1) - var_exp) <= 3 * var_exp * math.sqrt(2.0 / n)


def test_ensemble_matches_serial_and_simulate_mode():
    cfg = SimConfig(dt=0.05, t_end=2.0, seed=17, initial="sample-equilibrium")
    modes = [ModeSpec(1.0), ModeSpec(2.0)]
    serial = simulate_ensemble(UNIT, modes, 4, cfg, n_workers=1)
    threaded = simulate_ensemble(UNIT, modes, 4, cfg, n_workers=4)
    for m in range(2):
        for i in range(4):
            assert np.array_equal(serial[m][i].values, threaded[m][i].values)
    single = simulate_ensemble(UNIT, [ModeSpec(1.0)], 1, cfg)[0][0]
    assert np.array_equal(single.values, simulate_mode(UNIT, 1.0, cfg, substream=0).values)


def test_ensemble_equilibrium_mean():
    cfg = SimConfig(dt=0.05, t_end=20.0, seed=8, initial="sample-equilibrium")
    n_traj = 4000
    trajs = simulate_ensemble(UNIT, [ModeSpec(1.0)], n_traj, cfg)[0]
    finals = np.array([h.values[-1] for h in trajs])
    assert abs(finals.mean()) <= 3 * math.sqrt(1.0 / n_traj)


def test_deterministic_decay_examples():
    assert deterministic_decay(UNIT, 1.0, 0.8, 0.0) == 0.8
    assert deterministic_decay(UNIT, 1.0, 2.0, 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-15)
    assert deterministic_decay(UNIT, 0.0, 0.8, 123.0) == 0.8


def test_drift_residual_annihilates_decay():
    dt = 0.01
    hist = simulate_mode(UNIT, 1.0, SimConfig(dt=dt, t_end=5.0, seed=0, initial=1.0, noise_scale=0.0))
    res = drift_residual(UNIT, 1.0, hist)
    assert np.max(np.abs(res[1:-1])) <= 1e-4  # O(dt^2) on interior points
