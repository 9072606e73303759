"""Velocity-limit strategies: coefficient derivation and per-iteration limits."""

import math

import numpy as np
import pytest

from savlpso import (
    Bounds,
    ConfigError,
    VlStrategyConfig,
    derive_alpha_beta,
    fixed,
    iteration_linear,
    sigmoid_mu,
    state_based,
    velocity_limit,
)


def test_alpha_beta_for_default_bracket():
    # Closed forms: alpha = 1/0.4 - 1 = 1.5, beta = -ln((1/0.7 - 1)/1.5).
    alpha, beta = derive_alpha_beta(0.4, 0.7)
    assert alpha == 1.5
    assert beta == pytest.approx(1.2527629684953678, abs=0, rel=1e-15)
    assert sigmoid_mu(0.5, alpha, beta) == pytest.approx(0.5550055679356352, rel=1e-15)


def test_alpha_beta_for_wide_bracket():
    alpha, beta = derive_alpha_beta(0.3, 0.8)
    assert alpha == pytest.approx(2.3333333333333335, rel=1e-15)
    assert beta == pytest.approx(2.2335922215070942, rel=1e-15)
    assert sigmoid_mu(0.5, alpha, beta) == pytest.approx(0.566969722017664, rel=1e-15)


def test_sigmoid_hits_both_endpoints():
    rng = np.random.default_rng(31337)
    for _ in range(500):
        mu_min = rng.uniform(0.05, 0.95)
        mu_max = rng.uniform(mu_min, 0.95)
        alpha, beta = derive_alpha_beta(mu_min, mu_max)
        assert sigmoid_mu(0.0, alpha, beta) == pytest.approx(mu_min, abs=1e-12)
        assert sigmoid_mu(1.0, alpha, beta) == pytest.approx(mu_max, abs=1e-12)


def test_sigmoid_monotone_in_f():
    alpha, beta = derive_alpha_beta(0.4, 0.7)
    values = [sigmoid_mu(f, alpha, beta) for f in np.linspace(0, 1, 101)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_alpha_beta_validation():
    with pytest.raises(ConfigError):
        derive_alpha_beta(0.0, 0.5)
    with pytest.raises(ConfigError):
        derive_alpha_beta(0.5, 1.0)
    with pytest.raises(ConfigError):
        derive_alpha_beta(0.6, 0.5)


def test_strategy_constructors():
    assert fixed(0.25).kind == "fixed"
    assert iteration_linear(0.2, 0.6).mu_max == 0.6
    s = state_based(0.4, 0.7)
    assert s.kind == "state-based"
    assert s.alpha == 1.5


def test_state_based_tolerates_mu_max_of_one():
    s = state_based(0.4, 1.0)
    assert math.isfinite(s.beta)
    assert sigmoid_mu(1.0, s.alpha, s.beta) == pytest.approx(1.0, abs=1e-8)


def test_strategy_validation():
    with pytest.raises(ConfigError):
        VlStrategyConfig(kind="nonsense")
    with pytest.raises(ConfigError):
        VlStrategyConfig(kind="state-based", alpha=1.0)
    with pytest.raises(ConfigError):
        fixed(0.0)
    with pytest.raises(ConfigError):
        fixed(1.5)
    with pytest.raises(ConfigError):
        iteration_linear(0.7, 0.4)
    with pytest.raises(ConfigError):
        state_based(0.0, 0.7)


def test_fixed_limit_constant_over_everything():
    bounds = Bounds.symmetric(100.0, 4)
    cfg = fixed(0.5)
    for f in (0.0, 0.3, 1.0):
        for k in (0, 7, 99):
            limit = velocity_limit(cfg, bounds, f, k, 100)
            assert limit.mu_current == 0.5
            assert np.array_equal(limit.per_dimension, np.full(4, 50.0))


def test_linear_limit_decays_with_iterations_only():
    bounds = Bounds.symmetric(10.0, 2)
    cfg = iteration_linear(0.4, 0.7)
    first = velocity_limit(cfg, bounds, 0.9, 0, 5)
    last = velocity_limit(cfg, bounds, 0.1, 4, 5)
    mid = velocity_limit(cfg, bounds, 0.5, 2, 5)
    assert first.mu_current == 0.7
    assert last.mu_current == pytest.approx(0.4)
    assert mid.mu_current == pytest.approx(0.55)
    # f made no difference
    assert velocity_limit(cfg, bounds, 0.0, 2, 5).mu_current == mid.mu_current


def test_state_limit_follows_f_only():
    bounds = Bounds.symmetric(10.0, 2)
    cfg = state_based(0.4, 0.7)
    lo = velocity_limit(cfg, bounds, 0.0, 0, 100)
    hi = velocity_limit(cfg, bounds, 1.0, 99, 100)
    assert lo.mu_current == pytest.approx(0.4, abs=1e-12)
    assert hi.mu_current == pytest.approx(0.7, abs=1e-12)
    assert velocity_limit(cfg, bounds, 0.0, 99, 100).mu_current == lo.mu_current
    assert np.allclose(lo.per_dimension, 4.0, atol=1e-11)


def test_limit_scales_with_asymmetric_bounds():
    bounds = Bounds(np.array([0.0, -2.0]), np.array([10.0, 4.0]))
    limit = velocity_limit(fixed(0.5), bounds, 0.0, 0, 10)
    assert np.array_equal(limit.per_dimension, [2.5, 1.5])


def test_limit_validates_f_and_k():
    bounds = Bounds.symmetric(1.0, 1)
    with pytest.raises(ValueError):
        velocity_limit(fixed(0.5), bounds, 1.5, 0, 10)
    with pytest.raises(ValueError):
        velocity_limit(fixed(0.5), bounds, 0.5, 10, 10)
    with pytest.raises(ValueError):
        velocity_limit(fixed(0.5), bounds, 0.5, -1, 10)


def test_single_iteration_linear_uses_mu_max():
    bounds = Bounds.symmetric(1.0, 1)
    assert velocity_limit(iteration_linear(0.4, 0.7), bounds, 0.5, 0, 1).mu_current == 0.7
