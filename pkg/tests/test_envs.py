"""Tests for the seeded synthetic environments."""

import math

import numpy as np
import pytest

from mcp_banditselect.core.envs import (
    BALL_LAYOUTS,
    FEATURE_SELECTION,
    PARAM_SELECTION,
    default_delta,
    draw_reward,
    gen_ball_env,
    gen_feature_env,
    noise_stream,
    sample_uniform_ball,
)
from mcp_banditselect.core.errors import AssumptionError, ConfigError, InvalidParameterError
from mcp_banditselect.core.types import UnitBallActionSet


class TestSampleUniformBall:

    def test_zero_radius_returns_the_center(self):
        rng = np.random.default_rng(0)
        assert np.array_equal(sample_uniform_ball([1.0, 2.0], 0.0, rng), [1.0, 2.0])

    def test_draws_fill_the_ball_uniformly(self):
        rng = np.random.default_rng(1)
        center = np.array([1.0, -1.0])
        n = 100_000
        dists = np.array([np.linalg.norm(sample_uniform_ball(center, 2.0, rng) - center) for _ in range(n)])
        assert dists.max() <= 2.0
        # P(||x - c|| <= r/2) = 1/4 in two dimensions
        inner = float(np.mean(dists <= 1.0))
        assert abs(inner - 0.25) <= 4.0 * math.sqrt(0.25 * 0.75 / n)

    def test_negative_radius(self):
        with pytest.raises(AssumptionError):
            sample_uniform_ball([0.0], -1.0, np.random.default_rng(0))


class TestBallEnvironments:

    @pytest.mark.parametrize("variant", sorted(BALL_LAYOUTS))
    def test_same_seed_same_instance(self, variant):
        a = gen_ball_env(variant, seed=7, horizon=50)
        b = gen_ball_env(variant, seed=7, horizon=50)
        assert np.array_equal(a.theta_star, b.theta_star)
        assert np.array_equal(a.action_features, b.action_features)
        assert a.true_model_index == b.true_model_index
        assert all(np.array_equal(x.center_estimate, y.center_estimate) for x, y in zip(a.agent_models, b.agent_models))

    @pytest.mark.parametrize("variant", sorted(BALL_LAYOUTS))
    def test_assumptions_hold(self, variant):
        layout = BALL_LAYOUTS[variant]
        for seed in range(20):
            env = gen_ball_env(variant, seed=seed, horizon=100)
            c = env.constants
            assert env.kind == PARAM_SELECTION
            assert c.M == len(layout.radii) == len(env.agent_models)
            assert c.delta == pytest.approx(0.01)
            assert env.agent_models[env.true_model_index].contains(env.theta_star, tol=1e-9)
            assert np.linalg.norm(env.theta_star) <= c.S + 1e-9
            assert np.all(np.linalg.norm(env.action_features, axis=1) <= c.L + 1e-12)
            assert np.all(np.abs(env.mean_rewards()) <= c.G + 1e-9)
            for lo, hi, mu in zip(layout.lows, layout.highs, env.true_centers):
                assert np.all((lo <= mu) & (mu <= hi))
            for model in env.agent_models:
                assert model.center_error == pytest.approx(0.1)

    def test_different_seeds_differ(self):
        assert not np.array_equal(gen_ball_env("disjoint", 0).theta_star, gen_ball_env("disjoint", 1).theta_star)

    def test_unit_ball_instance(self):
        env = gen_ball_env("overlapping", seed=0, action_set="unit-ball")
        assert env.action_features is None
        assert isinstance(env.action_set(1), UnitBallActionSet)
        assert env.constants.K == 0
        assert env.optimal_value() == pytest.approx(np.linalg.norm(env.theta_star))
        assert env.manifest()["action_set"] == "unit-ball"

    def test_unknown_variant_or_action_set(self):
        with pytest.raises(ConfigError):
            gen_ball_env("nested", seed=0)
        with pytest.raises(ConfigError):
            gen_ball_env("overlapping", seed=0, action_set="sphere")


class TestFeatureEnvironment:

    def test_shape_and_norms(self):
        env = gen_feature_env(seed=3)
        c = env.constants
        assert env.kind == FEATURE_SELECTION
        assert (c.M, c.K, c.d) == (10, 50, 10)
        assert np.linalg.norm(env.theta_star) == pytest.approx(1.0)
        assert max(model.max_norm() for model in env.agent_models) <= math.sqrt(10)
        assert np.array_equal(env.action_features, env.agent_models[0].features[0])
        assert env.mean_rewards() == pytest.approx(env.action_features @ env.theta_star)

    def test_noise_scale_is_a_variance_by_default(self):
        assert gen_feature_env(seed=0).noise_sigma == pytest.approx(math.sqrt(0.1))
        assert gen_feature_env(seed=0, noise_scale_is_variance=False).noise_sigma == pytest.approx(0.1)

    def test_same_seed_same_instance(self):
        a, b = gen_feature_env(seed=9), gen_feature_env(seed=9)
        assert np.array_equal(a.theta_star, b.theta_star)
        assert all(np.array_equal(x.features, y.features) for x, y in zip(a.agent_models, b.agent_models))

    def test_feature_bound_is_checked(self):
        with pytest.raises(AssumptionError):
            gen_feature_env(seed=0, L=1.0)


class TestNoise:

    def test_noise_free_reward_is_the_mean(self):
        env = gen_ball_env("overlapping", seed=0, noise_sigma=0.0)
        phi = env.action_features[3]
        assert draw_reward(env, phi, np.random.default_rng(0)) == env.mean_reward(phi)

    def test_reward_moments(self):
        env = gen_ball_env("overlapping", seed=0, noise_sigma=0.5)
        phi = env.action_features[0]
        rng = np.random.default_rng(2)
        n = 100_000
        draws = np.array([draw_reward(env, phi, rng) for _ in range(n)])
        assert abs(draws.mean() - env.mean_reward(phi)) <= 4.0 * 0.5 / math.sqrt(n)
        assert draws.std() == pytest.approx(0.5, rel=0.05)

    def test_pre_drawn_noise_and_action_ids(self):
        env = gen_ball_env("overlapping", seed=1, noise_sigma=0.1)
        assert draw_reward(env, 4, z=2.0, round=1) == pytest.approx(env.expected_reward(1, 4) + 0.2)
        phi = env.action_features[4]
        assert draw_reward(env, phi, z=-1.0) == pytest.approx(env.mean_reward(phi) - 0.1)
        with pytest.raises(InvalidParameterError):
            draw_reward(env, phi)

    def test_noise_stream_is_reproducible(self):
        assert np.array_equal(noise_stream(4, 100), noise_stream(4, 100))
        assert np.array_equal(noise_stream(4, 50), noise_stream(4, 100)[:50])
        assert not np.array_equal(noise_stream(4, 100), noise_stream(5, 100))

    def test_default_delta(self):
        assert default_delta(1000) == pytest.approx(0.001)
        assert default_delta(2) == 0.25
