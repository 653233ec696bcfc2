"""Tests for the incremental biased ridge regressor."""

import numpy as np
import pytest

from mcp_banditselect.core.errors import DimensionError, InvalidParameterError, NumericInputError
from mcp_banditselect.core.regressor import REINVERT_EVERY, RegressorState, new_regressor, ridge_regressor


def closed_form(features, rewards, bias, lam):
    d = bias.shape[0]
    gram = lam * np.eye(d) + features.T @ features
    return np.linalg.solve(gram, features.T @ (rewards - features @ bias)) + bias


def test_fresh_expert_predicts_bias():
    expert = new_regressor([1.0, -2.0], lam=3.0)
    assert expert.predict([2.0, 1.0]) == pytest.approx(0.0)
    assert expert.predict([1.0, 0.0]) == pytest.approx(1.0)
    assert expert.n_obs == 0


class TestWorkedExamples:

    def test_one_dimension_observed_twice(self):
        expert = ridge_regressor(1)
        expert.update([1.0], 1.0)
        expert.update([1.0], 1.0)
        assert expert.coeffs == pytest.approx([2.0 / 3.0])

    def test_biased_two_dimensional_update(self):
        expert = new_regressor([1.0, 0.0], lam=1.0)
        expert.update([0.0, 1.0], 3.0)
        assert expert.coeffs == pytest.approx([1.0, 1.5])
        assert expert.predict([2.0, 2.0]) == pytest.approx(5.0)

    def test_fresh_weighted_norm(self):
        assert ridge_regressor(3, lam=4.0).weighted_norm([1.0, 0.0, 0.0]) == pytest.approx(0.5)


def test_incremental_matches_normal_equations():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(500):
        d = int(rng.integers(1, 6))
        t = int(rng.integers(1, 51))
        lam = float(rng.uniform(0.5, 2.0))
        bias = rng.normal(size=d)
        features = rng.normal(size=(t, d))
        rewards = rng.normal(size=t)

        expert = RegressorState(bias, lam)
        for phi, y in zip(features, rewards):
            expert.update(phi, y)
        worst = max(worst, float(np.max(np.abs(expert.coeffs - closed_form(features, rewards, bias, lam)))))
    assert worst <= 1e-8


def test_inverse_and_log_det_stay_consistent():
    rng = np.random.default_rng(7)
    expert = ridge_regressor(3, lam=2.0)
    for _ in range(40):
        expert.update(rng.normal(size=3), float(rng.normal()))

    assert np.allclose(expert.inv_gram, expert.inv_gram.T)
    assert np.allclose(expert.gram @ expert.inv_gram, np.eye(3), atol=1e-10)
    _, logdet = np.linalg.slogdet(expert.gram)
    assert expert.log_det_ratio == pytest.approx(logdet - 3 * np.log(2.0), rel=1e-10)


def test_drift_guard_keeps_solution_close_to_direct_solve():
    rng = np.random.default_rng(11)
    expert = ridge_regressor(4)
    for _ in range(REINVERT_EVERY):
        expert.update(rng.normal(size=4), float(rng.normal()))
    assert np.max(np.abs(expert.coeffs - expert.direct_solve())) <= 1e-6


def test_vectorized_helpers_agree_with_scalar_ones():
    rng = np.random.default_rng(3)
    expert = ridge_regressor(2)
    for _ in range(10):
        expert.update(rng.normal(size=2), float(rng.normal()))
    features = rng.normal(size=(5, 2))

    assert np.allclose(expert.predict_many(features), [expert.predict(phi) for phi in features])
    assert np.allclose(expert.weighted_norms(features), [expert.weighted_norm(phi) for phi in features])


def test_invalid_inputs():
    with pytest.raises(InvalidParameterError):
        RegressorState([0.0, 0.0], lam=0.0)
    expert = ridge_regressor(2)
    with pytest.raises(DimensionError):
        expert.update([1.0, 2.0, 3.0], 1.0)
    with pytest.raises(NumericInputError):
        expert.update([1.0, np.nan], 1.0)
    with pytest.raises(NumericInputError):
        expert.update([1.0, 0.0], float("inf"))
    with pytest.raises(DimensionError):
        expert.predict_many(np.ones((3, 5)))


def test_inverse_stays_symmetric_over_long_runs():
    rng = np.random.default_rng(5)
    expert = ridge_regressor(3)
    phi = np.array([0.3, -0.2, 0.5])
    norms = []
    for _ in range(10_000):
        expert.update(rng.normal(size=3), float(rng.normal()))
        norms.append(expert.weighted_norm(phi))
    assert np.max(np.abs(expert.inv_gram - expert.inv_gram.T)) < 1e-10
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))
