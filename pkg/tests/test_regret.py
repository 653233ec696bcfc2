"""Tests for pseudo-regret accounting."""

import numpy as np
import pytest

from mcp_banditselect.core.envs import gen_ball_env
from mcp_banditselect.core.errors import DuplicateRecordError, InvalidActionError
from mcp_banditselect.core.regret import SUMMARY_COLUMNS, RegretTable, accumulate, instantaneous_regret
from mcp_banditselect.core.types import RegretRecord


class TestInstantaneousRegret:

    def test_finite_actions(self):
        env = gen_ball_env("overlapping", seed=0, horizon=50)
        means = env.mean_rewards()
        best = int(np.argmax(means))
        assert instantaneous_regret(env, 1, best) == 0.0
        for a in range(len(means)):
            assert instantaneous_regret(env, 1, a) == pytest.approx(means.max() - means[a])
            assert instantaneous_regret(env, 1, a) >= 0.0

    def test_unit_ball(self):
        env = gen_ball_env("overlapping", seed=0, action_set="unit-ball")
        best = env.theta_star / np.linalg.norm(env.theta_star)
        assert instantaneous_regret(env, 1, best) == pytest.approx(0.0, abs=1e-12)
        assert instantaneous_regret(env, 1, -best) == pytest.approx(2.0 * np.linalg.norm(env.theta_star))

    def test_invalid_actions(self):
        env = gen_ball_env("overlapping", seed=0, horizon=50, n_actions=5)
        with pytest.raises(InvalidActionError):
            instantaneous_regret(env, 1, 5)
        with pytest.raises(InvalidActionError):
            instantaneous_regret(env, 1, np.zeros(2))
        ball = gen_ball_env("overlapping", seed=0, action_set="unit-ball")
        with pytest.raises(InvalidActionError):
            instantaneous_regret(ball, 1, np.array([3.0, 0.0]))


def records_for(instance_id, algorithm, regrets):
    return [RegretRecord(instance_id, t, algorithm, r, -1.0) for t, r in enumerate(regrets, start=1)]


class TestAccumulate:

    def test_cumulative_regret_is_recomputed(self):
        table = accumulate(records_for(0, "itl", [1.0, 0.5, 0.0]))
        assert table.records["cumulative_regret"].tolist() == [1.0, 1.5, 1.5]

    def test_summary_statistics(self):
        table = accumulate(records_for(0, "itl", [1.0, 1.0]) + records_for(1, "itl", [3.0, 0.0]))
        assert list(table.summary.columns) == SUMMARY_COLUMNS
        mean, std = table.query("itl", 1)
        assert mean == pytest.approx(2.0)
        assert std == pytest.approx(np.std([1.0, 3.0], ddof=1))
        assert table.final("itl") == pytest.approx((2.5, np.std([2.0, 3.0], ddof=1), 2))
        assert table.final_per_instance("itl").tolist() == [2.0, 3.0]
        assert table.instantaneous_means("itl") == pytest.approx([2.0, 0.5])

    def test_single_instance_has_zero_spread(self):
        table = accumulate(records_for(0, "oracle", [0.2, 0.3]))
        assert table.summary["std_cum_regret"].tolist() == [0.0, 0.0]
        assert table.summary["n_instances"].tolist() == [1, 1]

    def test_algorithms_are_listed_in_order(self):
        table = accumulate(records_for(0, "ps-oful", [0.0]) + records_for(0, "itl", [0.0]))
        assert table.algorithms == ["itl", "ps-oful"]
        assert len(table.curve("itl")) == 1

    def test_duplicate_records(self):
        with pytest.raises(DuplicateRecordError):
            accumulate(records_for(0, "itl", [1.0]) + records_for(0, "itl", [2.0]))

    def test_no_records(self):
        table = accumulate([], failed_instances=[0, 1])
        assert table.is_empty
        assert table.failed_instances == (0, 1)
        assert RegretTable.empty().is_empty
