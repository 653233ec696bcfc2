"""Tests for experiment configuration, execution and artifacts."""

import xml.etree.ElementTree as ET

import pandas as pd
import pytest
import yaml

from mcp_banditselect.core.envs import policy_rng
from mcp_banditselect.core.errors import ConfigError, DimensionError, EmptyInputError, ExperimentRuntimeError
from mcp_banditselect.core.harness import (
    ExperimentConfig,
    emit_plot,
    execute_plan,
    load_experiment_config,
    read_csv,
    run_and_write,
    run_experiment,
    write_csv,
    write_manifest,
)
from mcp_banditselect.core.harness import runner
from mcp_banditselect.core.harness.experiment_config import validate_config
from mcp_banditselect.core.policies import FsScb, Oful, PsOful
from mcp_banditselect.core.regret import SUMMARY_COLUMNS, RegretTable


def make_plan(**overrides):
    values = dict(
        experiment="custom",
        variant="overlapping",
        horizon=20,
        n_instances=2,
        algorithms=["ps-oful", "itl", "oracle"],
    )
    values.update(overrides)
    return ExperimentConfig(**values).resolve()


class TestConfig:

    def test_preset_resolution(self):
        plan = ExperimentConfig(experiment="fig1-topleft").resolve()
        assert plan.variant == "overlapping"
        assert (plan.horizon, plan.n_instances, plan.master_seed) == (1000, 50, 0)
        assert plan.algorithms == ("ps-oful", "itl", "oracle")
        assert plan.delta == pytest.approx(0.001)
        assert plan.description

    def test_overrides_win_over_the_preset(self):
        plan = ExperimentConfig(experiment="fig1-bottomright").override(horizon=10, algorithms="ps-oful").resolve()
        assert plan.horizon == 10
        assert plan.algorithms == ("ps-oful",)
        assert plan.delta == pytest.approx(0.1)
        assert plan.instance_seed(3) == 3

    def test_fixed_delta(self):
        assert make_plan(delta_rule="fixed", delta_value=0.05).delta == 0.05
        with pytest.raises(ConfigError):
            make_plan(delta_rule="fixed")
        with pytest.raises(ConfigError):
            make_plan(delta_rule="fixed", delta_value=0.5)

    @pytest.mark.parametrize(
        "overrides",
        [
            {"algorithms": ["ps-oful", "ucb"]},
            {"algorithms": ["fs-scb"]},
            {"algorithms": ["itl", "itl"]},
            {"algorithms": []},
            {"variant": "feature", "algorithms": ["ps-oful"]},
        ],
    )
    def test_rejected_algorithm_lists(self, overrides):
        with pytest.raises(ConfigError):
            make_plan(**overrides)

    def test_figure_presets_scale_the_theoretical_constants(self):
        plan = make_plan()
        assert (plan.oracle_mode, plan.confidence_scale, plan.alpha_scale, plan.range_scale) == ("native", 1.0, 1.0, 1.0)
        for experiment in ("fig1-topleft", "fig1-topright"):
            plan = ExperimentConfig(experiment=experiment).resolve()
            assert (plan.oracle_mode, plan.confidence_scale) == ("oful", 0.1)
        plan = ExperimentConfig(experiment="fig1-bottomleft").resolve()
        assert (plan.alpha_scale, plan.range_scale) == (250.0, 0.1)
        assert plan.oracle_mode == "native"

    @pytest.mark.parametrize("key", ["confidence_scale", "alpha_scale", "range_scale"])
    def test_scales_must_be_positive(self, key):
        with pytest.raises(ConfigError):
            validate_config({"experiment": "custom", key: 0.0})

    def test_custom_needs_a_variant(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(algorithms=["itl"]).resolve()

    def test_schema_violations(self):
        with pytest.raises(ConfigError):
            validate_config({"experiment": "custom", "bogus": 1})
        with pytest.raises(ConfigError):
            validate_config({"horizon": 0})
        with pytest.raises(ConfigError):
            validate_config({"experiment": "fig2"})

    def test_config_files(self, tmp_path):
        good = tmp_path / "good.yaml"
        good.write_text(yaml.safe_dump({"variant": "disjoint", "algorithms": "itl,oracle", "horizon": 5}))
        plan = load_experiment_config(good).resolve()
        assert (plan.variant, plan.algorithms, plan.horizon) == ("disjoint", ("itl", "oracle"), 5)

        listed = tmp_path / "list.yaml"
        listed.write_text("- a\n- b\n")
        with pytest.raises(ConfigError):
            load_experiment_config(listed)
        broken = tmp_path / "broken.yaml"
        broken.write_text("horizon: [1\n")
        with pytest.raises(ConfigError):
            load_experiment_config(broken)
        with pytest.raises(OSError):
            load_experiment_config(tmp_path / "missing.yaml")


class TestRuns:

    def test_single_action_without_noise_has_zero_regret(self):
        table = run_experiment(make_plan(n_actions=1, noise_sigma=0.0, horizon=15))
        assert table.algorithms == ["itl", "oracle", "ps-oful"]
        assert (table.summary["mean_cum_regret"] == 0.0).all()
        assert (table.summary["n_instances"] == 2).all()

    def test_feature_selection_run(self):
        table = run_experiment(make_plan(variant="feature", algorithms=["fs-scb", "oracle"], horizon=15, n_actions=5))
        assert table.algorithms == ["fs-scb", "oracle"]
        assert len(table) == 2 * 15

    def test_regret_balancing_run(self):
        table = run_experiment(make_plan(variant="balancing20", algorithms=["ps-oful", "regret-balancing"], horizon=25, n_instances=1))
        assert table.final("regret-balancing")[2] == 1
        assert (table.summary["mean_cum_regret"] >= 0.0).all()

    def test_unit_ball_run(self):
        table = run_experiment(make_plan(action_set="unit-ball", horizon=10, n_instances=1))
        assert len(table) == 3 * 10

    def test_cumulative_regret_never_decreases(self):
        table = run_experiment(make_plan(horizon=30))
        for algorithm in table.algorithms:
            curve = table.curve(algorithm)["mean_cum_regret"].to_numpy()
            assert (curve[1:] >= curve[:-1]).all()

    def test_artifacts_are_reproducible(self, tmp_path):
        plan = make_plan(n_instances=3)
        _, first = run_and_write(plan, tmp_path / "a")
        _, second = run_and_write(plan, tmp_path / "b")
        parallel = make_plan(n_instances=3, n_workers=2)
        _, third = run_and_write(parallel, tmp_path / "c")

        for key in ("csv", "plot", "manifest"):
            assert first[key].read_bytes() == second[key].read_bytes()
        assert first["csv"].read_bytes() == third["csv"].read_bytes()
        assert first["plot"].read_bytes() == third["plot"].read_bytes()
        assert first["csv"].parent == tmp_path / "a" / "custom"

    def test_oracle_flavours(self):
        env = runner.make_env(make_plan(), 0)
        true_model = env.agent_models[env.true_model_index]

        native = runner.baseline_oracle(env, confidence_scale=0.1)
        assert isinstance(native, PsOful)
        assert len(native.models) == 1 and native.models[0] is true_model
        assert native.confidence_scale == 0.1

        biased = runner.baseline_oracle(env, "oful")
        assert isinstance(biased, Oful)
        assert biased.regressor.bias == pytest.approx(true_model.center_estimate)
        assert biased.bias_radius == pytest.approx(true_model.effective_radius)
        assert biased.width() < runner.baseline_itl(env).width()

        with pytest.raises(ConfigError):
            runner.baseline_oracle(env, "igw")

    def test_feature_oracle_shares_the_scales(self):
        plan = make_plan(variant="feature", algorithms=["fs-scb", "oracle"], horizon=15, n_actions=5, alpha_scale=3.0, range_scale=0.5)
        env = runner.make_env(plan, 0)
        fs = runner.build_policy("fs-scb", env, plan, policy_rng(0))
        oracle = runner.build_policy("oracle", env, plan, policy_rng(0))
        assert isinstance(oracle, FsScb)
        assert len(oracle.models) == 1
        assert fs.range_scale == oracle.range_scale == 0.5
        unscaled = FsScb(env.agent_models, env.constants)
        assert fs.alpha == pytest.approx(3.0 * unscaled.alpha)

    def test_failed_instances_are_excluded(self, monkeypatch):
        build_policy = runner.build_policy

        def flaky(label, env, plan, rng):
            if env.seed == 1:
                raise RuntimeError("boom")
            return build_policy(label, env, plan, rng)

        monkeypatch.setattr(runner, "build_policy", flaky)
        outcome = execute_plan(make_plan(n_instances=3, max_failure_fraction=0.5))
        assert outcome.failed_instances == [1]
        assert (outcome.table.summary["n_instances"] == 2).all()
        assert outcome.manifest()["n_failed"] == 1

        with pytest.raises(ExperimentRuntimeError):
            execute_plan(make_plan(n_instances=3, max_failure_fraction=0.0))


@pytest.fixture(scope="module")
def table():
    return run_experiment(make_plan(horizon=10))


class TestArtifacts:

    def test_csv_layout(self, table, tmp_path):
        path = write_csv(table, tmp_path / "out" / "regret.csv")
        lines = path.read_text(encoding="utf-8").split("\n")
        assert lines[0] == ",".join(SUMMARY_COLUMNS)
        assert lines[-1] == ""
        assert len(lines) == 1 + 3 * 10 + 1

    def test_csv_reads_back(self, table, tmp_path):
        path = write_csv(table, tmp_path / "regret.csv")
        loaded = read_csv(path)
        assert loaded.records is None
        pd.testing.assert_frame_equal(loaded.summary, table.summary, check_dtype=False)

    def test_foreign_csv_is_rejected(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(DimensionError):
            read_csv(path)

    def test_empty_table_writes_nothing(self, tmp_path):
        path = tmp_path / "regret.csv"
        with pytest.raises(EmptyInputError):
            write_csv(RegretTable.empty(), path)
        assert not path.exists()
        with pytest.raises(EmptyInputError):
            emit_plot(RegretTable.empty(), tmp_path / "regret.svg")

    def test_plot_is_valid_svg(self, table, tmp_path):
        path = emit_plot(table, tmp_path / "regret.svg", title="custom")
        assert ET.parse(path).getroot().tag.endswith("svg")
        assert emit_plot(table, tmp_path / "again.svg", title="custom").read_bytes() == path.read_bytes()

    def test_manifest_round_trip(self, tmp_path):
        manifest = {"plan": {"horizon": 10, "algorithms": ["itl"]}, "n_failed": 0}
        path = write_manifest(manifest, tmp_path / "manifest.yaml")
        assert yaml.safe_load(path.read_text(encoding="utf-8")) == manifest


def decile_ratio(table, algorithm: str) -> float:
    inst = table.instantaneous_means(algorithm)
    decile = max(1, len(inst) // 10)
    return float(inst[-decile:].mean() / inst[:decile].mean())


@pytest.mark.slow
class TestFigurePresets:
    """The preset orderings at full horizon over fewer instances."""

    @pytest.mark.parametrize("experiment", ["fig1-topleft", "fig1-topright"])
    def test_ball_ordering(self, experiment):
        table = run_experiment(ExperimentConfig(experiment=experiment, n_instances=10).resolve())
        oracle, ps, itl = (table.final(label)[0] for label in ("oracle", "ps-oful", "itl"))
        assert oracle < ps < itl

    def test_feature_selection_is_sublinear(self):
        table = run_experiment(ExperimentConfig(experiment="fig1-bottomleft", n_instances=5).resolve())
        assert decile_ratio(table, "fs-scb") < 0.5
        assert decile_ratio(table, "oracle") < 0.5
