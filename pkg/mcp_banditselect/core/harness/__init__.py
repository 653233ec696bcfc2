"""Experiment configuration, execution and artifacts."""

from .artifacts import emit_plot, read_csv, write_csv, write_manifest
from .experiment_config import (
    ALGORITHMS,
    ExperimentConfig,
    ExperimentPlan,
    load_experiment_config,
    load_presets,
)
from .runner import (
    ExperimentOutcome,
    baseline_itl,
    baseline_oracle,
    build_policy,
    execute_plan,
    run_and_write,
    run_experiment,
    run_instance,
)

__all__ = [
    "emit_plot",
    "read_csv",
    "write_csv",
    "write_manifest",
    "ALGORITHMS",
    "ExperimentConfig",
    "ExperimentPlan",
    "load_experiment_config",
    "load_presets",
    "ExperimentOutcome",
    "baseline_itl",
    "baseline_oracle",
    "build_policy",
    "execute_plan",
    "run_and_write",
    "run_experiment",
    "run_instance",
]
