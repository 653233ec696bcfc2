"""Run configured algorithms over seeded instances and collect their regret.

Instance ``i`` uses seed ``master_seed + i``. Every algorithm on an instance
sees the same noise draw at the same round, so two algorithms that play the
same action observe the same reward. Instances may run in joblib worker
processes; results are reduced in instance order, so the output never depends on the
number of workers.
"""

import dataclasses
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Dict, List

import numpy as np
from joblib import Parallel, delayed
from loguru import logger

from ..bounds import reference_U, regret_envelope
from ..envs.synth import (
    PARAM_SELECTION,
    EnvInstance,
    draw_reward,
    gen_ball_env,
    gen_feature_env,
    noise_stream,
    policy_rng,
)
from ..errors import ConfigError, ExperimentRuntimeError
from ..policies import BanditPolicy, FsScb, Oful, PsOful, RegretBalancer
from ..regret import RegretTable, accumulate, instantaneous_regret
from ..types import RegretRecord, max_effective_radius
from .artifacts import emit_plot, write_csv, write_manifest
from .experiment_config import ExperimentConfig, ExperimentPlan


@dataclass
class InstanceResult:
    index: int
    seed: int
    records: List[RegretRecord] = field(default_factory=list)
    manifest: dict = field(default_factory=dict)
    failed: bool = False
    error: str | None = None


@dataclass
class ExperimentOutcome:
    """Regret table of a run plus what is needed to audit it."""

    plan: ExperimentPlan
    table: RegretTable
    instances: List[InstanceResult]

    @property
    def failed_instances(self) -> List[int]:
        return [result.index for result in self.instances if result.failed]

    def manifest(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "n_failed": len(self.failed_instances),
            "failed_instances": self.failed_instances,
            "instances": [result.manifest for result in self.instances],
        }


def make_env(plan: ExperimentPlan, index: int) -> EnvInstance:
    seed = plan.instance_seed(index)
    if plan.is_feature_selection:
        return gen_feature_env(
            seed,
            horizon=plan.horizon,
            n_actions=plan.n_actions,
            noise_scale=plan.noise_sigma,
            noise_scale_is_variance=plan.noise_scale_is_variance,
            delta=plan.delta,
        )
    return gen_ball_env(
        plan.variant,
        seed,
        horizon=plan.horizon,
        action_set=plan.action_set,
        n_actions=plan.n_actions,
        noise_sigma=plan.noise_sigma,
        delta=plan.delta,
    )


def baseline_itl(env: EnvInstance) -> Oful:
    """OFUL from scratch: ridge with ``lambda = 1`` and no use of the models."""
    return Oful(env.constants, lam=1.0, name="itl")


def baseline_oracle(
    env: EnvInstance,
    mode: str = "native",
    eta: float = 2.0,
    rng: np.random.Generator | None = None,
    confidence_scale: float = 1.0,
    alpha_scale: float = 1.0,
    range_scale: float = 1.0,
) -> BanditPolicy:
    """Policy that is told which model is the true one.

    ``mode="native"`` runs the selection algorithm itself on the true model
    alone: PS-OFUL on the true ball, or FS-SCB on the true feature map.
    ``mode="oful"`` runs OFUL instead. On balls its ridge is regularized toward
    the true center estimate with ``b + c`` in place of ``S``. On feature maps it
    runs on the true map.

    Raises:
        ConfigError: On an unknown mode.
    """
    if mode not in ("native", "oful"):
        raise ConfigError(f"unknown oracle mode {mode!r}")
    true_model = env.agent_models[env.true_model_index]
    constants = dataclasses.replace(env.constants, M=1)
    if env.kind == PARAM_SELECTION:
        if mode == "oful":
            return Oful(
                constants,
                lam=1.0,
                bias=true_model.center_estimate,
                bias_radius=true_model.effective_radius,
                name="oracle",
            )
        return PsOful([true_model], constants, eta=eta, name="oracle", confidence_scale=confidence_scale)
    if mode == "oful":
        return Oful(constants, lam=1.0, name="oracle")
    return FsScb(
        [true_model],
        constants,
        eta=eta,
        rng=rng,
        name="oracle",
        alpha_scale=alpha_scale,
        range_scale=range_scale,
    )


def regret_balancing_policy(env: EnvInstance, eta: float = 2.0, confidence_scale: float = 1.0) -> RegretBalancer:
    """Balancer over one single-model PS-OFUL base per ball."""
    c = env.constants
    single = dataclasses.replace(c, M=1)
    bases = [
        PsOful([model], single, eta=eta, name=f"base-{i}", confidence_scale=confidence_scale)
        for i, model in enumerate(env.agent_models)
    ]
    max_bc = max_effective_radius(env.agent_models)
    return RegretBalancer(bases, partial(_reference_bound, d=c.d, L=c.L, R=c.R, M=c.M, delta=c.delta, max_bc=max_bc))


def _reference_bound(n: int, d: int, L: float, R: float, M: int, delta: float, max_bc: float) -> float:
    return reference_U(n, d, L, R, M, delta, max_bc)


def build_policy(label: str, env: EnvInstance, plan: ExperimentPlan, rng: np.random.Generator) -> BanditPolicy:
    if label == "ps-oful":
        return PsOful(env.agent_models, env.constants, eta=plan.eta, confidence_scale=plan.confidence_scale)
    if label == "fs-scb":
        return FsScb(
            env.agent_models,
            env.constants,
            eta=plan.eta,
            rng=rng,
            alpha_scale=plan.alpha_scale,
            range_scale=plan.range_scale,
        )
    if label == "itl":
        return baseline_itl(env)
    if label == "oracle":
        return baseline_oracle(
            env,
            plan.oracle_mode,
            plan.eta,
            rng,
            confidence_scale=plan.confidence_scale,
            alpha_scale=plan.alpha_scale,
            range_scale=plan.range_scale,
        )
    if label == "regret-balancing":
        return regret_balancing_policy(env, plan.eta, plan.confidence_scale)
    raise ConfigError(f"unknown algorithm {label!r}")


def run_policy(policy: BanditPolicy, label: str, env: EnvInstance, noise: np.ndarray, instance_id: int) -> List[RegretRecord]:
    """Play ``policy`` for ``len(noise)`` rounds and return one record per round."""
    records: List[RegretRecord] = []
    cumulative = 0.0
    for t in range(1, noise.shape[0] + 1):
        observation = env.context(t) if policy.contextual else env.action_set(t)
        proposal = policy.propose(observation)
        reward = draw_reward(env, proposal.action, z=float(noise[t - 1]), round=t)
        policy.update(proposal, reward)
        regret = instantaneous_regret(env, t, proposal.action)
        cumulative += regret
        records.append(RegretRecord(instance_id, t, label, regret, cumulative))
    return records


def run_instance(plan: ExperimentPlan, index: int) -> InstanceResult:
    """Run every configured algorithm on instance ``index``.

    A failure is logged and reported in the result instead of raised.
    """
    seed = plan.instance_seed(index)
    try:
        env = make_env(plan, index)
        noise = noise_stream(seed, plan.horizon)
        records: List[RegretRecord] = []
        extras: Dict[str, float] = {}
        for label in plan.algorithms:
            policy = build_policy(label, env, plan, policy_rng(seed))
            records.extend(run_policy(policy, label, env, noise, index))
            if label == "ps-oful":
                c = env.constants
                extras["ps_oful_regret_envelope"] = regret_envelope(c.T, c.d, c.G, policy.gamma_at(c.T))
    except Exception as e:
        logger.exception(f"❌ instance {index} (seed={seed}) failed: {e}")
        return InstanceResult(
            index,
            seed,
            manifest={"instance": index, "seed": seed, "failed": True, "error": f"{type(e).__name__}: {e}"},
            failed=True,
            error=f"{type(e).__name__}: {e}",
        )

    logger.info(f"✅ instance {index} (seed={seed}) finished {len(plan.algorithms)} algorithm(s)")
    manifest = {"instance": index, **env.manifest(), **extras}
    return InstanceResult(index, seed, records, manifest)


def execute_plan(plan: ExperimentPlan) -> ExperimentOutcome:
    """Run all instances of ``plan`` and aggregate their regret.

    Raises:
        ExperimentRuntimeError: If more than ``max_failure_fraction`` of the instances failed.
    """
    logger.info(
        f"🔧 experiment={plan.experiment} variant={plan.variant} T={plan.horizon} "
        f"instances={plan.n_instances} algorithms={list(plan.algorithms)} workers={plan.n_workers}",
    )
    indices = range(plan.n_instances)
    if plan.n_workers > 1:
        results = Parallel(n_jobs=plan.n_workers)(delayed(run_instance)(plan, index) for index in indices)
    else:
        results = [run_instance(plan, index) for index in indices]

    failed = [result.index for result in results if result.failed]
    records = [record for result in results if not result.failed for record in result.records]
    table = accumulate(records, failed)
    if failed:
        logger.warning(f"⚠️ {len(failed)}/{plan.n_instances} instance(s) failed and were excluded: {failed}")
    if len(failed) > plan.max_failure_fraction * plan.n_instances:
        raise ExperimentRuntimeError(
            f"{len(failed)}/{plan.n_instances} instances failed, above the tolerated fraction {plan.max_failure_fraction}",
        )
    return ExperimentOutcome(plan, table, results)


def run_experiment(config: ExperimentConfig | ExperimentPlan) -> RegretTable:
    """Resolve ``config`` if needed, run it and return the aggregated regret table."""
    plan = config.resolve() if isinstance(config, ExperimentConfig) else config
    return execute_plan(plan).table


def run_and_write(plan: ExperimentPlan, output_dir: str | Path | None = None) -> tuple[ExperimentOutcome, Dict[str, Path]]:
    """Run ``plan`` and write ``regret.csv``, ``regret.svg`` and ``manifest.yaml`` under ``<out>/<experiment>``."""
    outcome = execute_plan(plan)
    out = Path(output_dir if output_dir is not None else plan.output_dir) / plan.experiment
    paths = {
        "csv": write_csv(outcome.table, out / "regret.csv"),
        "plot": emit_plot(outcome.table, out / "regret.svg", title=plan.experiment),
        "manifest": write_manifest(outcome.manifest(), out / "manifest.yaml"),
    }
    logger.info(f"✅ artifacts of {plan.experiment} written to {out}")
    return outcome, paths
