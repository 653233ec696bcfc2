"""Pseudo-regret accounting.

Regret is computed from noise-free mean rewards. Per-round records are
collected into a :class:`RegretTable`, which keeps the raw records together with
the per-round mean and sample standard deviation across instances.
"""

from dataclasses import asdict
from typing import Iterable, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import DuplicateRecordError, InvalidActionError
from .types import RegretRecord

RECORD_COLUMNS = ["instance_id", "round", "algorithm", "instantaneous_regret", "cumulative_regret"]
SUMMARY_COLUMNS = ["algorithm", "round", "mean_cum_regret", "std_cum_regret", "n_instances"]


def instantaneous_regret(env, round: int, chosen) -> float:
    """Return the mean-reward gap between the best action and ``chosen``.

    Args:
        env: An environment exposing ``action_set(round)``, ``mean_rewards(round)``,
            ``mean_reward(feature)`` and ``optimal_value(round)``.
        round: Round index, starting at 1.
        chosen: An action id for finite action sets, or a feature vector for the
            unit-ball action set.

    Returns:
        float: ``<phi(a*), theta*> - <phi(chosen), theta*>``, never negative.

    Raises:
        InvalidActionError: If ``chosen`` is not an action of the round's action set.
    """
    action_set = env.action_set(round)
    if action_set.is_finite:
        if isinstance(chosen, (np.ndarray, list, tuple)):
            raise InvalidActionError("finite action sets take an action id, not a feature")
        action_id = int(chosen)
        means = env.mean_rewards(round)
        if not 0 <= action_id < means.shape[0]:
            raise InvalidActionError(f"action {action_id} outside [0, {means.shape[0]})")
        return float(np.max(means) - means[action_id])

    feature = np.asarray(chosen, dtype=float)
    if feature.shape != (action_set.d,) or np.linalg.norm(feature) > action_set.L * (1 + 1e-9):
        raise InvalidActionError(f"feature {feature} is not a point of the radius-{action_set.L} ball")
    # ⟨φ, θ*⟩ ≤ L‖θ*‖ holds exactly; the clamp only absorbs rounding.
    return max(0.0, env.optimal_value(round) - env.mean_reward(feature))


class RegretTable:
    """Per-round regret of several algorithms over several instances.

    Attributes:
        records: One row per (instance, algorithm, round), or ``None`` for a
            table read back from its CSV summary.
        summary: One row per (algorithm, round) with the mean and sample
            standard deviation of the cumulative regret across instances.
        failed_instances: Indices of instances excluded after a policy error.
    """

    def __init__(
        self,
        summary: pd.DataFrame,
        records: pd.DataFrame | None = None,
        failed_instances: Sequence[int] = (),
    ):
        self.summary = summary.reset_index(drop=True)
        self.records = records
        self.failed_instances: Tuple[int, ...] = tuple(failed_instances)

    @classmethod
    def empty(cls) -> "RegretTable":
        return cls(pd.DataFrame(columns=SUMMARY_COLUMNS), pd.DataFrame(columns=RECORD_COLUMNS))

    def __len__(self) -> int:
        return len(self.summary)

    @property
    def is_empty(self) -> bool:
        return self.summary.empty

    @property
    def algorithms(self) -> list[str]:
        return sorted(self.summary["algorithm"].unique().tolist())

    def query(self, algorithm: str, round: int) -> Tuple[float, float]:
        """Return ``(mean, std)`` of the cumulative regret of ``algorithm`` at ``round``."""
        rows = self.summary[(self.summary["algorithm"] == algorithm) & (self.summary["round"] == round)]
        if rows.empty:
            raise KeyError(f"no entry for algorithm={algorithm!r} round={round}")
        row = rows.iloc[0]
        return float(row["mean_cum_regret"]), float(row["std_cum_regret"])

    def curve(self, algorithm: str) -> pd.DataFrame:
        return self.summary[self.summary["algorithm"] == algorithm].sort_values("round")

    def final(self, algorithm: str) -> Tuple[float, float, int]:
        """Return ``(mean, std, n_instances)`` at the last recorded round of ``algorithm``."""
        row = self.curve(algorithm).iloc[-1]
        return float(row["mean_cum_regret"]), float(row["std_cum_regret"]), int(row["n_instances"])

    def final_per_instance(self, algorithm: str) -> np.ndarray:
        """Final cumulative regret of ``algorithm`` on each instance, ordered by instance id."""
        frame = self.records[self.records["algorithm"] == algorithm]
        last = frame.sort_values("round").groupby("instance_id")["cumulative_regret"].last()
        return last.sort_index().to_numpy(dtype=float)

    def instantaneous_means(self, algorithm: str) -> np.ndarray:
        """Mean instantaneous regret of ``algorithm`` per round, averaged over instances."""
        frame = self.records[self.records["algorithm"] == algorithm]
        return frame.groupby("round")["instantaneous_regret"].mean().sort_index().to_numpy(dtype=float)


def summarize(records: pd.DataFrame) -> pd.DataFrame:
    """Collapse per-instance records into the (algorithm, round) summary frame."""
    grouped = records.groupby(["algorithm", "round"], sort=True)["cumulative_regret"]
    summary = grouped.agg(mean_cum_regret="mean", std_cum_regret="std", n_instances="count").reset_index()
    # A single instance has no sample deviation.
    summary["std_cum_regret"] = summary["std_cum_regret"].fillna(0.0)
    summary["round"] = summary["round"].astype(int)
    summary["n_instances"] = summary["n_instances"].astype(int)
    return summary[SUMMARY_COLUMNS]


def accumulate(records: Iterable[RegretRecord], failed_instances: Sequence[int] = ()) -> RegretTable:
    """Build a :class:`RegretTable` from per-round records.

    Cumulative regret is recomputed as the running sum of the instantaneous
    regret within each (instance, algorithm) stream, in round order.

    Raises:
        DuplicateRecordError: If two records share an (instance, algorithm, round) key.
    """
    frame = pd.DataFrame([asdict(record) for record in records], columns=RECORD_COLUMNS)
    if frame.empty:
        table = RegretTable.empty()
        table.failed_instances = tuple(failed_instances)
        return table

    keys = ["instance_id", "algorithm", "round"]
    duplicated = frame.duplicated(subset=keys, keep=False)
    if duplicated.any():
        first = frame[duplicated].iloc[0]
        raise DuplicateRecordError(
            f"duplicate record instance={first['instance_id']} algorithm={first['algorithm']} round={first['round']}",
        )

    frame = frame.sort_values(keys, kind="mergesort").reset_index(drop=True)
    frame["cumulative_regret"] = frame.groupby(["instance_id", "algorithm"])["instantaneous_regret"].cumsum()
    return RegretTable(summarize(frame), frame, failed_instances)
