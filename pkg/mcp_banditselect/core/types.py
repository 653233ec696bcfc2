"""Shared domain types for policies, environments and the experiment harness.

All types here are value objects: they are validated once at construction and
never mutated afterwards, except :class:`History`, which is append-only.
"""

import math
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .errors import DimensionError, InvalidActionError, InvalidParameterError, NumericInputError


def as_feature(values, d: int | None = None) -> np.ndarray:
    """Convert ``values`` into a finite float vector, optionally checking its length.

    Args:
        values: Anything :func:`numpy.asarray` accepts as a 1-d array.
        d: Expected dimension. ``None`` skips the check.

    Returns:
        np.ndarray: A 1-d ``float64`` array.

    Raises:
        DimensionError: If the array is not 1-d or its length is not ``d``.
        NumericInputError: If any entry is NaN or infinite.
    """
    phi = np.asarray(values, dtype=float)
    if phi.ndim != 1:
        raise DimensionError(f"feature must be a vector, got shape {phi.shape}")
    if d is not None and phi.shape[0] != d:
        raise DimensionError(f"feature has dimension {phi.shape[0]}, expected {d}")
    if not np.all(np.isfinite(phi)):
        raise NumericInputError("feature contains non-finite values")
    return phi


@dataclass(frozen=True)
class AssumptionConstants:
    """Problem constants the agent is told about.

    Attributes:
        d: Feature dimension.
        L: Bound on every feature norm.
        S: Bound on the parameter norm.
        G: Bound on every mean reward.
        R: Sub-Gaussian scale of the noise.
        T: Horizon.
        M: Number of models.
        K: Number of actions, ``0`` for a continuous action set.
        delta: Confidence parameter in ``(0, 1/4]``.
    """

    d: int
    L: float
    S: float
    G: float
    R: float
    T: int
    M: int
    K: int = 0
    delta: float = 0.25

    def __post_init__(self):
        if self.d < 1 or self.T < 1 or self.M < 1:
            raise InvalidParameterError(f"d, T and M must be >= 1, got d={self.d} T={self.T} M={self.M}")
        if self.K < 0:
            raise InvalidParameterError(f"K must be >= 0, got {self.K}")
        if not 0.0 < self.delta <= 0.25:
            raise InvalidParameterError(f"delta must lie in (0, 1/4], got {self.delta}")
        for name in ("L", "S", "G", "R"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{name} must be a finite value >= 0, got {value}")


class FiniteActionSet:
    """A finite set of ``K`` actions described by their feature rows."""

    is_finite = True

    def __init__(self, features):
        features = np.array(features, dtype=float)
        if features.ndim != 2 or features.shape[0] == 0:
            raise DimensionError(f"action features must be a non-empty K x d matrix, got shape {features.shape}")
        if not np.all(np.isfinite(features)):
            raise NumericInputError("action features contain non-finite values")
        features.setflags(write=False)
        self.features: np.ndarray = features

    @property
    def K(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def feature(self, action_id: int) -> np.ndarray:
        if not 0 <= action_id < self.K:
            raise InvalidActionError(f"action {action_id} outside [0, {self.K})")
        return self.features[action_id]

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.features, axis=1)))


class UnitBallActionSet:
    """The continuous action set ``{phi : ||phi|| <= L}``."""

    is_finite = False

    def __init__(self, d: int, L: float = 1.0):
        if d < 1 or L <= 0:
            raise InvalidParameterError(f"unit ball needs d >= 1 and L > 0, got d={d} L={L}")
        self.d = d
        self.L = float(L)

    @property
    def K(self) -> int:
        return 0

    def max_norm(self) -> float:
        return self.L


ActionSet = FiniteActionSet | UnitBallActionSet


@dataclass
class History:
    """Append-only sequence of ``(feature, reward)`` pairs seen by a policy."""

    rounds: List[Tuple[np.ndarray, float]] = field(default_factory=list)

    def append(self, feature: np.ndarray, reward: float) -> None:
        self.rounds.append((np.array(feature, dtype=float), float(reward)))

    def __len__(self) -> int:
        return len(self.rounds)

    def __iter__(self) -> Iterator[Tuple[np.ndarray, float]]:
        return iter(self.rounds)

    def features(self) -> np.ndarray:
        return np.array([phi for phi, _ in self.rounds])

    def rewards(self) -> np.ndarray:
        return np.array([y for _, y in self.rounds])


@dataclass(frozen=True)
class RegretRecord:
    """Regret of one algorithm at one round of one instance."""

    instance_id: int
    round: int
    algorithm: str
    instantaneous_regret: float
    cumulative_regret: float


@dataclass(frozen=True)
class BallModel:
    """A candidate model ``B(center_estimate, radius + center_error)``.

    Attributes:
        center_estimate: Estimated center of the ball.
        radius: Radius ``b`` of the true ball.
        center_error: Bound ``c`` on the distance between true and estimated center.
    """

    center_estimate: np.ndarray
    radius: float
    center_error: float

    def __post_init__(self):
        center = as_feature(self.center_estimate)
        center.setflags(write=False)
        object.__setattr__(self, "center_estimate", center)
        if self.radius < 0 or self.center_error < 0:
            raise InvalidParameterError(f"radius and center_error must be >= 0, got {self.radius}, {self.center_error}")

    @property
    def effective_radius(self) -> float:
        """Radius ``b + c`` of the agent-side ball around ``center_estimate``."""
        return self.radius + self.center_error

    def contains(self, theta, tol: float = 1e-12) -> bool:
        return float(np.linalg.norm(np.asarray(theta) - self.center_estimate)) <= self.effective_radius + tol


@dataclass(frozen=True)
class FeatureMapModel:
    """One candidate feature map, tabulated per context and action.

    Attributes:
        map_id: Index of the map among the candidates.
        features: Array of shape ``(n_contexts, K, d)``.
    """

    map_id: int
    features: np.ndarray

    def __post_init__(self):
        table = np.array(self.features, dtype=float)
        if table.ndim == 2:
            table = table[None, :, :]
        if table.ndim != 3:
            raise DimensionError(f"feature table must have shape (n_contexts, K, d), got {table.shape}")
        table.setflags(write=False)
        object.__setattr__(self, "features", table)

    @property
    def K(self) -> int:
        return self.features.shape[1]

    @property
    def d(self) -> int:
        return self.features.shape[2]

    def for_context(self, context: int) -> np.ndarray:
        if not 0 <= context < self.features.shape[0]:
            raise InvalidActionError(f"context {context} outside [0, {self.features.shape[0]})")
        return self.features[context]

    def feature(self, context: int, action_id: int) -> np.ndarray:
        table = self.for_context(context)
        if not 0 <= action_id < table.shape[0]:
            raise InvalidActionError(f"action {action_id} outside [0, {table.shape[0]})")
        return table[action_id]

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.features, axis=2)))


def max_effective_radius(models: Sequence[BallModel]) -> float:
    """Return ``max_i (b_i + c_i)`` over ``models``."""
    return max(model.effective_radius for model in models)
