"""Seeded synthetic environments.

Two families are generated:

* ball environments (parameter selection): ``theta*`` is drawn uniformly from
  one of ``M`` balls in ``R^2`` and the agent sees perturbed centers;
* the feature environment (feature selection): ``M = 10`` random feature
  maps over ``K = 50`` actions, the first of which is linear in ``theta*``.

Every instance is a pure function of its arguments. Random streams are split
by key: ``[seed, ENV_KEY]`` builds the instance, ``[seed, NOISE_KEY]`` draws
the reward noise and ``[seed, POLICY_KEY]`` drives randomized policies.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from loguru import logger

from ..errors import AssumptionError, ConfigError, InvalidActionError, InvalidParameterError
from ..types import (
    AssumptionConstants,
    BallModel,
    FeatureMapModel,
    FiniteActionSet,
    UnitBallActionSet,
)

ENV_KEY = 0
NOISE_KEY = 1
POLICY_KEY = 2

PARAM_SELECTION = "param-selection"
FEATURE_SELECTION = "feature-selection"

ASSUMPTION_TOL = 1e-9


@dataclass(frozen=True)
class BallLayout:
    """Where the true centers of a ball variant are drawn and how large the balls are."""

    lows: Tuple[float, ...]
    highs: Tuple[float, ...]
    radii: Tuple[float, ...]
    center_error: float = 0.1
    S: float | None = None


def _grouped(values: Sequence[float], size: int) -> Tuple[float, ...]:
    return tuple(v for v in values for _ in range(size))


BALL_LAYOUTS: Dict[str, BallLayout] = {
    "overlapping": BallLayout(
        lows=(1.0,) * 5,
        highs=(2.0,) * 5,
        radii=(0.1, 0.2, 0.3, 0.4, 0.5),
    ),
    "disjoint": BallLayout(
        lows=(1.0, 3.0, -2.0, -4.0, 4.0),
        highs=(2.0, 4.0, -1.0, -3.0, 5.0),
        radii=(0.1, 0.2, 0.3, 0.4, 0.5),
        S=7.0,
    ),
    "balancing20": BallLayout(
        lows=_grouped((1.0, 2.0, 3.0, 4.0), 5),
        highs=_grouped((2.0, 3.0, 4.0, 5.0), 5),
        radii=_grouped((0.3, 0.5, 0.3, 0.2), 5),
        S=7.0,
    ),
}


@dataclass(frozen=True, eq=False)
class EnvInstance:
    """One generated bandit problem.

    ``theta_star`` and ``true_model_index`` belong to the environment; policies
    other than the oracle baseline only ever see ``agent_models`` and ``constants``.

    Attributes:
        kind: ``param-selection`` or ``feature-selection``.
        variant: Generator variant the instance came from.
        seed: Instance seed.
        theta_star: Reward parameter (of the true map for feature selection).
        action_features: ``K x d`` features of a finite action set, ``None`` for the unit ball.
        noise_sigma: Standard deviation of the Gaussian reward noise.
        agent_models: :class:`BallModel` or :class:`FeatureMapModel` candidates.
        true_model_index: Index of the model that generated ``theta_star``.
        constants: Constants handed to the agent.
        true_centers: True ball centers ``mu_i`` (parameter selection only).
    """

    kind: str
    variant: str
    seed: int
    theta_star: np.ndarray
    action_features: np.ndarray | None
    noise_sigma: float
    agent_models: Tuple
    true_model_index: int
    constants: AssumptionConstants
    true_centers: np.ndarray | None = None
    _action_set: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.action_features is None:
            action_set = UnitBallActionSet(self.constants.d, self.constants.L)
        else:
            action_set = FiniteActionSet(self.action_features)
        object.__setattr__(self, "_action_set", action_set)

    def action_set(self, round: int = 1):
        """Action set of ``round``; every round shares the same set."""
        return self._action_set

    def context(self, round: int = 1) -> int:
        return 0

    def mean_reward(self, feature) -> float:
        return float(np.asarray(feature, dtype=float) @ self.theta_star)

    def mean_rewards(self, round: int = 1) -> np.ndarray:
        if self.action_features is None:
            raise InvalidActionError("the unit ball has no enumerable actions")
        return self.action_features @ self.theta_star

    def optimal_value(self, round: int = 1) -> float:
        if self.action_features is None:
            return self.constants.L * float(np.linalg.norm(self.theta_star))
        return float(np.max(self.mean_rewards(round)))

    def expected_reward(self, round: int, action) -> float:
        """Mean reward of an action id (finite set) or a feature (unit ball)."""
        if self.action_features is None:
            return self.mean_reward(action)
        return float(self.mean_rewards(round)[int(action)])

    def manifest(self) -> dict:
        c = self.constants
        return {
            "kind": self.kind,
            "variant": self.variant,
            "seed": int(self.seed),
            "true_model_index": int(self.true_model_index),
            "theta_star": [float(v) for v in self.theta_star],
            "noise_sigma": float(self.noise_sigma),
            "action_set": "unit-ball" if self.action_features is None else f"finite-{self.action_features.shape[0]}",
            "constants": {
                "d": c.d,
                "L": float(c.L),
                "S": float(c.S),
                "G": float(c.G),
                "R": float(c.R),
                "T": c.T,
                "M": c.M,
                "K": c.K,
                "delta": float(c.delta),
            },
        }


def env_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, ENV_KEY])


def policy_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, POLICY_KEY])


def noise_stream(seed: int, horizon: int) -> np.ndarray:
    """Standard normal draws indexed by ``round - 1``, shared by every algorithm on an instance."""
    return np.random.default_rng([seed, NOISE_KEY]).standard_normal(horizon)


def default_delta(horizon: int) -> float:
    return min(1.0 / horizon, 0.25)


def _unit_direction(d: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.standard_normal(d)
        norm = float(np.linalg.norm(g))
        if norm > 0:
            return g / norm


def sample_uniform_ball(center, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the closed ball ``B(center, radius)``."""
    center = np.asarray(center, dtype=float)
    if radius < 0:
        raise AssumptionError(f"radius must be >= 0, got {radius}")
    d = center.shape[0]
    direction = _unit_direction(d, rng)
    r = radius * rng.uniform() ** (1.0 / d)
    return center + r * direction


def draw_reward(
    env: EnvInstance,
    action,
    rng: np.random.Generator | None = None,
    z: float | None = None,
    round: int | None = None,
) -> float:
    """Mean reward of ``action`` plus Gaussian noise of scale ``env.noise_sigma``.

    ``action`` is a feature vector, or whatever :meth:`EnvInstance.expected_reward`
    takes when ``round`` is given. ``z`` is a pre-drawn standard normal; without it
    one is drawn from ``rng``.

    Raises:
        InvalidParameterError: If neither ``z`` nor ``rng`` is given.
    """
    if z is None:
        if rng is None:
            raise InvalidParameterError("draw_reward needs a noise draw z or a generator")
        z = float(rng.standard_normal())
    mean = env.mean_reward(action) if round is None else env.expected_reward(round, action)
    return mean + env.noise_sigma * float(z)


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise AssumptionError(message)


def gen_ball_env(
    variant: str,
    seed: int,
    horizon: int = 1000,
    action_set: str = "finite",
    n_actions: int = 50,
    noise_sigma: float = 0.1,
    delta: float | None = None,
) -> EnvInstance:
    """Generate a parameter-selection instance of ``variant``.

    Args:
        variant: ``overlapping``, ``disjoint`` or ``balancing20``.
        seed: Instance seed.
        horizon: Horizon ``T`` the agent is told about.
        action_set: ``finite`` (``n_actions`` random unit vectors) or ``unit-ball``.
        n_actions: Size of the finite action set.
        noise_sigma: Noise standard deviation, also used as ``R``.
        delta: Confidence parameter, ``min(1/T, 1/4)`` when omitted.

    Raises:
        ConfigError: If ``variant`` or ``action_set`` is unknown.
        AssumptionError: If the generated instance breaks a model assumption.
    """
    if variant not in BALL_LAYOUTS:
        raise ConfigError(f"unknown ball variant {variant!r}, expected one of {sorted(BALL_LAYOUTS)}")
    if action_set not in ("finite", "unit-ball"):
        raise ConfigError(f"unknown action set {action_set!r}")
    layout = BALL_LAYOUTS[variant]
    rng = env_rng(seed)
    d, L, M = 2, 1.0, len(layout.radii)

    centers = np.array([rng.uniform(lo, hi, size=d) for lo, hi in zip(layout.lows, layout.highs)])
    true_index = int(rng.integers(M))
    theta_star = sample_uniform_ball(centers[true_index], layout.radii[true_index], rng)
    estimates = np.array(
        [mu + rng.uniform(0.0, layout.center_error) * _unit_direction(d, rng) for mu in centers],
    )
    models = tuple(BallModel(est, b, layout.center_error) for est, b in zip(estimates, layout.radii))

    features = None
    if action_set == "finite":
        features = np.array([L * _unit_direction(d, rng) for _ in range(n_actions)])

    reach = max(float(np.linalg.norm(m.center_estimate)) + m.effective_radius for m in models)
    S = reach if layout.S is None else layout.S
    if reach > S:
        logger.warning(f"⚠️ {variant} seed={seed}: raising S from {S} to {reach:.4f} to cover the generated balls")
        S = reach
    G = L * reach

    true_model = models[true_index]
    _check(
        float(np.linalg.norm(theta_star - centers[true_index])) <= layout.radii[true_index] + ASSUMPTION_TOL,
        f"theta* left its true ball (seed={seed})",
    )
    for i, (mu, model) in enumerate(zip(centers, models)):
        _check(
            float(np.linalg.norm(mu - model.center_estimate)) <= model.center_error + ASSUMPTION_TOL,
            f"center estimate {i} is farther than c_i from its center (seed={seed})",
        )
    _check(true_model.contains(theta_star, tol=ASSUMPTION_TOL), f"theta* outside the agent's ball (seed={seed})")
    _check(float(np.linalg.norm(theta_star)) <= S + ASSUMPTION_TOL, f"||theta*|| exceeds S={S} (seed={seed})")

    constants = AssumptionConstants(
        d=d,
        L=L,
        S=S,
        G=G,
        R=noise_sigma,
        T=horizon,
        M=M,
        K=0 if features is None else n_actions,
        delta=default_delta(horizon) if delta is None else delta,
    )
    return EnvInstance(
        kind=PARAM_SELECTION,
        variant=variant,
        seed=seed,
        theta_star=theta_star,
        action_features=features,
        noise_sigma=noise_sigma,
        agent_models=models,
        true_model_index=true_index,
        constants=constants,
        true_centers=centers,
    )


def gen_feature_env(
    seed: int,
    horizon: int = 1000,
    n_actions: int = 50,
    n_models: int = 10,
    d: int = 10,
    noise_scale: float = 0.1,
    noise_scale_is_variance: bool = True,
    L: float = 4.0,
    delta: float | None = None,
) -> EnvInstance:
    """Generate a feature-selection instance whose first map is the true one.

    ``noise_scale`` is the variance of the reward noise when
    ``noise_scale_is_variance`` holds, its standard deviation otherwise.
    """
    rng = env_rng(seed)
    theta = rng.uniform(-1.0, 1.0, size=d)
    theta_star = theta / np.linalg.norm(theta)
    tables: List[np.ndarray] = [rng.uniform(0.0, 1.0, size=(n_actions, d)) for _ in range(n_models)]
    models = tuple(FeatureMapModel(i, table) for i, table in enumerate(tables))
    sigma = math.sqrt(noise_scale) if noise_scale_is_variance else noise_scale

    S = 1.0
    max_norm = max(m.max_norm() for m in models)
    _check(max_norm <= L + ASSUMPTION_TOL, f"feature norm {max_norm:.4f} exceeds L={L} (seed={seed})")

    constants = AssumptionConstants(
        d=d,
        L=L,
        S=S,
        G=L * S,
        R=sigma,
        T=horizon,
        M=n_models,
        K=n_actions,
        delta=default_delta(horizon) if delta is None else delta,
    )
    return EnvInstance(
        kind=FEATURE_SELECTION,
        variant="feature",
        seed=seed,
        theta_star=theta_star,
        action_features=tables[0],
        noise_sigma=sigma,
        agent_models=models,
        true_model_index=0,
        constants=constants,
    )
