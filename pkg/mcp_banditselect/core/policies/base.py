"""Shared policy plumbing: the propose/update protocol and optimistic action rules."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import brentq

from ..errors import EmptyInputError, InvalidParameterError
from ..regressor import RegressorState
from ..types import FiniteActionSet, UnitBallActionSet

# Eigenvalue share below which the optimistic direction is treated as lying
# outside the smallest eigenspace.
_HARD_CASE_TOL = 1e-12


@dataclass
class Proposal:
    """An action a policy commits to for one round.

    Attributes:
        action: Action id for finite action sets, or the feature itself for the
            unit ball. This is what the environment is charged with.
        feature: Feature vector of the action as the policy sees it, ``None``
            for policies that keep one feature per model.
        context: Context id the action was chosen for.
        probabilities: Sampling distribution the action was drawn from, if any.
        base: Index of the base algorithm that proposed the action, if any.
    """

    action: int | np.ndarray
    feature: np.ndarray | None = None
    context: int = 0
    probabilities: np.ndarray | None = None
    base: int | None = None


class BanditPolicy(ABC):
    """A policy plays one round as ``propose`` followed by ``update``.

    ``propose`` receives what the environment reveals before acting: an action
    set for linear policies, a context id for contextual ones.
    """

    name: str = "policy"
    contextual: bool = False

    @abstractmethod
    def propose(self, observation) -> Proposal:
        """Choose the action for the current round."""

    @abstractmethod
    def update(self, proposal: Proposal, reward: float) -> None:
        """Absorb the reward observed for ``proposal``."""

    def step(self, observation, env_reward: Callable[[int | np.ndarray], float]) -> Tuple[Proposal, float]:
        """Play one full round against ``env_reward`` and return the proposal and reward."""
        proposal = self.propose(observation)
        reward = float(env_reward(proposal.action))
        self.update(proposal, reward)
        return proposal, reward


def optimistic_scores(state: RegressorState, features: np.ndarray, width: float) -> np.ndarray:
    """Row-wise ``<phi, theta_hat> + width * ||phi||_{V^{-1}}``."""
    if width < 0 or not math.isfinite(width):
        raise InvalidParameterError(f"confidence width must be a finite value >= 0, got {width}")
    return state.predict_many(features) + width * state.weighted_norms(features)


def optimistic_index(state: RegressorState, features, width: float) -> int:
    """Index of the highest optimistic score; ties go to the lowest index."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[0] == 0:
        raise EmptyInputError("cannot select from an empty action set")
    return int(np.argmax(optimistic_scores(state, features, width)))


def farthest_point(center: np.ndarray, gram: np.ndarray, radius_sq: float) -> np.ndarray:
    """Point of ``{theta : ||theta - center||_V^2 <= radius_sq}`` with the largest norm.

    Writing ``V = Q diag(lam) Q^T`` and ``c = Q^T center``, the maximizer is
    ``theta_j = mu lam_j c_j / (mu lam_j - 1)`` in the eigenbasis, with ``mu``
    the root above ``1 / lam_min`` of ``sum_j lam_j c_j^2 / (mu lam_j - 1)^2 = radius_sq``.
    When ``center`` has no component along the smallest eigenvector the root
    may not exist; the maximizer then moves along that eigenvector.
    """
    if radius_sq < 0:
        raise InvalidParameterError(f"ellipsoid radius must be >= 0, got {radius_sq}")
    if radius_sq == 0:
        return center.copy()

    lam, Q = np.linalg.eigh(gram)
    c = Q.T @ center
    lam_min = float(lam[0])

    def excess(mu: float) -> float:
        return float(np.sum(lam * c**2 / (mu * lam - 1.0) ** 2)) - radius_sq

    low = (1.0 / lam_min) * (1.0 + 1e-12)
    on_min = np.isclose(lam, lam_min, rtol=1e-10, atol=0.0)
    min_share = float(np.sum(lam[on_min] * c[on_min] ** 2))
    if min_share <= _HARD_CASE_TOL * max(1.0, radius_sq) or excess(low) <= 0:
        # Hard case: mu = 1 / lam_min, remaining slack spent along v_min.
        mu = 1.0 / lam_min
        rest = ~on_min
        coords = c.copy()
        coords[rest] = mu * lam[rest] * c[rest] / (mu * lam[rest] - 1.0)
        used = float(np.sum(lam[rest] * (coords[rest] - c[rest]) ** 2))
        slack = max(0.0, radius_sq - used)
        first_min = int(np.flatnonzero(on_min)[0])
        sign = 1.0 if c[first_min] >= 0 else -1.0
        coords[first_min] = c[first_min] + sign * math.sqrt(slack / lam_min)
        return Q @ coords

    high = 2.0 / lam_min
    while excess(high) > 0:
        high *= 2.0
    mu = brentq(excess, low, high, xtol=1e-14, rtol=1e-12, maxiter=500)
    coords = mu * lam * c / (mu * lam - 1.0)
    return Q @ coords


def ball_optimistic_action(center: np.ndarray, gram: np.ndarray, radius_sq: float, action_set: UnitBallActionSet) -> np.ndarray:
    """Optimistic feature ``L * theta / ||theta||`` on the ball of radius ``L``."""
    theta = farthest_point(np.asarray(center, dtype=float), np.asarray(gram, dtype=float), radius_sq)
    norm = float(np.linalg.norm(theta))
    if norm == 0.0:
        direction = np.zeros(action_set.d)
        direction[0] = 1.0
        return action_set.L * direction
    return action_set.L * theta / norm


def optimistic_proposal(state: RegressorState, action_set, width: float) -> Proposal:
    """UCB proposal over a finite set or the ball, for the ellipsoid ``||theta - theta_hat||_V <= width``."""
    if isinstance(action_set, FiniteActionSet):
        index = optimistic_index(state, action_set.features, width)
        return Proposal(action=index, feature=np.array(action_set.features[index]))
    feature = ball_optimistic_action(state.coeffs, state.gram, width**2, action_set)
    return Proposal(action=feature, feature=feature)
