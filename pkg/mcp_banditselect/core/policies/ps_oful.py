"""Parameter selection with optimistic least squares over a union of balls.

The agent knows ``M`` balls ``B(mu_hat_i, b_i + c_i)``, one of which holds
``theta*``. One biased ridge expert per ball predicts the reward of the played
feature, a :class:`~..aggregator.SqAggregator` combines the experts into a
prediction ``y_hat``, and the confidence set is the ellipsoid around the least
squares fit of those predictions:

    C_t = {theta : ||theta - theta_hat_t||_{V_t}^2 <= gamma_t(delta)},
    V_t = L^2 I + sum_s phi_s phi_s^T,  theta_hat_t = V_t^{-1} sum_s phi_s y_hat_s.

Each round plays the action with the highest optimistic reward over ``C_{t-1}``.
A ``confidence_scale`` s shrinks the width used to act to ``s * sqrt(gamma)``;
the radius itself and every check against it stay unscaled.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger

from ..aggregator import SqAggregator
from ..bounds import (
    compute_RSq_ps,
    compute_Ut,
    expert_validity_bound,
    gamma,
    lambda_for_model,
    ps_prediction_range,
)
from ..errors import EmptyInputError, InvalidParameterError
from ..regressor import RegressorState
from ..types import AssumptionConstants, BallModel, History, UnitBallActionSet, max_effective_radius
from .base import BanditPolicy, Proposal, ball_optimistic_action, optimistic_index


class PsOful(BanditPolicy):
    """Optimistic policy over the confidence set built from aggregated expert predictions.

    Attributes:
        models: The candidate balls.
        constants: Problem constants; ``constants.M`` must equal ``len(models)``.
        experts: One biased ridge expert per model, ``lambda_i = 1 / (T (b_i + c_i)^2)``.
        aggregator: The square-loss oracle over the experts.
        confidence: Ridge fit of the oracle predictions with ``lambda = L^2``.
        history: Played features and observed rewards.
        oracle_history: ``(feature, y_hat, y)`` per round.
        gamma_trace: Radius ``gamma_{t-1}`` used to act at each round ``t``.
        confidence_scale: Multiplier on ``sqrt(gamma)`` when choosing actions.
    """

    name = "ps-oful"

    def __init__(
        self,
        models: Sequence[BallModel],
        constants: AssumptionConstants,
        eta: float = 2.0,
        check_validity: bool = False,
        name: str | None = None,
        confidence_scale: float = 1.0,
    ):
        if not models:
            raise EmptyInputError("at least one model is required")
        if constants.L <= 0:
            raise InvalidParameterError(f"L must be > 0, got {constants.L}")
        if constants.M != len(models):
            raise InvalidParameterError(f"constants declare M={constants.M} but {len(models)} models were given")
        if confidence_scale <= 0:
            raise InvalidParameterError(f"confidence_scale must be > 0, got {confidence_scale}")

        self.models: List[BallModel] = list(models)
        self.constants = constants
        self.check_validity = check_validity
        self.confidence_scale = float(confidence_scale)
        if name is not None:
            self.name = name

        c = constants
        self.lambdas = [lambda_for_model(c.T, m.radius, m.center_error) for m in self.models]
        self.experts = [RegressorState(m.center_estimate, lam) for m, lam in zip(self.models, self.lambdas)]
        self.max_bc = max_effective_radius(self.models)
        beta, ell = ps_prediction_range(c.T, c.T, c.d, c.L, c.R, c.G, c.delta, self.max_bc)
        self.aggregator = SqAggregator(len(self.models), beta, ell, eta=eta)
        self.confidence = RegressorState(np.zeros(c.d), c.L**2)

        self.history = History()
        self.oracle_history: List[Tuple[np.ndarray, float, float]] = []
        self.gamma_trace: List[float] = []

    def gamma_at(self, t: int) -> float:
        """Confidence radius ``gamma_t(delta)`` after ``t`` observed rounds."""
        c = self.constants
        u_t = compute_Ut(t, c.T, c.d, c.L, c.R, c.delta, self.max_bc)
        rsq_t = compute_RSq_ps(t, c.T, c.d, c.L, c.R, c.G, c.M, c.delta, self.max_bc)
        return gamma(t, c.delta, u_t, rsq_t, c.R)

    def select_action(self, actions, gamma_prev: float) -> int:
        """Index of the action with the highest optimistic value over ``C_{t-1}``.

        Args:
            actions: ``K x d`` feature matrix (or a finite action set).
            gamma_prev: Radius of ``C_{t-1}``.
        """
        if gamma_prev < 0:
            raise InvalidParameterError(f"gamma must be >= 0, got {gamma_prev}")
        features = getattr(actions, "features", actions)
        return optimistic_index(self.confidence, features, self.confidence_scale * math.sqrt(gamma_prev))

    def propose(self, observation) -> Proposal:
        gamma_prev = self.gamma_at(len(self.history))
        self.gamma_trace.append(gamma_prev)
        if isinstance(observation, UnitBallActionSet):
            feature = ball_optimistic_action(
                self.confidence.coeffs,
                self.confidence.gram,
                self.confidence_scale**2 * gamma_prev,
                observation,
            )
            return Proposal(action=feature, feature=feature)
        index = self.select_action(observation, gamma_prev)
        return Proposal(action=index, feature=np.array(observation.features[index]))

    def expert_predictions(self, feature) -> np.ndarray:
        return np.array([expert.predict(feature) for expert in self.experts])

    def update(self, proposal: Proposal, reward: float) -> None:
        phi = proposal.feature
        preds = self.expert_predictions(phi)
        y_hat = self.aggregator.predict(preds)
        self.confidence.update(phi, y_hat)
        if self.check_validity:
            self._flag_invalid_experts(preds)

        for expert in self.experts:
            expert.update(phi, reward)
        self.aggregator.update(preds, reward)
        self.oracle_history.append((np.array(phi), y_hat, float(reward)))
        self.history.append(phi, reward)

    def _flag_invalid_experts(self, preds: np.ndarray) -> None:
        c = self.constants
        t = len(self.history)
        for i, (model, lam, pred) in enumerate(zip(self.models, self.lambdas, preds)):
            bound = expert_validity_bound(lam, c.d, c.G, c.R, c.L, t, c.delta, model.radius, model.center_error)
            if abs(pred) > bound:
                logger.debug(f"⚠️ expert {i} predicts {pred:.4g} beyond {bound:.4g} at t={t}")

    def prediction_errors(self, theta_star) -> np.ndarray:
        """Cumulative ``sum_{s<=t} (y_hat_s - <phi_s, theta*>)^2`` for every ``t``."""
        theta_star = np.asarray(theta_star, dtype=float)
        errors = [(y_hat - float(phi @ theta_star)) ** 2 for phi, y_hat, _ in self.oracle_history]
        return np.cumsum(errors)

    def confidence_holds(self, theta_star) -> bool:
        """Whether the oracle stayed within ``gamma_t(delta)`` of the true rewards at every round so far."""
        cumulative = self.prediction_errors(theta_star)
        return all(err <= self.gamma_at(t) for t, err in enumerate(cumulative, start=1))
