"""Feature selection with square-loss regression and inverse-gap weighting.

Every candidate feature map gets its own ridge expert. The aggregated
prediction of each action feeds an inverse-gap-weighted distribution, from
which the action is sampled.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np

from ..aggregator import SqAggregator
from ..bounds import compute_Dt, compute_Qt, compute_RSq_fs, fs_prediction_range
from ..errors import EmptyInputError, InfeasibleDistributionError, InvalidParameterError
from ..regressor import RegressorState
from ..types import AssumptionConstants, FeatureMapModel, History
from .base import BanditPolicy, Proposal


def igw_distribution(predictions, alpha: float, kappa: float) -> np.ndarray:
    """Inverse-gap-weighted distribution over actions.

    With ``a'`` the greedy action (lowest index on ties),
    ``p(a) = 1 / (kappa + alpha * (pred(a') - pred(a)))`` for ``a != a'`` and the
    greedy action takes the remaining mass.

    Raises:
        EmptyInputError: If there are no predictions.
        InvalidParameterError: If ``alpha <= 0`` or ``kappa < 1``.
        InfeasibleDistributionError: If the greedy mass is negative, which needs ``kappa < K``.
    """
    predictions = np.asarray(predictions, dtype=float)
    if predictions.ndim != 1 or predictions.shape[0] == 0:
        raise EmptyInputError("need at least one action prediction")
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    if not kappa >= 1:
        raise InvalidParameterError(f"kappa must be >= 1, got {kappa}")

    greedy = int(np.argmax(predictions))
    gaps = predictions[greedy] - predictions
    probs = 1.0 / (kappa + alpha * gaps)
    probs[greedy] = 0.0
    probs[greedy] = 1.0 - float(np.sum(probs))
    if probs[greedy] < 0:
        raise InfeasibleDistributionError(f"greedy probability {probs[greedy]} < 0 with kappa={kappa} K={predictions.shape[0]}")
    return probs


def sample_action(probs, rng: np.random.Generator) -> int:
    """Draw one action index from ``probs``."""
    probs = np.asarray(probs, dtype=float)
    return int(rng.choice(probs.shape[0], p=probs))


class FsScb(BanditPolicy):
    """Contextual policy that samples from the inverse-gap weighting of aggregated predictions.

    Attributes:
        models: Candidate feature maps.
        lambdas: Ridge weight of every expert, each ``>= 1``.
        kappa: Exploration parameter, equal to ``K``.
        alpha: Learning rate ``alpha_scale * sqrt(K T / D_T(delta))``, fixed for the run.
        range_scale: Shrinks the aggregator range about its midpoint.
    """

    name = "fs-scb"
    contextual = True

    def __init__(
        self,
        models: Sequence[FeatureMapModel],
        constants: AssumptionConstants,
        lambdas: Sequence[float] | None = None,
        eta: float = 2.0,
        rng: np.random.Generator | None = None,
        name: str | None = None,
        alpha_scale: float = 1.0,
        range_scale: float = 1.0,
    ):
        if not models:
            raise EmptyInputError("at least one feature map is required")
        if constants.M != len(models):
            raise InvalidParameterError(f"constants declare M={constants.M} but {len(models)} maps were given")
        lambdas = [1.0] * len(models) if lambdas is None else [float(lam) for lam in lambdas]
        if len(lambdas) != len(models) or min(lambdas) < 1.0:
            raise InvalidParameterError(f"need one lambda >= 1 per feature map, got {lambdas}")
        if alpha_scale <= 0 or range_scale <= 0:
            raise InvalidParameterError(f"alpha_scale and range_scale must be > 0, got {alpha_scale}, {range_scale}")
        n_actions = {m.K for m in models}
        if len(n_actions) != 1:
            raise InvalidParameterError(f"feature maps disagree on the number of actions: {sorted(n_actions)}")

        self.models: List[FeatureMapModel] = list(models)
        self.constants = constants
        self.lambdas = lambdas
        self.rng = rng if rng is not None else np.random.default_rng()
        if name is not None:
            self.name = name

        c = constants
        self.experts = [RegressorState(np.zeros(m.d), lam) for m, lam in zip(self.models, lambdas)]
        beta, ell = fs_prediction_range(c.T, c.d, c.L, c.R, c.S, c.G, c.delta, lambdas)
        self.range_scale = float(range_scale)
        mid = beta + ell / 2.0
        ell *= self.range_scale
        beta = mid - ell / 2.0
        self.aggregator = SqAggregator(len(self.models), beta, ell, eta=eta)

        q_T = compute_Qt(c.T, c.d, c.L, c.R, c.S, c.delta, lambdas)
        rsq_T = compute_RSq_fs(c.T, c.d, c.L, c.R, c.S, c.G, c.M, c.delta, lambdas)
        self.D_T = compute_Dt(c.T, c.delta, q_T, rsq_T, c.R)
        self.kappa = float(self.K)
        self.alpha = alpha_scale * math.sqrt(self.K * c.T / self.D_T)
        self.history = History()

    @property
    def K(self) -> int:
        return self.models[0].K

    def predict_actions(self, context: int) -> Tuple[np.ndarray, np.ndarray]:
        """Return the ``M x K`` expert predictions and the ``K`` aggregated predictions."""
        expert_preds = np.array(
            [expert.predict_many(model.for_context(context)) for expert, model in zip(self.experts, self.models)],
        )
        aggregated = np.array([self.aggregator.predict(expert_preds[:, a]) for a in range(self.K)])
        return expert_preds, aggregated

    def propose(self, observation, rng: np.random.Generator | None = None) -> Proposal:
        context = int(observation)
        _, aggregated = self.predict_actions(context)
        probs = igw_distribution(aggregated, self.alpha, self.kappa)
        action = sample_action(probs, rng if rng is not None else self.rng)
        return Proposal(action=action, context=context, probabilities=probs)

    def update(self, proposal: Proposal, reward: float) -> None:
        action, context = int(proposal.action), proposal.context
        features = [model.feature(context, action) for model in self.models]
        played = np.array([expert.predict(phi) for expert, phi in zip(self.experts, features)])
        self.aggregator.update(played, reward)
        for expert, phi in zip(self.experts, features):
            expert.update(phi, reward)
        # every map's feature of the played action, stacked
        self.history.append(np.concatenate(features), reward)

    def step(self, observation, env_reward, rng: np.random.Generator | None = None) -> Tuple[Proposal, float]:
        proposal = self.propose(observation, rng=rng)
        reward = float(env_reward(proposal.action))
        self.update(proposal, reward)
        return proposal, reward
