"""Plain OFUL: one ridge regressor with the self-normalized confidence width.

This is the independent-learning baseline that ignores every model, and the
``oful`` flavour of the oracle: regularized toward the true ball center for
parameter selection, or run on the true feature map.
"""

import math

import numpy as np

from ..errors import InvalidParameterError
from ..regressor import RegressorState
from ..types import AssumptionConstants, History
from .base import BanditPolicy, Proposal, optimistic_proposal


class Oful(BanditPolicy):
    """OFUL with width ``sqrt(lam) S + R sqrt(2 log(det(V_t)^{1/2} / (delta det(lam I)^{1/2})))``.

    With a ``bias`` the ridge shrinks toward it instead of the origin, and
    ``bias_radius`` (the largest possible ``||theta* - bias||``) replaces ``S``.
    """

    name = "itl"

    def __init__(
        self,
        constants: AssumptionConstants,
        lam: float = 1.0,
        bias=None,
        name: str | None = None,
        bias_radius: float | None = None,
    ):
        if lam <= 0:
            raise InvalidParameterError(f"lambda must be > 0, got {lam}")
        if bias_radius is not None and bias_radius < 0:
            raise InvalidParameterError(f"bias_radius must be >= 0, got {bias_radius}")
        self.bias_radius = bias_radius
        self.constants = constants
        bias = np.zeros(constants.d) if bias is None else bias
        self.regressor = RegressorState(bias, lam)
        self.history = History()
        if name is not None:
            self.name = name

    def width(self) -> float:
        c = self.constants
        log_term = self.regressor.log_det_ratio + 2.0 * math.log(1.0 / c.delta)
        reach = c.S if self.bias_radius is None else self.bias_radius
        return math.sqrt(self.regressor.lam) * reach + c.R * math.sqrt(log_term)

    def propose(self, observation) -> Proposal:
        return optimistic_proposal(self.regressor, observation, self.width())

    def update(self, proposal: Proposal, reward: float) -> None:
        self.regressor.update(proposal.feature, reward)
        self.history.append(proposal.feature, reward)
