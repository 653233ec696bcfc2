"""Square-loss aggregation of expert predictions.

:class:`SqAggregator` implements sequential prediction with expert advice for
the square loss on a known range ``[beta, beta + ell]``. Inputs are rescaled
to the unit interval, experts are weighted exponentially by their past loss,
and the aggregate is obtained from the square-loss substitution function

    y' = clamp((1 + Delta(0) - Delta(1)) / 2, 0, 1),
    Delta(w) = -(1 / eta) * log sum_i v_i * exp(-eta * (w - h_i)^2).

With ``eta = 2`` (the mixability constant of the square loss on [0, 1]) the
substitution always satisfies ``y'^2 <= Delta(0)`` and ``(1 - y')^2 <= Delta(1)``,
which gives a regret of at most ``ell^2 * log(M) / 2`` against the best expert.
"""

import math
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from .errors import EmptyInputError, InfeasiblePredictionError, InvalidRangeError, NumericInputError, DimensionError

FEASIBILITY_TOL = 1e-9


class SqAggregator:
    """Expert weights and fixed prediction range of one regression oracle.

    Attributes:
        log_weights: ``log w_i``, starting at 0.
        beta: Lower end of the prediction range.
        ell: Width of the prediction range.
        eta: Loss-scaling exponent.
    """

    def __init__(self, n_experts: int, beta: float, ell: float, eta: float = 2.0):
        if n_experts < 1:
            raise EmptyInputError("the aggregator needs at least one expert")
        if not math.isfinite(ell) or ell <= 0:
            raise InvalidRangeError(f"range width must be > 0, got {ell}")
        if not math.isfinite(beta):
            raise InvalidRangeError(f"range start must be finite, got {beta}")
        if not math.isfinite(eta) or eta <= 0:
            raise InvalidRangeError(f"eta must be > 0, got {eta}")
        self.log_weights: np.ndarray = np.zeros(n_experts)
        self.beta: float = float(beta)
        self.ell: float = float(ell)
        self.eta: float = float(eta)

    @property
    def n_experts(self) -> int:
        return self.log_weights.shape[0]

    @property
    def weights(self) -> np.ndarray:
        """Normalized weights ``v_i``."""
        return np.exp(self.log_weights - logsumexp(self.log_weights))

    def snapshot(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "beta": self.beta,
            "ell": self.ell,
            "eta": self.eta,
        }

    def scale(self, values) -> np.ndarray:
        """Clamp ``values`` into the range and map them onto [0, 1]."""
        values = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise NumericInputError(f"non-finite input {values}")
        clipped = np.clip(values, self.beta, self.beta + self.ell)
        return np.clip((clipped - self.beta) / self.ell, 0.0, 1.0)

    def _scaled_predictions(self, expert_preds) -> np.ndarray:
        h = self.scale(expert_preds)
        if h.shape != (self.n_experts,):
            raise DimensionError(f"expected {self.n_experts} expert predictions, got shape {h.shape}")
        return h

    def substitution(self, h: np.ndarray) -> Tuple[float, float, float]:
        """Return ``(y', Delta(0), Delta(1))`` for scaled expert predictions ``h``."""
        log_v = self.log_weights - logsumexp(self.log_weights)
        delta0 = -logsumexp(log_v - self.eta * h**2) / self.eta
        delta1 = -logsumexp(log_v - self.eta * (1.0 - h) ** 2) / self.eta
        y_scaled = min(1.0, max(0.0, (1.0 + delta0 - delta1) / 2.0))
        return y_scaled, float(delta0), float(delta1)

    def predict(self, expert_preds) -> float:
        """Aggregate the experts' raw predictions into one prediction in the range.

        Raises:
            NumericInputError: If a prediction is not finite.
            InfeasiblePredictionError: If the substitution violates its conditions.
        """
        h = self._scaled_predictions(expert_preds)
        y_scaled, delta0, delta1 = self.substitution(h)
        if y_scaled**2 > delta0 + FEASIBILITY_TOL or (1.0 - y_scaled) ** 2 > delta1 + FEASIBILITY_TOL:
            raise InfeasiblePredictionError(
                f"substitution y'={y_scaled} infeasible for Delta(0)={delta0} Delta(1)={delta1} eta={self.eta}",
            )
        return self.beta + self.ell * y_scaled

    def update(self, expert_preds, y: float) -> "SqAggregator":
        """Charge every expert its scaled square loss on ``y`` and return ``self``."""
        if not math.isfinite(y):
            raise NumericInputError(f"non-finite observation {y}")
        h = self._scaled_predictions(expert_preds)
        y_scaled = float(self.scale([y])[0])
        self.log_weights = self.log_weights - self.eta * (y_scaled - h) ** 2
        return self


def aggregate_predict(state: SqAggregator, expert_preds) -> float:
    return state.predict(expert_preds)


def update_weights(state: SqAggregator, expert_preds, y: float) -> SqAggregator:
    return state.update(expert_preds, y)


def empirical_sq_regret(trace: Iterable[Tuple[Sequence[float], float, float]]) -> float:
    """Square-loss regret of an aggregate against the best single expert.

    Args:
        trace: Rows ``(expert_preds, agg_pred, y)``.

    Returns:
        float: ``sum (agg - y)^2 - min_i sum (f_i - y)^2``.

    Raises:
        EmptyInputError: If ``trace`` is empty.
    """
    rows = list(trace)
    if not rows:
        raise EmptyInputError("empty trace")
    expert_preds = np.array([np.asarray(row[0], dtype=float) for row in rows])
    agg = np.array([row[1] for row in rows], dtype=float)
    y = np.array([row[2] for row in rows], dtype=float)
    agg_loss = float(np.sum((agg - y) ** 2))
    expert_loss = np.sum((expert_preds - y[:, None]) ** 2, axis=0)
    return agg_loss - float(np.min(expert_loss))
