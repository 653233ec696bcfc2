"""Incremental biased regularized least squares.

An expert with bias ``mu`` and weight ``lam`` estimates

    theta_hat = argmin ||Phi^T theta - Y||^2 + lam * ||theta - mu||^2
              = V^{-1} Phi^T (Y - Phi mu) + mu,      V = lam * I + Phi^T Phi.

The inverse of ``V`` is maintained with rank-one (Sherman-Morrison) updates.
Ridge regression is the ``mu = 0`` case.
"""

import math

import numpy as np
from loguru import logger

from .errors import DimensionError, InvalidParameterError, NumericInputError
from .types import as_feature

# Every REINVERT_EVERY updates the incremental solution is compared with a
# dense solve; beyond REINVERT_TOL the inverse is rebuilt from the Gram matrix.
REINVERT_EVERY = 1000
REINVERT_TOL = 1e-6


class RegressorState:
    """Single-owner state of one (biased) ridge-regression expert.

    Attributes:
        bias: Center the penalty pulls toward.
        lam: Regularization weight.
        gram: ``V = lam * I + sum phi phi^T``.
        inv_gram: ``V^{-1}``, kept symmetric.
        moment: ``sum phi * (y - <phi, bias>)``.
        coeffs: Cached ``inv_gram @ moment + bias``.
        n_obs: Number of observations absorbed.
        log_det_ratio: ``log det V - log det(lam * I)``.
    """

    def __init__(self, bias, lam: float):
        bias = as_feature(bias)
        if not math.isfinite(lam) or lam <= 0:
            raise InvalidParameterError(f"lambda must be > 0, got {lam}")
        d = bias.shape[0]
        self.bias: np.ndarray = bias
        self.lam: float = float(lam)
        self.gram: np.ndarray = self.lam * np.eye(d)
        self.inv_gram: np.ndarray = np.eye(d) / self.lam
        self.moment: np.ndarray = np.zeros(d)
        self.coeffs: np.ndarray = bias.copy()
        self.n_obs: int = 0
        self.log_det_ratio: float = 0.0

    @property
    def d(self) -> int:
        return self.bias.shape[0]

    def _check(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (self.d,):
            raise DimensionError(f"feature has shape {phi.shape}, expected ({self.d},)")
        return phi

    def update(self, phi, y: float) -> "RegressorState":
        """Absorb one observation ``(phi, y)`` and return ``self``.

        Raises:
            DimensionError: If ``phi`` does not have length ``d``.
            NumericInputError: If ``phi`` or ``y`` is not finite.
        """
        phi = self._check(phi)
        if not np.all(np.isfinite(phi)) or not math.isfinite(y):
            raise NumericInputError(f"non-finite observation phi={phi} y={y}")

        u = self.inv_gram @ phi
        denom = 1.0 + float(phi @ u)
        self.inv_gram -= np.outer(u, u) / denom
        self.inv_gram = 0.5 * (self.inv_gram + self.inv_gram.T)
        self.gram += np.outer(phi, phi)
        self.log_det_ratio += math.log(denom)
        self.moment += phi * (y - float(phi @ self.bias))
        self.n_obs += 1
        self.coeffs = self.inv_gram @ self.moment + self.bias

        if self.n_obs % REINVERT_EVERY == 0:
            self._guard_drift()
        return self

    def _guard_drift(self) -> None:
        direct = self.direct_solve()
        drift = float(np.max(np.abs(direct - self.coeffs)))
        if drift > REINVERT_TOL:
            logger.debug(f"⚠️ re-inverting gram after {self.n_obs} updates, drift={drift:.3e}")
            inv = np.linalg.inv(self.gram)
            self.inv_gram = 0.5 * (inv + inv.T)
            self.coeffs = direct

    def direct_solve(self) -> np.ndarray:
        """Solve the regularized normal equations from scratch."""
        return np.linalg.solve(self.gram, self.moment) + self.bias

    def predict(self, phi) -> float:
        """Return ``<phi, coeffs>``."""
        return float(self._check(phi) @ self.coeffs)

    def predict_many(self, features) -> np.ndarray:
        """Predict for every row of a ``K x d`` feature matrix."""
        features = np.asarray(features, dtype=float)
        if features.ndim != 2 or features.shape[1] != self.d:
            raise DimensionError(f"features have shape {features.shape}, expected (K, {self.d})")
        return features @ self.coeffs

    def weighted_norm(self, phi) -> float:
        """Return ``||phi||_{V^{-1}}``."""
        phi = self._check(phi)
        return math.sqrt(max(0.0, float(phi @ self.inv_gram @ phi)))

    def weighted_norms(self, features) -> np.ndarray:
        """Row-wise ``||phi||_{V^{-1}}`` for a ``K x d`` feature matrix."""
        features = np.asarray(features, dtype=float)
        if features.ndim != 2 or features.shape[1] != self.d:
            raise DimensionError(f"features have shape {features.shape}, expected (K, {self.d})")
        quad = np.einsum("ij,jk,ik->i", features, self.inv_gram, features)
        return np.sqrt(np.maximum(quad, 0.0))


def new_regressor(bias, lam: float) -> RegressorState:
    """Create an expert with no observations: it predicts ``<phi, bias>``."""
    return RegressorState(bias, lam)


def ridge_regressor(d: int, lam: float = 1.0) -> RegressorState:
    """Create an unbiased ridge expert of dimension ``d``."""
    return RegressorState(np.zeros(d), lam)
