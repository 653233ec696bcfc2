"""Closed-form radii, ranges and reference bounds.

These are the constants both model-selection policies plug into their
confidence sets and oracles:

* parameter selection: ``U_t`` (prediction error of the true experts),
  ``R_Sq(t)`` (oracle regret), ``gamma_t`` (confidence radius) and the
  oracle range;
* feature selection: ``Q_t``, ``R_Sq(t)``, ``D_t`` and the oracle range;
* regret balancing: the reference bound ``U(t)``.

Every function evaluates its expression exactly as written; none of them clips
or rounds. ``t`` is the number of observed rounds.
"""

import math
from typing import Sequence, Tuple

from loguru import logger

from .errors import DegenerateModelError, InvalidParameterError


def _check_delta(delta: float, upper: float = 0.25, closed: bool = True) -> None:
    inside = 0.0 < delta <= upper if closed else 0.0 < delta < upper
    if not inside:
        bracket = "]" if closed else ")"
        raise InvalidParameterError(f"delta must lie in (0, {upper}{bracket}, got {delta}")


def _check_models(M: int) -> None:
    if M < 1:
        raise InvalidParameterError(f"number of models must be >= 1, got {M}")


def lambda_for_model(T: int, b: float, c: float) -> float:
    """Regularization weight ``1 / (T * (b + c)^2)`` of a ball model.

    Values below 1 are allowed but logged, since the regret guarantee assumes
    ``lambda >= 1``.

    Raises:
        InvalidParameterError: If ``T < 1``.
        DegenerateModelError: If ``b + c == 0``.
    """
    if T < 1:
        raise InvalidParameterError(f"T must be >= 1, got {T}")
    width = b + c
    if width == 0:
        raise DegenerateModelError("b + c = 0 leaves the regularization weight undefined")
    lam = 1.0 / (T * width**2)
    if lam < 1.0:
        logger.warning(f"⚠️ lambda={lam:.4g} < 1 for T={T}, b+c={width:.4g}")
    return lam


def _log_growth(t: float, T: float, d: int, L: float, max_bc: float) -> float:
    return math.log(1.0 + t * T * L**2 * max_bc**2 / d)


def compute_Ut(t: float, T: int, d: int, L: float, R: float, delta: float, max_bc: float) -> float:
    """Bound on the squared prediction error of any expert whose ball holds ``theta*``."""
    _check_delta(delta)
    growth = _log_growth(t, T, d, L, max_bc)
    inner = math.sqrt(1.0 + 1.0 / T + 4.0 * d * growth)
    return 1.0 + 2.0 / T + 8.0 * d * growth + 32.0 * R**2 * math.log((2.0 * math.sqrt(2.0) * R + inner) / delta)


def compute_RSq_ps(
    t: float,
    T: int,
    d: int,
    L: float,
    R: float,
    G: float,
    M: int,
    delta: float,
    max_bc: float,
) -> float:
    """Regret bound of the oracle in the parameter-selection setting."""
    _check_models(M)
    _check_delta(delta, upper=1.0)
    noise = R**2 * L**2 * d * math.log((1.0 + t * T * L**2 * max_bc**2 / d) / delta)
    return 8.0 * math.log(M) * (G**2 + L**2 / T + 2.0 * G * L / math.sqrt(T) + noise)


def _self_normalized_radius(delta: float, base: float, rsq: float, R: float) -> float:
    if base < 0 or rsq < 0:
        raise InvalidParameterError(f"radius inputs must be >= 0, got base={base} rsq={rsq}")
    _check_delta(delta)
    cross = math.sqrt(2.0 * (1.0 + base) * math.log(math.sqrt(1.0 + base) / delta))
    tail = math.sqrt(1.0 + rsq + base + 2.0 * R * cross)
    return 1.0 + 2.0 * rsq + 2.0 * base + 4.0 * R * cross + 32.0 * R**2 * math.log((math.sqrt(8.0) * R + tail) / delta)


def gamma(t: float, delta: float, U_t: float, RSq_t: float, R: float) -> float:
    """Radius ``gamma_t(delta)`` of the parameter-selection confidence set."""
    return _self_normalized_radius(delta, U_t, RSq_t, R)


def compute_Qt(t: float, d: int, L: float, R: float, S: float, delta: float, lambdas: Sequence[float]) -> float:
    """Bound on the squared prediction error of the true ridge expert."""
    _check_delta(delta, upper=1.0, closed=False)
    inner = _max_ridge_term(t, d, L, S, lambdas, scale=4.0)
    return 1.0 + 2.0 * inner + 32.0 * R**2 * math.log((math.sqrt(8.0) * R + math.sqrt(1.0 + inner)) / delta)


def _max_ridge_term(t: float, d: int, L: float, S: float, lambdas: Sequence[float], scale: float) -> float:
    if len(lambdas) == 0:
        raise InvalidParameterError("at least one regularization weight is required")
    if min(lambdas) <= 0:
        raise InvalidParameterError(f"regularization weights must be > 0, got {list(lambdas)}")
    return max(lam * S**2 + scale * d * math.log(1.0 + t * L**2 / (lam * d)) for lam in lambdas)


def compute_RSq_fs(
    t: float,
    d: int,
    L: float,
    R: float,
    S: float,
    G: float,
    M: int,
    delta: float,
    lambdas: Sequence[float],
) -> float:
    """Regret bound of the oracle in the feature-selection setting."""
    _check_models(M)
    _check_delta(delta, upper=1.0)
    inner = _max_ridge_term(t, d, L, S, lambdas, scale=1.0)
    return 8.0 * math.log(M) * R**2 * L**2 * (G**2 + inner + math.log(1.0 / delta))


def compute_Dt(t: float, delta: float, Q_t: float, RSq_t: float, R: float) -> float:
    """Bound on the oracle's squared prediction error in the feature-selection setting."""
    return _self_normalized_radius(delta, Q_t, RSq_t, R)


def ps_prediction_range(t: float, T: int, d: int, L: float, R: float, G: float, delta: float, max_bc: float) -> Tuple[float, float]:
    """``(beta, ell)`` covering rewards and expert predictions in the parameter-selection setting."""
    half = G + L / math.sqrt(T) + R * L * math.sqrt(d * math.log((1.0 + t * T * L**2 * max_bc**2 / d) / delta))
    return -half, 2.0 * half


def fs_prediction_range(
    t: float,
    d: int,
    L: float,
    R: float,
    S: float,
    G: float,
    delta: float,
    lambdas: Sequence[float],
) -> Tuple[float, float]:
    """``(beta, ell)`` covering rewards and expert predictions in the feature-selection setting.

    The widest per-expert range is used, i.e. the maximum over ``lambdas``.
    """
    half = max(
        G + R * L * math.sqrt(d * math.log((1.0 + t * L**2 / (lam * d)) / delta)) + L * math.sqrt(lam) * S
        for lam in lambdas
    )
    return -half, 2.0 * half


def expert_validity_bound(
    lam: float,
    d: int,
    G: float,
    R: float,
    L: float,
    t: float,
    delta: float,
    b: float,
    c: float,
) -> float:
    """Largest prediction magnitude an expert can produce if its ball holds ``theta*``."""
    return G + R * L * math.sqrt(d * math.log((1.0 + t * L**2 / (lam * d)) / delta)) + L * math.sqrt(lam) * (b + c)


def reference_U(t: float, d: int, L: float, R: float, M: int, delta: float, max_bc: float) -> float:
    """Reference regret bound the regret balancer charges every base with."""
    if M < 2:
        raise InvalidParameterError(f"reference bound needs M >= 2 models (log M > 0), got {M}")
    growth = 1.0 + t**2 * L**2 * max_bc**2 / d
    first = math.sqrt(d * math.log(growth))
    second = 2.0 * d * R * L * math.sqrt(t * math.log(M) * math.log(1.0 + t / d) * math.log(growth / delta))
    return first + second


def regret_envelope(T: int, d: int, G: float, gamma_max: float) -> float:
    """Regret bound implied by the containing-ellipsoid rule for a confidence radius ``gamma_max``."""
    return 2.0 * G * d + 2.0 * max(1.0, G) * math.sqrt(2.0 * d * T * math.log(1.0 + T / d) * gamma_max)
