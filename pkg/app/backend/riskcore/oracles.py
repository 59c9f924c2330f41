"""
Adversary Best-Response Oracles

Exact maximizers of the weighted risk ``sum_i w_i * l_i`` over each constraint set:

- worst group: uniform weights on the group with the largest mean loss
- CVaR(alpha): the largest losses saturated at the cap ``1 / (alpha * n)``
- chi-square(rho): KKT water-filling ``w_i ∝ max(0, l_i - nu)`` with ``nu`` found by bisection

Ties are broken toward the lowest index (lowest group id for the worst-group oracle).
"""

import logging
import math
from typing import Callable

import numpy as np

from exceptions.customexceptions import ContractError, NumericalError

from .constraints import AdversarySet, ConstraintKind, ConstraintMixture, ConstraintSet
from .losses import LossVector, WeightVector

logger = logging.getLogger(__name__)

MAX_BISECTION_ITERATIONS = 200
BISECTION_TOLERANCE = 1e-13


def worst_group_response(lv: LossVector, cs: ConstraintSet) -> np.ndarray:
    if lv.group_ids is None:
        raise ContractError("the worst-group adversary needs group ids")
    groups = np.unique(lv.group_ids)
    means = np.array([lv.losses[lv.group_ids == g].mean() for g in groups])
    worst = groups[int(np.argmax(means))]
    members = lv.group_ids == worst
    return members / members.sum()


def cvar_response(lv: LossVector, cs: ConstraintSet) -> np.ndarray:
    n = len(lv)
    alpha = float(cs.alpha)  # type: ignore[arg-type]
    cap = 1.0 / (alpha * n)
    saturated = min(n, math.floor(alpha * n + 1e-9))
    order = np.argsort(-lv.losses, kind="stable")
    w = np.zeros(n)
    w[order[:saturated]] = cap
    remainder = 1.0 - saturated * cap
    if saturated < n and remainder > 0:
        w[order[saturated]] = remainder
    return w


def _water_fill(losses: np.ndarray, nu: float) -> np.ndarray:
    mass = np.maximum(losses - nu, 0.0)
    return mass / mass.sum()


def chi_square_response(lv: LossVector, cs: ConstraintSet) -> np.ndarray:
    losses = lv.losses
    n = losses.size
    rho = float(cs.rho)  # type: ignore[arg-type]
    # On the simplex 0.5 * sum((n w_i - 1)^2) / n <= rho  <=>  ||w||^2 <= (2 rho + 1) / n
    bound = (2.0 * rho + 1.0) / n

    top = losses == losses.max()
    w_top = top / top.sum()
    if float(w_top @ w_top) <= bound:
        return w_top

    mean = losses.mean()
    spread = float(np.sum((losses - mean) ** 2))
    nu = mean - math.sqrt(spread / (2.0 * rho * n))
    if nu <= losses.min():
        # All weights stay positive: the ball constraint is active in closed form
        return (losses - nu) / (losses.sum() - n * nu)

    low, high = float(losses.min()), float(losses.max())
    width = high - low
    for _ in range(MAX_BISECTION_ITERATIONS):
        mid = 0.5 * (low + high)
        w = _water_fill(losses, mid)
        if float(w @ w) > bound:
            high = mid
        else:
            low = mid
        if high - low <= BISECTION_TOLERANCE * width:
            break
    else:
        w = _water_fill(losses, low)
        residual = float(w @ w) - bound
        raise NumericalError(
            f"chi-square bisection did not converge after {MAX_BISECTION_ITERATIONS} iterations", residual=residual
        )
    w = _water_fill(losses, low)
    if not np.all(np.isfinite(w)):
        raise NumericalError("chi-square bisection produced non-finite weights", residual=float("nan"))
    return w


ORACLES: dict[ConstraintKind, Callable[[LossVector, ConstraintSet], np.ndarray]] = {
    ConstraintKind.WorstGroup: worst_group_response,
    ConstraintKind.CVaR: cvar_response,
    ConstraintKind.ChiSquare: chi_square_response,
}


def best_response(lv: LossVector, cs: AdversarySet) -> WeightVector:
    """
    Returns the feasible weight vector maximizing the weighted risk of ``lv``.

    Args:
        lv: Per-sample losses (with group ids for the worst-group set)
        cs: A constraint set, or a mixture of constraint sets

    Raises:
        ContractError: If ``lv`` is empty or group ids are missing for the worst-group set.
        NumericalError: If the chi-square bisection fails to converge.
    """
    if len(lv) == 0:
        raise ContractError("best response of an empty loss vector")
    if isinstance(cs, ConstraintMixture):
        w = sum(
            weight * best_response(lv, member.constraint).w
            for weight, member in zip(cs.normalized_weights(), cs.members)
        )
        return WeightVector(w / w.sum())
    return WeightVector(ORACLES[cs.kind](lv, cs))
