"""
Adversary Constraint Sets

The feasible regions an adversary may reweight the training sample within: all mass on a
single subgroup (worst group), capped weights on the tail of the losses (CVaR) or a
chi-square divergence ball around uniform. Weights are absolute probability vectors, so the
CVaR cap reads ``1 / (alpha * n)`` and the chi-square ball
``0.5 * sum((n * w_i - 1) ** 2) / n <= rho``.
"""

from enum import Enum
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_CHI_SQUARE_RHO = 0.5
FEASIBILITY_TOLERANCE = 1e-9


class ConstraintKind(str, Enum):
    WorstGroup = "worst_group"
    CVaR = "cvar"
    ChiSquare = "chi_square"


class ConstraintSet(BaseModel):
    """
    One adversary constraint set.

    Attributes:
        kind: Which family of reweightings is allowed
        alpha: CVaR tail fraction in (0, 1]; required for ``cvar``
        rho: Chi-square radius (> 0); defaults to 0.5 for ``chi_square``
    """

    model_config = ConfigDict(frozen=True)

    kind: ConstraintKind
    alpha: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    rho: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="before")
    @classmethod
    def _default_rho(cls, data):
        if isinstance(data, dict) and data.get("kind") in (ConstraintKind.ChiSquare, "chi_square"):
            if data.get("rho") is None:
                data = {**data, "rho": DEFAULT_CHI_SQUARE_RHO}
        return data

    @model_validator(mode="after")
    def _alpha_for_cvar(self):
        if self.kind is ConstraintKind.CVaR and self.alpha is None:
            raise ValueError("cvar constraint needs alpha")
        return self

    @classmethod
    def worst_group(cls) -> "ConstraintSet":
        return cls(kind=ConstraintKind.WorstGroup)

    @classmethod
    def cvar(cls, alpha: float) -> "ConstraintSet":
        return cls(kind=ConstraintKind.CVaR, alpha=alpha)

    @classmethod
    def chi_square(cls, rho: float = DEFAULT_CHI_SQUARE_RHO) -> "ConstraintSet":
        return cls(kind=ConstraintKind.ChiSquare, rho=rho)

    def label(self) -> str:
        if self.kind is ConstraintKind.CVaR:
            return f"cvar({self.alpha})"
        if self.kind is ConstraintKind.ChiSquare:
            return f"chi_square({self.rho})"
        return "worst_group"

    def contains(self, w: np.ndarray, group_ids: Optional[np.ndarray] = None, tol: float = FEASIBILITY_TOLERANCE) -> bool:
        """Checks the defining inequalities of the set (and simplex membership) to ``tol``."""
        w = np.asarray(w, dtype=float)
        n = w.size
        if np.any(w < -tol) or abs(float(w.sum()) - 1.0) > tol:
            return False
        if self.kind is ConstraintKind.CVaR:
            return bool(np.all(w <= 1.0 / (self.alpha * n) + tol))  # type: ignore[operator]
        if self.kind is ConstraintKind.ChiSquare:
            return bool(0.5 * np.sum((n * w - 1.0) ** 2) / n <= self.rho + tol)  # type: ignore[operator]
        if group_ids is None:
            return False
        support = np.flatnonzero(w > tol)
        groups = np.unique(np.asarray(group_ids)[support])
        if groups.size != 1:
            return False
        members = np.flatnonzero(np.asarray(group_ids) == groups[0])
        return bool(np.allclose(w[members], 1.0 / members.size, atol=tol))


class WeightedConstraint(BaseModel):
    model_config = ConfigDict(frozen=True)

    constraint: ConstraintSet
    weight: float = Field(gt=0.0)


class ConstraintMixture(BaseModel):
    """
    A weighted mixture of constraint sets.

    The adversary plays the weight-combined best responses of the members, i.e. it maximizes
    over the Minkowski combination ``sum_k lambda_k W_k`` of the member sets.
    """

    model_config = ConfigDict(frozen=True)

    members: tuple[WeightedConstraint, ...]

    @field_validator("members")
    @classmethod
    def _nonempty(cls, value):
        if not value:
            raise ValueError("a constraint mixture needs at least one member")
        return value

    def normalized_weights(self) -> np.ndarray:
        weights = np.array([member.weight for member in self.members], dtype=float)
        return weights / weights.sum()

    def label(self) -> str:
        return "+".join(f"{w:.3g}*{m.constraint.label()}" for w, m in zip(self.normalized_weights(), self.members))


AdversarySet = Union[ConstraintSet, ConstraintMixture]
