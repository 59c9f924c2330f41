from .constraints import AdversarySet, ConstraintKind, ConstraintMixture, ConstraintSet, WeightedConstraint
from .losses import LossVector, WeightVector, cross_entropy
from .oracles import best_response
from .risk import expected_losses, hypothesis_losses, mixed_risk, rai_risk, weighted_risk

__all__ = [
    "AdversarySet",
    "ConstraintKind",
    "ConstraintMixture",
    "ConstraintSet",
    "LossVector",
    "WeightVector",
    "WeightedConstraint",
    "best_response",
    "cross_entropy",
    "expected_losses",
    "hypothesis_losses",
    "mixed_risk",
    "rai_risk",
    "weighted_risk",
]
