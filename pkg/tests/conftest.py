import numpy as np
import pytest

from datagen.mixture import Dataset, MixtureSpec
from learners.hypothesis import LinearHypothesis, MixedStrategy
from learners.trainconfig import ModelKind, TrainConfig
from simnet.fleet import build_fleet
from simnet.slo import SLOSpec
from simnet.trace import DecisionTrace, ViolationKind, decision_loss


def make_dataset(X, y, groups, n_groups=None) -> Dataset:
    return Dataset.from_arrays(np.asarray(X), np.asarray(y), np.asarray(groups), n_groups=n_groups)


@pytest.fixture
def small_spec() -> MixtureSpec:
    return MixtureSpec(n_samples=400)


@pytest.fixture
def separable_data() -> Dataset:
    """Two well separated clusters along x0 (single group)."""
    rng = np.random.default_rng(0)
    n = 200
    y = np.arange(n) % 2
    X = rng.normal(scale=0.3, size=(n, 2))
    X[:, 0] += np.where(y == 1, 3.0, -3.0)
    return make_dataset(X, y, np.zeros(n, dtype=int))


@pytest.fixture
def two_rule_data() -> Dataset:
    """Group 0 is labelled by the sign of x0, group 1 by the sign of x1."""
    rng = np.random.default_rng(1)
    n = 400
    X = rng.uniform(-2.0, 2.0, size=(n, 2))
    groups = (np.arange(n) % 2).astype(int)
    y = np.where(groups == 0, X[:, 0] > 0, X[:, 1] > 0).astype(int)
    return make_dataset(X, y, groups)


@pytest.fixture
def fast_cfg() -> TrainConfig:
    return TrainConfig(rounds=4, learning_rate=0.05, seed=3)


@pytest.fixture
def slo() -> SLOSpec:
    return SLOSpec()


@pytest.fixture
def oracle_model() -> MixedStrategy:
    """Steep linear rule ``x0 > 0``."""
    return MixedStrategy.point_mass(LinearHypothesis(weights=(50.0, 0.0), bias=0.0))


@pytest.fixture
def two_agent_fleet(oracle_model):
    constant_zero = MixedStrategy.point_mass(LinearHypothesis(weights=(0.0, 0.0), bias=-3.0))
    return build_fleet(
        [(ModelKind.ERM, oracle_model), (ModelKind.Hybrid, constant_zero)], {"vendor-a": [0], "vendor-b": [1]}
    )


def make_trace(
    t, agent_id, a, confidence, y, group_id=0, vendor_id="vendor-a", floor=0.6, sample_id=None, x=(0.0, 0.0)
) -> DecisionTrace:
    if a != y:
        kind = ViolationKind.CriticalError
    elif confidence < floor:
        kind = ViolationKind.LowConfidence
    else:
        kind = ViolationKind.NONE
    return DecisionTrace(
        t=t,
        sample_id=t if sample_id is None else sample_id,
        agent_id=agent_id,
        vendor_id=vendor_id,
        x=x,
        a=a,
        confidence=confidence,
        group_id=group_id,
        y=y,
        z=int(kind is not ViolationKind.NONE),
        violation_kind=kind,
        loss=decision_loss(a, confidence, y),
    )


@pytest.fixture
def trace_factory():
    return make_trace


@pytest.fixture
def dataset_factory():
    return make_dataset
