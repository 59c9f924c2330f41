import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from exceptions.customexceptions import ContractError
from learners.hypothesis import LinearHypothesis, MixedStrategy
from riskcore import (
    ConstraintMixture,
    ConstraintSet,
    LossVector,
    WeightVector,
    WeightedConstraint,
    best_response,
    hypothesis_losses,
    mixed_risk,
    rai_risk,
    weighted_risk,
)

LOSSES = [0.1, 0.2, 0.3, 0.4]

loss_vectors = st.lists(st.floats(min_value=0.0, max_value=5.0, allow_nan=False, allow_subnormal=False), min_size=1, max_size=8)
distinct_loss_vectors = st.lists(
    st.floats(min_value=0.0, max_value=5.0, allow_nan=False, allow_subnormal=False), min_size=1, max_size=8, unique=True
)
alphas = st.floats(min_value=0.01, max_value=1.0)
rhos = st.floats(min_value=0.01, max_value=5.0)


def constraint_sets():
    return st.one_of(
        st.just(ConstraintSet.worst_group()),
        alphas.map(ConstraintSet.cvar),
        rhos.map(ConstraintSet.chi_square),
    )


def group_ids_for(n: int) -> np.ndarray:
    return np.arange(n) % 3


def test_weighted_risk_uniform_is_mean():
    assert weighted_risk(LossVector(LOSSES), WeightVector.uniform(4)) == pytest.approx(0.25)


def test_weighted_risk_point_mass():
    assert weighted_risk(LossVector(LOSSES), WeightVector(np.array([0.0, 0.0, 0.0, 1.0]))) == pytest.approx(0.4)


def test_weighted_risk_half_half():
    assert weighted_risk(LossVector(LOSSES), WeightVector(np.array([0.0, 0.0, 0.5, 0.5]))) == pytest.approx(0.35)


def test_weighted_risk_length_mismatch():
    with pytest.raises(ContractError):
        weighted_risk(LossVector(LOSSES), WeightVector.uniform(3))


def test_weight_vector_must_be_a_distribution():
    with pytest.raises(ContractError):
        WeightVector(np.array([0.5, 0.6]))
    with pytest.raises(ContractError):
        WeightVector(np.array([1.5, -0.5]))


def test_loss_vector_must_be_nonnegative():
    with pytest.raises(ContractError):
        LossVector([0.1, -0.2])


def test_worst_group_best_response():
    lv = LossVector([0.1, 0.3, 0.5], group_ids=[0, 0, 1])
    w = best_response(lv, ConstraintSet.worst_group())
    np.testing.assert_allclose(w.w, [0.0, 0.0, 1.0])
    assert rai_risk(lv, ConstraintSet.worst_group()) == pytest.approx(0.5)


def test_worst_group_needs_group_ids():
    with pytest.raises(ContractError):
        best_response(LossVector(LOSSES), ConstraintSet.worst_group())


def test_worst_group_single_group_is_mean():
    lv = LossVector(LOSSES, group_ids=[0, 0, 0, 0])
    assert rai_risk(lv, ConstraintSet.worst_group()) == pytest.approx(0.25)


def test_cvar_best_response():
    w = best_response(LossVector(LOSSES), ConstraintSet.cvar(0.5))
    np.testing.assert_allclose(w.w, [0.0, 0.0, 0.5, 0.5])
    assert rai_risk(LossVector(LOSSES), ConstraintSet.cvar(0.5)) == pytest.approx(0.35)


def test_cvar_partial_cap():
    # cap 1 / (0.3 * 4) = 5/6: the largest loss saturates, the rest goes to the next one
    w = best_response(LossVector(LOSSES), ConstraintSet.cvar(0.3))
    np.testing.assert_allclose(w.w, [0.0, 0.0, 1.0 / 6.0, 5.0 / 6.0])


def test_cvar_ties_go_to_lowest_index():
    w = best_response(LossVector([0.5, 0.5, 0.5, 0.1]), ConstraintSet.cvar(0.5))
    np.testing.assert_allclose(w.w, [0.5, 0.5, 0.0, 0.0])


def test_cvar_full_alpha_is_uniform():
    w = best_response(LossVector([0.9, 0.1, 0.4]), ConstraintSet.cvar(1.0))
    np.testing.assert_allclose(w.w, np.full(3, 1.0 / 3.0))


@pytest.mark.parametrize("losses, expected", [([0.2, 0.4], 0.3)])
def test_rai_risk_full_cvar_is_mean(losses, expected):
    assert rai_risk(LossVector(losses), ConstraintSet.cvar(1.0)) == pytest.approx(expected)


def test_rai_risk_half_cvar_is_max_of_two():
    assert rai_risk(LossVector([0.2, 0.4]), ConstraintSet.cvar(0.5)) == pytest.approx(0.4)


def test_chi_square_small_radius_is_near_uniform():
    w = best_response(LossVector([0.9, 0.1, 0.4, 0.7]), ConstraintSet.chi_square(1e-8))
    np.testing.assert_allclose(w.w, np.full(4, 0.25), atol=1e-3)


def test_chi_square_large_radius_concentrates_on_max():
    w = best_response(LossVector([0.9, 0.1, 0.4, 0.7]), ConstraintSet.chi_square(10.0))
    np.testing.assert_allclose(w.w, [1.0, 0.0, 0.0, 0.0])


def test_chi_square_water_filling_zeroes_small_losses():
    lv = LossVector([0.0, 0.0, 0.0, 0.0, 1.0, 2.0])
    cs = ConstraintSet.chi_square(2.0)
    w = best_response(lv, cs)
    assert cs.contains(w.w)
    assert np.all(w.w[:4] == 0.0)
    assert w.w[5] > w.w[4] > 0.0


def test_chi_square_default_radius():
    assert ConstraintSet(kind="chi_square").rho == 0.5


def test_cvar_needs_alpha():
    with pytest.raises(ValueError):
        ConstraintSet(kind="cvar")


def test_empty_losses_rejected():
    with pytest.raises(ContractError):
        best_response(LossVector(np.array([])), ConstraintSet.cvar(0.5))


def test_constraint_mixture_combines_best_responses():
    lv = LossVector(LOSSES, group_ids=[0, 0, 1, 1])
    mixture = ConstraintMixture(
        members=(
            WeightedConstraint(constraint=ConstraintSet.cvar(0.25), weight=1.0),
            WeightedConstraint(constraint=ConstraintSet.cvar(1.0), weight=3.0),
        )
    )
    w = best_response(lv, mixture)
    np.testing.assert_allclose(w.w, 0.25 * np.array([0, 0, 0, 1.0]) + 0.75 * np.full(4, 0.25))


@settings(max_examples=200, deadline=None)
@given(losses=loss_vectors, cs=constraint_sets())
def test_best_response_is_feasible(losses, cs):
    lv = LossVector(losses, group_ids=group_ids_for(len(losses)))
    w = best_response(lv, cs)
    assert cs.contains(w.w, lv.group_ids, tol=1e-9)


@settings(max_examples=200, deadline=None)
@given(losses=loss_vectors, cs=constraint_sets())
def test_rai_risk_dominates_mean(losses, cs):
    lv = LossVector(losses, group_ids=group_ids_for(len(losses)))
    assert rai_risk(lv, cs) >= float(np.mean(losses)) - 1e-12


@settings(max_examples=200, deadline=None)
@given(losses=loss_vectors, a=alphas, b=alphas)
def test_cvar_risk_is_non_increasing_in_alpha(losses, a, b):
    low, high = sorted((a, b))
    lv = LossVector(losses)
    assert rai_risk(lv, ConstraintSet.cvar(high)) <= rai_risk(lv, ConstraintSet.cvar(low)) + 1e-12


@settings(max_examples=200, deadline=None)
@given(losses=distinct_loss_vectors, cs=constraint_sets(), data=st.data())
def test_best_response_is_permutation_equivariant(losses, cs, data):
    n = len(losses)
    perm = np.asarray(data.draw(st.permutations(list(range(n)))))
    groups = np.arange(n)  # one sample per group keeps group means distinct
    original = best_response(LossVector(losses, groups), cs).w
    permuted = best_response(LossVector(np.asarray(losses)[perm], groups[perm]), cs).w
    np.testing.assert_allclose(permuted, original[perm], atol=1e-9)


def _cvar_reference(losses: np.ndarray, alpha: float) -> np.ndarray:
    n = losses.size
    cap = 1.0 / (alpha * n)
    w = np.zeros(n)
    remaining = 1.0
    for index in sorted(range(n), key=lambda i: (-losses[i], i)):
        take = min(cap, remaining)
        if take <= 1e-12:
            break
        w[index] = take
        remaining -= take
    return w


def test_cvar_matches_sort_and_cap_reference():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 30))
        losses = np.round(rng.exponential(size=n), 2)  # rounding creates ties
        alpha = float(rng.choice([0.05, 0.1, 0.25, 0.3, 0.5, 0.75, 1.0, rng.uniform(0.01, 1.0)]))
        got = best_response(LossVector(losses), ConstraintSet.cvar(alpha)).w
        expected = _cvar_reference(losses, alpha)
        np.testing.assert_allclose(got, expected, atol=1e-12)
        assert np.array_equal(got > 1e-12, expected > 1e-12)


def _simplex_grid(n: int, steps: int):
    for cut in itertools.combinations(range(steps + n - 1), n - 1):
        parts = np.diff(np.concatenate([[-1], cut, [steps + n - 1]])) - 1
        yield parts / steps


@pytest.mark.parametrize("cs", [ConstraintSet.worst_group(), ConstraintSet.cvar(0.5), ConstraintSet.chi_square(0.3)])
def test_best_response_dominates_feasible_grid(cs):
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 4))
        lv = LossVector(rng.uniform(0, 2, size=n), group_ids=group_ids_for(n))
        best = rai_risk(lv, cs)
        grid_best = max(
            float(w @ lv.losses) for w in _simplex_grid(n, 100) if cs.contains(w, lv.group_ids, tol=1e-9)
        )
        assert best >= grid_best - 1e-9
        assert best - grid_best < 0.05


def test_cvar_best_response_matches_linear_program():
    rng = np.random.default_rng(6)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        losses = rng.uniform(0, 3, size=n)
        alpha = float(rng.uniform(0.05, 1.0))
        result = linprog(
            -losses,
            A_eq=np.ones((1, n)),
            b_eq=[1.0],
            bounds=[(0.0, 1.0 / (alpha * n))] * n,
            method="highs",
        )
        assert rai_risk(LossVector(losses), ConstraintSet.cvar(alpha)) == pytest.approx(-result.fun, abs=1e-6)


def _chi_square_by_support_enumeration(losses: np.ndarray, rho: float) -> float:
    """
    Exact chi-square worst case: on each support the optimum is either a vertex or the point
    of the sphere ``||w||^2 = (2 rho + 1) / n`` furthest along the centred losses.
    """
    n = losses.size
    bound = (2.0 * rho + 1.0) / n
    best = -np.inf
    for k in range(1, n + 1):
        if bound < 1.0 / k - 1e-15:
            continue
        for support in itertools.combinations(range(n), k):
            sub = losses[list(support)]
            centred = sub - sub.mean()
            norm = float(np.linalg.norm(centred))
            if norm == 0.0:
                best = max(best, float(sub.mean()))
                continue
            radius = np.sqrt(max(bound - 1.0 / k, 0.0))
            w = 1.0 / k + radius * centred / norm
            if np.all(w >= -1e-12):
                best = max(best, float(w @ sub))
    return best


def test_chi_square_best_response_matches_support_enumeration():
    rng = np.random.default_rng(8)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        losses = rng.uniform(0, 3, size=n)
        rho = float(rng.uniform(0.01, 3.0))
        cs = ConstraintSet.chi_square(rho)
        lv = LossVector(losses)
        w = best_response(lv, cs)
        assert cs.contains(w.w, tol=1e-9)
        assert rai_risk(lv, cs) == pytest.approx(_chi_square_by_support_enumeration(losses, rho), abs=1e-6)


def test_worst_group_best_response_is_the_argmax_group():
    rng = np.random.default_rng(9)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        losses = rng.uniform(0, 3, size=n)
        group_ids = rng.integers(0, 3, size=n)
        lv = LossVector(losses, group_ids=group_ids)
        present = np.unique(group_ids)
        means = np.array([losses[group_ids == g].mean() for g in present])
        worst = present[int(np.argmax(means))]
        w = best_response(lv, ConstraintSet.worst_group()).w
        assert rai_risk(lv, ConstraintSet.worst_group()) == pytest.approx(means.max(), abs=1e-6)
        np.testing.assert_allclose(w, (group_ids == worst) / np.sum(group_ids == worst), atol=1e-12)


def test_chi_square_beats_random_feasible_points():
    rng = np.random.default_rng(7)
    cs = ConstraintSet.chi_square(0.4)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        lv = LossVector(rng.uniform(0, 3, size=n))
        best = rai_risk(lv, cs)
        for _ in range(50):
            w = rng.dirichlet(np.ones(n))
            if cs.contains(w):
                assert float(w @ lv.losses) <= best + 1e-9


def test_mixed_risk_point_mass_equals_weighted_risk(dataset_factory):
    data = dataset_factory([[0.0, 1.0], [1.0, -1.0], [2.0, 0.5]], [0, 1, 1], [0, 0, 0])
    h = LinearHypothesis(weights=(1.0, -0.5), bias=0.2)
    w = WeightVector(np.array([0.2, 0.3, 0.5]))
    expected = weighted_risk(hypothesis_losses(h, data), w)
    assert mixed_risk(MixedStrategy.point_mass(h), data, w) == pytest.approx(expected)


def test_mixed_risk_is_linear_in_q(dataset_factory):
    data = dataset_factory([[0.0, 1.0], [1.0, -1.0], [2.0, 0.5]], [0, 1, 1], [0, 0, 0])
    h1 = LinearHypothesis(weights=(1.0, -0.5), bias=0.2)
    h2 = LinearHypothesis(weights=(-2.0, 0.5), bias=0.0)
    w = WeightVector.uniform(3)
    half = MixedStrategy((h1, h2), np.array([0.5, 0.5]))
    expected = 0.5 * (
        mixed_risk(MixedStrategy.point_mass(h1), data, w) + mixed_risk(MixedStrategy.point_mass(h2), data, w)
    )
    assert mixed_risk(half, data, w) == pytest.approx(expected)


def test_mixed_risk_matches_sampling(dataset_factory):
    rng = np.random.default_rng(8)
    data = dataset_factory(rng.normal(size=(5, 2)), [0, 1, 0, 1, 1], [0, 0, 0, 0, 0])
    hypotheses = tuple(LinearHypothesis(weights=tuple(rng.normal(size=2)), bias=float(rng.normal())) for _ in range(3))
    Q = MixedStrategy(hypotheses, rng.dirichlet(np.ones(3)))
    w = WeightVector(rng.dirichlet(np.ones(5)))
    per_member = np.array([mixed_risk(MixedStrategy.point_mass(h), data, w) for h in hypotheses])
    draws = per_member[rng.choice(3, size=1_000_000, p=Q.q)]
    sigma = draws.std() / np.sqrt(draws.size)
    assert abs(mixed_risk(Q, data, w) - draws.mean()) < 4 * sigma + 1e-12
