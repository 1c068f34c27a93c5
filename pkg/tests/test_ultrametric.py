import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultraext import (
    PairScope,
    StrongTriangleViolation,
    SubsetSelection,
    TriangleViolation,
    Ultrametric,
    approximation_parameters,
    dominating_ultrametric_on_subset,
    minimax_closure,
    path_metric,
    random_metric,
    restrict,
    scale,
    subdominant_ultrametric,
    uniform_ultrametric,
    validate_metric,
    validate_ultrametric,
)
from oracles import can_raise_entry, minimax_by_path_enumeration, strong_triangle_holds


def test_strong_violation_not_plain_triangle():
    with pytest.raises(StrongTriangleViolation) as exc:
        validate_ultrametric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert exc.value.witness[:2] == (0, 2)
    assert not isinstance(exc.value, TriangleViolation)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_uniform_is_ultrametric(n):
    m = np.full((n, n), 0.7)
    np.fill_diagonal(m, 0)
    validate_ultrametric(m)


def test_hand_checked_ultrametric():
    validate_ultrametric([[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_ultrametric_still_needs_metric_axioms():
    with pytest.raises(ValueError):
        validate_ultrametric([[0, 1], [1.5, 0]])
    with pytest.raises(ValueError):
        validate_ultrametric([[0, 0, 1], [0, 0, 1], [1, 1, 0]])


# frozen from minimax_by_path_enumeration
@pytest.mark.parametrize("n, expected", [
    (3, [[0, 1, 1], [1, 0, 1], [1, 1, 0]]),
    (4, [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]),
])
def test_subdominant_of_path(n, expected):
    assert subdominant_ultrametric(path_metric(n)).dist.tolist() == expected


def test_subdominant_fixed_point():
    u = np.array([[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 1.5], [2, 2, 1.5, 0]])
    space = validate_metric(u)
    np.testing.assert_array_equal(subdominant_ultrametric(space).dist, u)


@given(st.integers(2, 14), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_subdominant_below_and_valid(n, seed):
    space = random_metric(n, seed)
    sub = subdominant_ultrametric(space)
    validate_ultrametric(sub.dist)
    assert (sub.dist <= space.dist).all()


@pytest.mark.parametrize("seed", range(20))
def test_subdominant_matches_enumeration_and_is_maximal(seed):
    rng = np.random.default_rng(seed)
    space = random_metric(int(rng.integers(2, 7)), seed)
    sub = subdominant_ultrametric(space).dist
    np.testing.assert_allclose(sub, minimax_by_path_enumeration(space.dist), rtol=0, atol=1e-12)
    assert can_raise_entry(sub, space.dist) is None


def test_minimax_closure_absent_edges():
    inf = np.inf
    w = np.array([[0, 1, inf], [1, 0, 3], [inf, 3, 0]])
    np.testing.assert_array_equal(minimax_closure(w), [[0, 1, 3], [1, 0, 3], [3, 3, 0]])
    with pytest.raises(ValueError):
        minimax_closure(np.array([[0, inf], [inf, 0]]))


def test_scale():
    rho = subdominant_ultrametric(random_metric(5, 3))
    assert scale(rho, 1) == rho
    np.testing.assert_allclose(scale(scale(rho, 2), 0.5).dist, rho.dist, rtol=1e-15)
    assert scale(uniform_ultrametric(4, 1), 3) == uniform_ultrametric(4, 3)
    with pytest.raises(ValueError):
        scale(rho, 0)
    with pytest.raises(ValueError):
        scale(rho, -1)


def test_approximation_identity():
    d = path_metric(5)
    rep = approximation_parameters(d.dist, d)
    assert rep.factor_D == 1 and rep.scaling_c == 1


def test_approximation_single_pair():
    d = restrict(path_metric(4), SubsetSelection((1, 3), 4))
    rep = approximation_parameters(uniform_ultrametric(2, 2), d)
    assert (rep.factor_D, rep.scaling_c) == (1, 1)


def test_approximation_scaled_copy():
    d = path_metric(4)
    rep = approximation_parameters(2 * d.dist, d)
    assert rep.factor_D == 1 and rep.scaling_c == 0.5


@pytest.mark.parametrize("c", [0.5, 3])
def test_factor_scale_invariant(c):
    space = random_metric(7, 11)
    rho = subdominant_ultrametric(space)
    base = approximation_parameters(rho, space).factor_D
    assert approximation_parameters(scale(rho, c), space).factor_D == pytest.approx(base, rel=1e-12)


def test_approximation_report_sandwich():
    space = random_metric(8, 5)
    rho = subdominant_ultrametric(space)
    rep = approximation_parameters(rho, space)
    a, b = np.triu_indices(8, 1)
    c_rho = rep.scaling_c * rho.dist[a, b]
    d = space.dist[a, b]
    assert (d <= c_rho * (1 + 1e-12)).all()
    assert (c_rho <= rep.factor_D * d * (1 + 1e-12)).all()
    assert rho.dist[rep.min_pair] / space.dist[rep.min_pair] == rep.min_stretch


def test_empty_scope():
    space = path_metric(3)
    with pytest.raises(ValueError):
        approximation_parameters(space.dist, space, PairScope.inner(SubsetSelection((1,), 3)))


def test_scope_pairs():
    s = SubsetSelection((1, 3), 4)
    a, b = PairScope.cross(s).pairs(4)
    assert list(zip(a.tolist(), b.tolist())) == [(1, 0), (1, 2), (1, 3), (3, 0), (3, 2)]
    a, b = PairScope.inner(s).pairs(4)
    assert list(zip(a.tolist(), b.tolist())) == [(1, 3)]
    assert len(PairScope.all().pairs(4)[0]) == 6
    with pytest.raises(ValueError):
        PairScope.cross(s).pairs(5)


def test_dominating_fixed_point():
    u = np.array([[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 1.5], [2, 2, 1.5, 0]])
    space = validate_metric(u)
    rho, D = dominating_ultrametric_on_subset(space, SubsetSelection.full(4))
    np.testing.assert_array_equal(rho.dist, u)
    assert D == 1


def test_dominating_single_pair():
    rho, D = dominating_ultrametric_on_subset(path_metric(4), SubsetSelection((1, 3), 4))
    assert rho.dist.tolist() == [[0, 2], [2, 0]] and D == 1


def test_dominating_three_odd_points():
    # minimax over {1,3,5} is uniform 2; scale by 4/2 gives uniform 4, stretches 2, 2, 1
    rho, D = dominating_ultrametric_on_subset(path_metric(6), SubsetSelection((1, 3, 5), 6))
    assert rho == uniform_ultrametric(3, 4)
    assert D == 2


def test_dominating_single_point():
    rho, D = dominating_ultrametric_on_subset(path_metric(4), SubsetSelection((2,), 4))
    assert rho.dist.tolist() == [[0.0]] and D == 1


@given(st.integers(2, 12), st.integers(0, 10**6), st.data())
@settings(max_examples=60, deadline=None)
def test_dominating_sandwich(n, seed, data):
    space = random_metric(n, seed)
    idx = data.draw(st.sets(st.integers(0, n - 1), min_size=2))
    subset = SubsetSelection(tuple(idx), n)
    rho, D = dominating_ultrametric_on_subset(space, subset)
    d = restrict(space, subset).dist
    a, b = np.triu_indices(len(subset), 1)
    assert isinstance(rho, Ultrametric)
    assert strong_triangle_holds(rho.dist)
    assert (rho.dist[a, b] - d[a, b] >= -1e-9 * d[a, b]).all()
    assert (D * d[a, b] - rho.dist[a, b] >= -1e-9 * d[a, b]).all()
