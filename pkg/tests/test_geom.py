import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diskarr.geom import (
    AngularArcSet,
    Lattice,
    arc_set_covers_full_circle,
    as_points,
    lattice_reduce,
    periodic_delta,
    shortest_vector,
    smallest_enclosing_circle,
    wrap_delta,
)

SQ3 = math.sqrt(3.0)


def brute_shortest(L, k=6):
    best = math.inf
    for i, j in itertools.product(range(-k, k + 1), repeat=2):
        if i or j:
            best = min(best, float(np.hypot(*(i * L.basis[0] + j * L.basis[1]))))
    return best


bases = st.tuples(
    st.floats(0.5, 3.0), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(0.5, 3.0)
).filter(lambda t: abs(t[0] * t[3] - t[1] * t[2]) > 0.3)


def test_as_points_shapes():
    assert as_points((1, 2)).shape == (1, 2)
    assert as_points([[0, 0], [1, 1]]).shape == (2, 2)
    with pytest.raises(ValueError):
        as_points([1, 2, 3])
    with pytest.raises(ValueError):
        as_points([[0, math.nan]])


def test_lattice_rejects_singular():
    with pytest.raises(ValueError):
        Lattice([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        Lattice([[1, 0, 0], [0, 1, 0]])


def test_lattice_area_and_frac_roundtrip():
    L = Lattice([[2.0, 0.0], [1.0, SQ3]])
    assert L.area == pytest.approx(2 * SQ3)
    P = np.array([[0.3, 0.7], [-5.0, 2.5]])
    assert np.allclose(L.to_cart(L.to_frac(P)), P)


def test_reduce_hexagonal():
    L = Lattice([[2.0, 0.0], [7.0, SQ3]])
    R = lattice_reduce(L)
    assert math.hypot(*R.basis[0]) == pytest.approx(2.0)
    assert math.hypot(*R.basis[1]) == pytest.approx(2.0)
    assert R.area == pytest.approx(L.area)


def test_reduce_is_identity_on_reduced_basis():
    L = Lattice([[2.0, 0.0], [0.5, 3.0]])
    assert lattice_reduce(L) is L


@settings(max_examples=60, deadline=None)
@given(bases)
def test_reduction_properties(t):
    L = Lattice([[t[0], t[1]], [t[2], t[3]]])
    R = lattice_reduce(L)
    b1, b2 = R.basis
    assert b1 @ b1 <= b2 @ b2 + 1e-12
    assert abs(b1 @ b2) <= b1 @ b1 / 2 + 1e-12
    assert R.area == pytest.approx(L.area, rel=1e-9)
    # same lattice: the change of basis is unimodular and integral
    U = R.basis @ np.linalg.inv(L.basis)
    assert np.allclose(U, np.round(U), atol=1e-8)
    assert abs(round(np.linalg.det(U))) == 1
    assert shortest_vector(L) == pytest.approx(brute_shortest(L), rel=1e-9)


def test_periodic_delta_examples():
    L = Lattice([[4.0, 0.0], [0.0, 4.0]])
    assert periodic_delta(L, (0.1, 0.0), (3.9, 0.0)) == pytest.approx(0.2)
    assert periodic_delta(L, (0, 0), (2, 2)) == pytest.approx(2 * math.sqrt(2))


@settings(max_examples=60, deadline=None)
@given(bases, st.tuples(st.floats(-20, 20), st.floats(-20, 20)), st.integers(-3, 3), st.integers(-3, 3))
def test_periodic_delta_is_minimal_and_invariant(t, d, i, j):
    L = Lattice([[t[0], t[1]], [t[2], t[3]]])
    d = np.array(d)
    w = wrap_delta(L, d)[0]
    # w differs from d by a lattice vector
    k = L.to_frac(d - w)
    assert np.allclose(k, np.round(k), atol=1e-7)
    R = L.reduced.basis
    k0 = np.round(np.linalg.solve(R.T, d))
    brute = min(
        float(np.hypot(*(d - (k0[0] + a) * R[0] - (k0[1] + b) * R[1])))
        for a, b in itertools.product(range(-6, 7), repeat=2)
    )
    assert math.hypot(*w) == pytest.approx(brute, abs=1e-9)
    shift = i * L.basis[0] + j * L.basis[1]
    assert periodic_delta(L, d + shift, (0, 0)) == pytest.approx(math.hypot(*w), abs=1e-9)


def test_enclosing_circle_examples():
    D = smallest_enclosing_circle([(0, 0), (2, 0)])
    assert D.center == pytest.approx((1, 0)) and D.radius == pytest.approx(1)
    D = smallest_enclosing_circle([(0, 0), (2, 0), (1, SQ3)])
    assert D.radius == pytest.approx(2 / SQ3)
    D = smallest_enclosing_circle([(0, 0), (1, 0), (2, 0), (3, 0)])
    assert D.radius == pytest.approx(1.5)
    assert smallest_enclosing_circle([(5, 5)]).radius == 0.0
    with pytest.raises(ValueError):
        smallest_enclosing_circle([])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=25), st.integers(0, 5))
def test_enclosing_circle_contains_all_and_is_seed_independent(pts, seed):
    D = smallest_enclosing_circle(pts, seed=seed)
    P = np.array(pts)
    assert np.all(np.hypot(*(P - D.center).T) <= D.radius * (1 + 1e-9) + 1e-9)
    D0 = smallest_enclosing_circle(pts, seed=0)
    assert D.radius == pytest.approx(D0.radius, rel=1e-9, abs=1e-9)
    # minimality: the radius is at least half the diameter of the set
    diam = max(math.dist(a, b) for a in pts for b in pts)
    assert D.radius >= diam / 2 - 1e-9


def test_arc_set_gaps_and_wrap():
    A = AngularArcSet.from_arcs([(0.0, 1.0), (2.0, 1.0)])
    gaps = A.gaps()
    assert len(gaps) == 2
    assert gaps[0] == pytest.approx((1.0, 1.0))
    wrapped = AngularArcSet.from_arcs([(6.0, 1.0)])
    assert wrapped.contains(0.1) and wrapped.contains(6.2) and not wrapped.contains(3.0)


def test_arc_set_full_cover():
    A = AngularArcSet.centered([0.0, 2.1, 4.2], [1.1, 1.1, 1.1])
    assert arc_set_covers_full_circle(A)
    B = AngularArcSet.centered([0.0, 2.1, 4.2], [1.0, 1.0, 1.0])
    assert not arc_set_covers_full_circle(B)
    assert arc_set_covers_full_circle(AngularArcSet.centered([1.0], [math.pi]))
    assert AngularArcSet().gaps() == [(0.0, 2 * math.pi)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(0.01, 3.0)), max_size=8))
def test_arc_set_agrees_with_sampling(arcs):
    A = AngularArcSet.from_arcs(arcs)
    th = np.linspace(0, 2 * np.pi, 2001)[:-1] + 1e-4
    naive = np.zeros_like(th, dtype=bool)
    for s, w in arcs:
        naive |= ((th - s) % (2 * np.pi)) <= w
    assert np.array_equal(A.contains(th), naive) or np.mean(A.contains(th) != naive) < 0.002
    total = sum(w for _, w in A.arcs) + sum(w for _, w in A.gaps(0.0))
    assert total == pytest.approx(2 * np.pi)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=2, max_size=25, unique=True))
def test_enclosing_circle_is_tight(pts):
    D = smallest_enclosing_circle(pts)
    P = np.array(pts)
    d = np.hypot(*(P - D.center).T)
    assert np.all(d - D.radius <= 1e-12 * max(1.0, D.radius))
    if D.radius > 1e-5:
        assert np.any(d > D.radius - 1e-6)


@pytest.mark.parametrize("seed", range(20))
def test_full_cover_agrees_with_dense_directions(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 7))
    A = AngularArcSet.centered(rng.uniform(0, 2 * np.pi, k), rng.uniform(0.2, 1.6, k))
    th = np.linspace(0, 2 * np.pi, 100_000, endpoint=False)
    assert arc_set_covers_full_circle(A) == bool(np.all(A.contains(th)))


def test_full_cover_examples():
    assert arc_set_covers_full_circle(AngularArcSet.from_arcs([(0.0, 2 * math.pi)]))
    assert arc_set_covers_full_circle(AngularArcSet.from_arcs([(0.0, math.pi), (math.pi, math.pi)]))
    assert not arc_set_covers_full_circle(AngularArcSet.from_arcs([(0.0, math.pi), (math.pi + 0.01, math.pi - 0.01)]))
