import math

import numpy as np
import pytest

from diskarr.constructions import hex_covering, hex_packing, sect5_covering
from diskarr.geom import Disk, Lattice
from diskarr.periodic import (
    PeriodicArrangement,
    count_centers,
    covering_check,
    deepest_hole_bracket,
    delaunay_holes,
    density,
    is_packing,
    lens_area,
    relative_density,
    uniquely_covered_samples,
)

SQ3 = math.sqrt(3.0)


def square(side, motif=((0.0, 0.0),), r=1.0):
    return PeriodicArrangement(Lattice([[side, 0.0], [0.0, side]]), motif, r)


def grid_covering_radius(A, step=0.01):
    """Oracle: max over a fine grid of the cell of the distance to the nearest center."""
    R = A.lattice.reduced
    n1 = int(math.ceil(np.hypot(*R.basis[0]) / step))
    n2 = int(math.ceil(np.hypot(*R.basis[1]) / step))
    g = np.stack(np.meshgrid(np.arange(n1) / n1, np.arange(n2) / n2, indexing="ij"), -1).reshape(-1, 2)
    P = R.to_cart(g)
    d = np.full(len(P), np.inf)
    for k1 in range(-2, 3):
        for k2 in range(-2, 3):
            for m in A.motif:
                c = m + k1 * R.basis[0] + k2 * R.basis[1]
                np.minimum(d, np.hypot(*(P - c).T), out=d)
    return float(d.max())


def test_densities():
    assert density(hex_packing()) == pytest.approx(math.pi / (2 * SQ3), rel=1e-12)
    assert density(hex_covering()) == pytest.approx(2 * math.pi / math.sqrt(27), rel=1e-12)
    assert density(sect5_covering(2, 0.5)) == pytest.approx(math.pi / (0.5 * (1 + math.sqrt(1 - 0.0625))), rel=1e-12)
    assert round(density(hex_covering()), 5) == 1.20920


def test_density_invariances():
    A = PeriodicArrangement(Lattice([[3.0, 0.2], [0.7, 2.9]]), [(0.1, 0.2), (1.5, 1.4)], 0.8)
    same_lattice = Lattice([[3.0, 0.2], [3.7, 3.1]])
    B = PeriodicArrangement(same_lattice, A.motif + [0.3, -0.2], 0.8)
    C = A.transformed(rotation=1.1, shift=(5.0, -2.0))
    for X in (B, C):
        assert density(X) == pytest.approx(density(A), rel=1e-12)


def test_canonicalization_keeps_inside_points_and_wraps_outside():
    A = square(4.0, [(1.0, 1.0), (5.0, -1.0)])
    assert np.array_equal(A.motif[0], [1.0, 1.0])
    assert np.allclose(A.motif[1], [1.0, 3.0])


def test_coincident_motif_rejected_unless_allowed():
    with pytest.raises(ValueError):
        square(4.0, [(0.0, 0.0), (4.0, 4.0)])
    A = PeriodicArrangement(Lattice([[4.0, 0.0], [0.0, 4.0]]), [(0, 0), (0, 0)], 1.0, allow_coincident=True)
    assert len(A) == 2


def test_bad_arrangements():
    with pytest.raises(ValueError):
        square(4.0, r=0.0)
    with pytest.raises(ValueError):
        PeriodicArrangement(Lattice([[4.0, 0.0], [0.0, 4.0]]), np.empty((0, 2)))
    with pytest.raises(ValueError):
        PeriodicArrangement(Lattice([[4.0, 0.0], [0.0, 4.0]]), [(0.0, 0.0, 0.0)])


def test_is_packing_examples():
    assert is_packing(hex_packing()).status == "certified-yes"
    v = is_packing(hex_packing().with_radius(1.01))
    assert v.status == "certified-no"
    assert v.distance == pytest.approx(2.0)
    assert is_packing(square(2.0)).status == "certified-yes"
    two = square(4.0, [(0.0, 0.0), (1.5, 0.0)])
    v = is_packing(two)
    assert v.status == "certified-no" and v.distance == pytest.approx(1.5)
    a, b = v.witness
    assert np.hypot(*(two.center(a) - two.center(b))) == pytest.approx(1.5)


def test_covering_check_hexagonal():
    A = hex_covering()
    assert covering_check(A, 1.01).status == "certified-yes"
    no = covering_check(A, 0.99)
    assert no.status == "certified-no"
    assert A.nearest_distance(no.witness)[0] > 0.99
    assert covering_check(A, 1.0).status == "unknown"
    assert covering_check(hex_covering(1e-6)).status == "certified-yes"


@pytest.mark.parametrize("a", [1.0, 0.5, 0.25])
def test_covering_check_thin_rows(a):
    A = sect5_covering(2, a)
    assert covering_check(A, 1 + 1e-6).status == "certified-yes"
    assert covering_check(A, 1 - 1e-6).status == "certified-no"


def test_covering_check_is_monotone_in_radius():
    A = square(3.0, [(0, 0), (1.4, 1.6)])
    rs = np.linspace(0.8, 2.0, 25)
    yes = [covering_check(A, r).status == "certified-yes" for r in rs]
    first = yes.index(True)
    assert all(yes[first:])


def test_deepest_hole_examples():
    lo, hi = deepest_hole_bracket(square(4.0))
    assert lo <= 2 * math.sqrt(2) <= hi and hi - lo <= 1e-3
    lo, hi = deepest_hole_bracket(hex_packing())
    assert lo <= 2 / SQ3 <= hi
    g = [(0.1 * i, 0.1 * j) for i in range(10) for j in range(10)]
    lo, hi = deepest_hole_bracket(PeriodicArrangement(Lattice(np.eye(2)), g, 0.01))
    assert hi <= 0.08


@pytest.mark.parametrize("seed", range(10))
def test_deepest_hole_agrees_with_grid_and_delaunay(seed):
    rng = np.random.default_rng(seed)
    L = Lattice([[3.0, 0.0], [rng.uniform(-1, 1), rng.uniform(2.5, 4)]])
    A = PeriodicArrangement(L, L.to_cart(rng.random((int(rng.integers(1, 5)), 2))), 0.5)
    lo, hi = deepest_hole_bracket(A)
    g = grid_covering_radius(A)
    assert g <= hi + 1e-9 and lo <= g + 0.01
    _, depth = delaunay_holes(A)
    assert lo - 1e-9 <= depth[0] <= hi + 1e-9


def test_scaling_scales_verdicts_and_holes():
    A = PeriodicArrangement(Lattice([[3.0, 0.0], [0.8, 2.7]]), [(0, 0), (1.3, 1.1)], 0.9)
    lo, hi = deepest_hole_bracket(A)
    for lam in (0.5, 3.0):
        B = A.transformed(scale=lam)
        assert is_packing(B).status == is_packing(A).status
        for t in (1.2, 1.8):
            assert covering_check(B, lam * t).status == covering_check(A, t).status
        lo2, hi2 = deepest_hole_bracket(B)
        assert lo2 <= lam * hi + 1e-9 and lam * lo <= hi2 + 1e-9


def test_uniquely_covered_samples():
    A = hex_covering(1e-6)
    assert uniquely_covered_samples(A, 0, 0.02)
    B = sect5_covering(2, 0.5)
    P = np.array(uniquely_covered_samples(B, 0, 0.02))
    assert len(P)
    assert np.max(np.hypot(*(P[:, None] - P[None]).transpose(2, 0, 1))) > 1.9
    dup = PeriodicArrangement(A.lattice, [(0, 0), (0, 0)], A.radius, allow_coincident=True)
    assert uniquely_covered_samples(dup, 1, 0.05) == []
    with pytest.raises(IndexError):
        uniquely_covered_samples(A, 3, 0.05)


def test_lens_area_matches_limits():
    assert lens_area(1.0, 1.0, [0.0])[0] == pytest.approx(math.pi)
    assert lens_area(1.0, 1.0, [2.0])[0] == 0.0
    assert lens_area(5.0, 1.0, [2.0])[0] == pytest.approx(math.pi)
    # two unit disks at distance 1: 2 pi/3 - sqrt3/2
    assert lens_area(1.0, 1.0, [1.0])[0] == pytest.approx(2 * math.pi / 3 - SQ3 / 2)


def test_relative_density_examples():
    assert relative_density(hex_packing(), Disk((0.0, 0.0), 50.0)) == pytest.approx(math.pi / (2 * SQ3), abs=0.01)
    assert relative_density(square(10.0, r=1.0), Disk((5.0, 5.0), 2.0)) == 0.0
    assert relative_density(square(10.0, r=1.0), Disk((0.1, 0.0), 0.5)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        relative_density(hex_packing(), Disk((0.0, 0.0), 0.0))


def test_count_centers_closed_window():
    assert count_centers(square(1.0, r=0.1), Disk((0.0, 0.0), 1.0)) == 5
