import math

import pytest

from diskarr.bounds import (
    REFERENCE_BOUNDS,
    asymptotic_saturation_bound,
    cluster_covering_bound,
    cluster_packing_bound,
    format_constants,
    known_constants,
)
from diskarr.constructions import cluster
from diskarr.union import Cluster

SQ3 = math.sqrt(3.0)
PI = math.pi


@pytest.mark.parametrize("kind, value", [("pack2", 0.31075), ("pack3", 0.36561), ("pack7", 0.47892)])
def test_packing_bounds_match_published_values(kind, value):
    rep = cluster_packing_bound(kind)
    assert rep.bound == pytest.approx(value, abs=1e-5)
    assert rep.abs_err <= 1e-12
    assert rep.side == "packing-lower" and rep.n == len(cluster(kind))


def test_dilated_domain_areas():
    assert cluster_packing_bound("pack2").domain_area.mid == pytest.approx(16 * PI / 3 + 2 * SQ3, abs=1e-11)
    assert cluster_packing_bound("pack3").domain_area.mid == pytest.approx(4 * SQ3 + 6 * PI, abs=1e-11)
    assert cluster_packing_bound("pack7").domain_area.mid == pytest.approx(12 * SQ3 + 8 * PI, abs=1e-11)


def test_packing_bounds_ordered_below_packing_density():
    b = [cluster_packing_bound(k).bound for k in ("pack2", "pack3", "pack7")]
    assert b[0] < b[1] < b[2] < PI / math.sqrt(12)


def test_overlapping_cluster_rejected():
    with pytest.raises(ValueError):
        cluster_packing_bound(Cluster([[0, 0], [1.5, 0]]))


def test_custom_packing_cluster_has_no_reference():
    rep = cluster_packing_bound(Cluster([[0, 0], [5, 0]]))
    assert rep.paper_value is None and rep.rel_err is None
    assert rep.bound == pytest.approx(2 * PI / (8 * PI))


@pytest.mark.parametrize("kind, scale, value", [
    ("cover3", 1.0, 58.44661),
    ("cover4", math.sqrt(2), 14.63916),
    ("cover7", SQ3, 5.35179),
])
def test_covering_bounds_at_fixed_scale(kind, scale, value):
    rep = cluster_covering_bound(kind, scale)
    assert rep.bound == pytest.approx(value, rel=1e-2)
    assert rep.note == ""
    assert rep.scale == scale


def test_covering_bounds_ordered_above_covering_density():
    b = [cluster_covering_bound(k).bound for k in ("cover3", "cover4", "cover7")]
    assert b[0] > b[1] > b[2] > 2 * PI / math.sqrt(27)


def test_covering_bound_reports_discrepancy():
    rep = cluster_covering_bound("cover4", 1.2)
    assert rep.rel_err > 1e-2
    assert "misses the closed form" in rep.note


def test_covering_bound_errors():
    with pytest.raises(ValueError):
        cluster_covering_bound("pack2")
    with pytest.raises(ValueError):
        cluster_covering_bound("cover3", SQ3)


def test_reference_values():
    assert REFERENCE_BOUNDS["cover3"] == pytest.approx(58.44661, abs=1e-5)
    assert REFERENCE_BOUNDS["cover4"] == pytest.approx(14.63916, abs=1e-5)
    assert REFERENCE_BOUNDS["cover7"] == pytest.approx(5.35179, abs=1e-5)


def test_asymptotic_bound():
    delta = PI / math.sqrt(12)
    assert asymptotic_saturation_bound(delta, PI, 2, 100) == pytest.approx(delta * (9 / 11) ** 2)
    assert asymptotic_saturation_bound(0.90690, 3.14159265, 2, 100) == pytest.approx(0.60710, abs=1e-5)
    vals = [asymptotic_saturation_bound(delta, PI, 2, n) for n in (10**2, 10**4, 10**6)]
    assert vals[0] < vals[1] < vals[2] < delta
    assert delta - vals[2] < 1e-2
    with pytest.raises(ValueError):
        asymptotic_saturation_bound(delta, PI, 2, 1)
    # 3-ball normalized to diameter 1
    v3 = 4 / 3 * PI / 8
    assert 0 < asymptotic_saturation_bound(0.74, v3, 3, 10**6) < 0.74


def test_known_constants():
    rows = {c.name: c for c in known_constants()}
    assert round(rows["Delta_1(B2)"].value, 6) == 0.302300
    assert rows["Delta_2(B2)"].status == "conjectural"
    assert round(rows["Delta_2(B2)"].value, 6) == 0.461873
    assert math.isinf(rows["Theta_2(B2)"].value)
    assert round(rows["theta(B2)"].value, 5) == 1.20920
    text = format_constants(known_constants())
    assert "0.461873" in text and "(conjecture)" in text
