"""Density bounds from disk clusters, the asymptotic saturation bound, and
named constants for packings and coverings of the plane."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .constructions import cluster
from .periodic import unit_ball_volume
from .union import AreaBracket, Cluster, dilated_union_area, erosion_area

SQRT3 = math.sqrt(3.0)
PI = math.pi

# closed forms the computed bounds are compared against
REFERENCE_BOUNDS = {
    "pack2": 3 * PI / (3 * SQRT3 + 8 * PI),
    "pack3": 3 * PI / (4 * SQRT3 + 6 * PI),
    "pack7": 7 * PI / (12 * SQRT3 + 8 * PI),
    "cover3": 6 * PI / (2 * SQRT3 - PI),
    "cover4": 4 * PI / (4 - PI),
    "cover7": 7 * PI / (6 * SQRT3 - 2 * PI),
}
DISCREPANCY_REL = 1e-2
SCALE_RANGE = (0.1, SQRT3)


class BoundReport(NamedTuple):
    n: int
    side: str  # packing-lower | covering-upper
    cluster: Cluster
    domain_area: AreaBracket
    bound: float
    paper_value: float | None = None
    abs_err: float | None = None
    scale: float | None = None
    note: str = ""

    @property
    def rel_err(self) -> float | None:
        if self.paper_value is None:
            return None
        return self.abs_err / abs(self.paper_value)


def _report(n, side, C, area, kind, scale=None, note="") -> BoundReport:
    bound = n * PI / area.mid
    ref = REFERENCE_BOUNDS.get(kind) if kind else None
    err = abs(bound - ref) if ref is not None else None
    return BoundReport(n, side, C, area, bound, ref, err, scale, note)


def cluster_packing_bound(C) -> BoundReport:
    """Lower bound ``n pi / V(G)`` on the density of n-saturated packings.

    ``G`` is the outer parallel domain of radius 1 of the cluster's disks.
    ``C`` is a :class:`Cluster` or a packing kind name.
    """
    kind = C if isinstance(C, str) else None
    if kind is not None:
        C = cluster(kind)
    if C.min_distance() < 2.0 - 1e-9:
        raise ValueError("packing cluster disks overlap")
    return _report(len(C), "packing-lower", C, dilated_union_area(C, 1.0), kind)


def _erosion_mid(kind, s, rel_tol):
    return erosion_area(cluster(kind, s), rel_tol=rel_tol).mid


def _golden_max(f, a, b, tol=1e-7, max_iter=200):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimal_cover_scale(kind: str, sweep: int = 50) -> tuple[float, bool]:
    """Scale maximizing the erosion area, and whether the sweep looked unimodal."""
    lo, hi = SCALE_RANGE
    S = np.linspace(lo, hi, sweep)
    vals = np.array([_erosion_mid(kind, s, 1e-2) for s in S])
    peak = vals.max()
    noise = 2e-2 * peak
    # count separate runs of near-peak values; a single run means unimodal
    high = vals >= peak - noise
    runs = int(high[0]) + int(np.count_nonzero(high[1:] & ~high[:-1]))
    ups = np.diff(vals)
    unimodal = runs == 1 and not np.any((ups[1:] > noise) & (ups[:-1] < -noise))
    i = int(np.argmax(vals))
    if not unimodal:
        return float(S[i]), False
    a, b = S[max(i - 1, 0)], S[min(i + 1, sweep - 1)]
    s, _ = _golden_max(lambda t: _erosion_mid(kind, t, 1e-3), a, b)
    return float(s), True


def cluster_covering_bound(kind: str, scale: float | None = None) -> BoundReport:
    """Upper bound ``n pi / V(E)`` on the density of n-reduced coverings.

    ``E`` is the inner parallel domain of radius 1 of the union of the
    cluster's disks. Without ``scale`` the cluster scale maximizing ``V(E)``
    is searched on ``[0.1, sqrt 3]``.
    """
    if not kind.startswith("cover"):
        raise ValueError(f"{kind!r} is not a covering cluster")
    note = ""
    if scale is None:
        scale, unimodal = optimal_cover_scale(kind)
        if not unimodal:
            note = "scale sweep not unimodal; using the best sweep point"
    C = cluster(kind, scale)
    area = erosion_area(C)
    if area.inconclusive:
        raise RuntimeError(f"erosion area bracket inconclusive at resolution {area.resolution:.3g}")
    if area.lower <= 0:
        raise ValueError(f"erosion of {kind} at scale {scale} may be null; no finite bound")
    rep = _report(len(C), "covering-upper", C, area, kind, scale, note)
    if rep.rel_err is not None and rep.rel_err > DISCREPANCY_REL:
        extra = f"misses the closed form by {rep.rel_err:.3%}"
        rep = rep._replace(note=f"{rep.note}; {extra}" if rep.note else extra)
    return rep


def asymptotic_saturation_bound(delta: float, body_volume: float, d: int, n: int) -> float:
    """``delta ((c n^(1/d) - 1) / (c n^(1/d) + 1))^d`` with ``c = (V / sigma_d)^(1/d)``.

    Bodies are normalized to diameter 1.
    """
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive integers")
    c = (body_volume / unit_ball_volume(d)) ** (1.0 / d)
    x = c * n ** (1.0 / d)
    if x <= 1.0:
        raise ValueError(f"bound is vacuous: c n^(1/d) = {x:.6g} <= 1")
    return delta * ((x - 1.0) / (x + 1.0)) ** d


class Constant(NamedTuple):
    name: str
    expression: str
    value: float | None
    status: str  # exact | conjectural | bound
    note: str = ""


def known_constants() -> list[Constant]:
    return [
        Constant("delta(B2)", "pi/sqrt(12)", PI / math.sqrt(12.0), "exact", "densest circle packing"),
        Constant("theta(B2)", "2*pi/sqrt(27)", 2 * PI / math.sqrt(27.0), "exact", "thinnest circle covering"),
        Constant("Delta_1(B2)", "pi/(6*sqrt(3))", PI / (6 * SQRT3), "exact",
                 "least density of 1-saturated circle packings"),
        Constant("Delta_2(B2)", "pi*(3-sqrt(5))/sqrt(27)", PI * (3 - math.sqrt(5.0)) / math.sqrt(27.0),
                 "conjectural", "least density of 2-saturated circle packings"),
        Constant("Theta_1(B2)", "inf", math.inf, "exact", "1-reduced coverings can be arbitrarily dense"),
        Constant("Theta_2(B2)", "inf", math.inf, "exact", "2-reduced coverings can be arbitrarily dense"),
        Constant("N_c(B^d)", "d+1", None, "exact", "Newton covering number of the ball; 3 for d=2"),
        Constant("l(B^d)", "<= d+1", None, "bound", "least n with Theta_n finite; <= 3 for d=2"),
        Constant("l(K)", "<= N_c(K)+1", None, "bound", "any convex body K"),
    ]


def format_constants(rows: list[Constant]) -> str:
    lines = []
    for c in rows:
        if c.value is None:
            val = c.expression
        elif math.isinf(c.value):
            val = "inf"
        else:
            val = f"{c.value:.6f}"
        flag = " (conjecture)" if c.status == "conjectural" else ""
        lines.append(f"{c.name:<14} {val:>12}  {c.expression}{flag}")
    return "\n".join(lines)
