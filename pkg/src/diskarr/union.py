"""Areas of unions of congruent disks, their dilations and erosions.

Unions are handled through their boundary: for every circle the arcs not
covered by any other disk are collected, and the area follows from Green's
theorem along those arcs. Erosion (the set of points whose unit disk lies
inside the union) is tested exactly by an arc cover of the probe circle plus
a check for uncovered pockets, and its area is bracketed on an adaptive grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .geom import ANGLE_TOL, DEFAULT_TOL, TAU, AngularArcSet, as_points

MAX_DISKS = 64
MIN_SEPARATION = 1e-12


class AreaBracket(NamedTuple):
    lower: float
    upper: float
    method: str
    resolution: float
    inconclusive: bool = False

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, value) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True, eq=False)
class Cluster:
    """Finite set of unit-disk centers."""

    centers: np.ndarray

    def __post_init__(self):
        c = as_points(self.centers).copy()
        if len(c) == 0:
            raise ValueError("a cluster needs at least one center")
        diff = c[:, None, :] - c[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        np.fill_diagonal(dist, np.inf)
        if dist.min() < MIN_SEPARATION:
            raise ValueError("cluster centers must be pairwise distinct")
        c.setflags(write=False)
        object.__setattr__(self, "centers", c)

    def __len__(self):
        return len(self.centers)

    def min_distance(self) -> float:
        if len(self) == 1:
            return math.inf
        diff = self.centers[:, None, :] - self.centers[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        np.fill_diagonal(dist, np.inf)
        return float(dist.min())

    def transformed(self, rotation: float = 0.0, shift=(0.0, 0.0), scale: float = 1.0) -> Cluster:
        c, s = math.cos(rotation), math.sin(rotation)
        R = np.array([[c, s], [-s, c]])
        return Cluster(scale * (self.centers @ R) + np.asarray(shift, dtype=float))


def _centers_of(C) -> np.ndarray:
    return C.centers if isinstance(C, Cluster) else as_points(C)


def _validate_for_arcs(centers: np.ndarray) -> None:
    if len(centers) > MAX_DISKS:
        raise ValueError(f"at most {MAX_DISKS} disks are supported, got {len(centers)}")
    if len(centers) > 1:
        diff = centers[:, None, :] - centers[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        np.fill_diagonal(dist, np.inf)
        if dist.min() < MIN_SEPARATION:
            raise ValueError("nearly identical centers (distance < 1e-12)")


def exposed_arcs(centers: np.ndarray, r: float) -> list[tuple[int, float, float]]:
    """Arcs ``(circle index, start angle, width)`` of the union boundary."""
    out = []
    for i, c in enumerate(centers):
        rel = centers - c
        d = np.hypot(rel[:, 0], rel[:, 1])
        mask = (d > 0.0) & (d < 2.0 * r)
        ang = np.arctan2(rel[mask, 1], rel[mask, 0])
        half = np.arccos(np.clip(d[mask] / (2.0 * r), -1.0, 1.0))
        covered = AngularArcSet.centered(ang, half)
        for start, width in covered.gaps():
            out.append((i, start, width))
    return out


def union_area_exact(C, r: float = 1.0) -> AreaBracket:
    """Area of the union of radius-``r`` disks at the cluster centers."""
    if r <= 0:
        raise ValueError("radius must be positive")
    centers = _centers_of(C)
    _validate_for_arcs(centers)
    total = 0.0
    for i, start, width in exposed_arcs(centers, r):
        cx, cy = centers[i]
        end = start + width
        total += 0.5 * (r * r * width + r * (cx * (math.sin(end) - math.sin(start))
                                              - cy * (math.cos(end) - math.cos(start))))
    err = 1e-12 * len(centers) * max(total, r * r)
    return AreaBracket(total - err, total + err, "exact-arcs", 0.0)


def dilated_union_area(C, t: float) -> AreaBracket:
    """Area of the outer parallel domain of radius ``t`` of a unit-disk union."""
    if t < 0:
        raise ValueError("dilation radius must be nonnegative")
    return union_area_exact(C, 1.0 + t)


# ---------------------------------------------------------------- disk containment


def _pair_vertices(E: np.ndarray, R: float):
    """Intersection points of all pairs of radius-``R`` circles centered at ``E``."""
    n = len(E)
    if n < 2:
        return np.empty((0, 2)), np.empty((0, 2), dtype=int)
    ii, jj = np.triu_indices(n, 1)
    delta = E[jj] - E[ii]
    d = np.hypot(delta[:, 0], delta[:, 1])
    keep = (d > 0.0) & (d <= 2.0 * R)
    ii, jj, delta, d = ii[keep], jj[keep], delta[keep], d[keep]
    mid = 0.5 * (E[ii] + E[jj])
    h = np.sqrt(np.maximum(R * R - 0.25 * d * d, 0.0))
    perp = np.stack([-delta[:, 1], delta[:, 0]], axis=1) / d[:, None]
    q = np.concatenate([mid + h[:, None] * perp, mid - h[:, None] * perp])
    pairs = np.concatenate([np.stack([ii, jj], 1), np.stack([ii, jj], 1)])
    return q, pairs


def _vertex_exposed(q: np.ndarray, E: np.ndarray, R: float, tol: float) -> bool:
    """True if some neighbourhood wedge of ``q`` lies outside every disk."""
    rel = E - q
    d = np.hypot(rel[:, 0], rel[:, 1])
    if np.any(d < R - tol):
        return False
    on = np.abs(d - R) <= tol
    if not np.any(on):
        return True
    ang = np.arctan2(rel[on, 1], rel[on, 0])
    # open half planes; shrink so that exactly opposite tangencies leave a gap
    cover = AngularArcSet.centered(ang, np.full(len(ang), 0.5 * math.pi - 1e-9))
    return bool(cover.gaps(ANGLE_TOL))


def disk_in_union(center, r: float, centers, R: float, tol: float = DEFAULT_TOL) -> bool:
    """Exact test of ``B(r, center) <= union of B(R + tol, e)`` over ``centers``.

    The probe circle must be covered by arcs, and no exposed vertex of the
    union may sit strictly inside the probe disk (that would mean an
    uncovered pocket not reaching the probe circle).
    """
    c = np.asarray(center, dtype=float)
    E = as_points(centers) if len(centers) else np.empty((0, 2))
    Rt = R + tol
    if len(E) == 0:
        return False
    rel = E - c
    d = np.hypot(rel[:, 0], rel[:, 1])
    if np.any(d + r <= Rt):
        return True
    near = d < r + Rt
    E, rel, d = E[near], rel[near], d[near]
    if len(E) == 0 or r <= 0.0:
        return False
    pos = d > 0.0
    kappa = (r * r + d[pos] ** 2 - Rt * Rt) / (2.0 * r * d[pos])
    ok = kappa < 1.0
    half = np.arccos(np.clip(kappa[ok], -1.0, 1.0))
    ang = np.arctan2(rel[pos][ok, 1], rel[pos][ok, 0])
    if AngularArcSet.centered(ang, half).gaps(ANGLE_TOL):
        return False
    q, _ = _pair_vertices(E, Rt)
    if len(q) == 0:
        return True
    inner = np.hypot(q[:, 0] - c[0], q[:, 1] - c[1]) < r - tol
    vtol = 1e-10 * max(Rt, 1.0)
    for v in q[inner]:
        if _vertex_exposed(v, E, Rt, vtol):
            return False
    return True


def erosion_contains(C, p, tol: float = DEFAULT_TOL) -> bool:
    """Whether the unit disk about ``p`` lies in the union of the cluster's unit disks."""
    return disk_in_union(p, 1.0, _centers_of(C), 1.0, tol)


# ---------------------------------------------------------------- erosion area


class UnionBoundary:
    """Boundary of a union of congruent disks, as exposed arcs and their end vertices."""

    def __init__(self, centers, r: float = 1.0):
        self.centers = as_points(centers)
        self.r = float(r)
        _validate_for_arcs(self.centers)
        self.arcs = exposed_arcs(self.centers, self.r)
        verts = []
        for i, start, width in self.arcs:
            if width >= TAU - ANGLE_TOL:
                continue
            c = self.centers[i]
            for a in (start, start + width):
                verts.append(c + self.r * np.array([math.cos(a), math.sin(a)]))
        self.vertices = np.array(verts).reshape(-1, 2)

    def signed_distance(self, P) -> np.ndarray:
        """Distance to the union boundary, positive inside the union (1-Lipschitz)."""
        P = np.atleast_2d(np.asarray(P, dtype=float))
        best = np.full(len(P), np.inf)
        if len(self.vertices):
            for v in self.vertices:
                np.minimum(best, np.hypot(P[:, 0] - v[0], P[:, 1] - v[1]), out=best)
        for i, start, width in self.arcs:
            rel = P - self.centers[i]
            d = np.hypot(rel[:, 0], rel[:, 1])
            theta = np.arctan2(rel[:, 1], rel[:, 0])
            span = ((theta - start) % TAU) <= width
            span |= d == 0.0
            cand = np.where(span, np.abs(d - self.r), np.inf)
            np.minimum(best, cand, out=best)
        inside = np.zeros(len(P), dtype=bool)
        for c in self.centers:
            inside |= np.hypot(P[:, 0] - c[0], P[:, 1] - c[1]) <= self.r
        return np.where(inside, best, -best)


def erosion_area(C, h: float | None = None, rel_tol: float = 1e-3, h_min: float = 1e-5) -> AreaBracket:
    """Certified bracket on the area of the inner parallel domain of radius 1.

    Cells are classified with the signed distance ``s`` to the union boundary,
    which is 1-Lipschitz: a cell of circumradius ``rho`` is wholly inside the
    erosion when ``s(center) - rho >= 1`` and wholly outside when
    ``s(center) + rho < 1``. Undecided cells are split in four.
    """
    centers = _centers_of(C)
    boundary = UnionBoundary(centers, 1.0)
    lo = centers.min(axis=0) - 1.0
    hi = centers.max(axis=0) + 1.0
    side = float(max(hi - lo))
    if h is None:
        h = side / 64.0
    n = max(1, int(math.ceil(side / h)))
    ix, iy = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    cells = lo + h * np.stack([ix.ravel(), iy.ravel()], axis=1)
    lower = 0.0
    while True:
        rho = h / math.sqrt(2.0)
        s = boundary.signed_distance(cells + 0.5 * h)
        inside = s - rho >= 1.0
        outside = s + rho < 1.0
        lower += inside.sum() * h * h
        todo = cells[~inside & ~outside]
        upper = lower + len(todo) * h * h
        if upper - lower <= rel_tol * max(upper, 0.01):
            return AreaBracket(lower, upper, "certified-grid", h)
        if h < h_min:
            return AreaBracket(lower, upper, "certified-grid", h, inconclusive=True)
        h *= 0.5
        offsets = np.array([[0.0, 0.0], [h, 0.0], [0.0, h], [h, h]])
        cells = (todo[:, None, :] + offsets[None, :, :]).reshape(-1, 2)


# ---------------------------------------------------------------- Monte Carlo


def mc_area_oracle(
    predicate: Callable[[np.ndarray], np.ndarray],
    box,
    samples: int,
    seed: int,
    batch: int = 1 << 20,
) -> AreaBracket:
    """Monte-Carlo area of ``{x in box : predicate(x)}`` with a 3-sigma bracket.

    ``predicate`` is vectorized: it maps an ``(n, 2)`` array to ``n`` booleans.
    ``box`` is ``((xmin, ymin), (xmax, ymax))``. Batches draw from child seeds
    spawned by counter, so the result does not depend on batch scheduling.
    """
    if samples < 10_000:
        raise ValueError("mc_area_oracle needs at least 1e4 samples")
    (x0, y0), (x1, y1) = box
    if not (x1 > x0 and y1 > y0):
        raise ValueError("degenerate sampling box")
    nb = -(-samples // batch)
    children = np.random.SeedSequence(seed).spawn(nb)
    hits = 0
    for k, child in enumerate(children):
        m = min(batch, samples - k * batch)
        rng = np.random.default_rng(child)
        pts = rng.random((m, 2)) * [x1 - x0, y1 - y0] + [x0, y0]
        hits += int(np.count_nonzero(predicate(pts)))
    box_area = (x1 - x0) * (y1 - y0)
    p = hits / samples
    est = box_area * p
    sigma = box_area * math.sqrt(p * (1.0 - p) / samples)
    return AreaBracket(est - 3.0 * sigma, est + 3.0 * sigma, "monte-carlo", float(samples))


def union_predicate(centers, r: float) -> Callable[[np.ndarray], np.ndarray]:
    C = as_points(centers)

    def pred(P):
        hit = np.zeros(len(P), dtype=bool)
        for c in C:
            hit |= (P[:, 0] - c[0]) ** 2 + (P[:, 1] - c[1]) ** 2 <= r * r
        return hit

    return pred
