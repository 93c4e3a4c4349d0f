"""Saturation of packings and reduction of coverings.

A packing is n-saturated when no n-1 of its disks can be swapped for n
congruent disks; a covering is n-reduced when no n of its disks can be
swapped for n-1 without opening a hole. Both searches are sound but not
complete: a ``violated`` verdict carries a witness that :func:`verify_witness`
re-checks from scratch, while a failed search only reports
``no-violation-found`` at its resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .geom import DEFAULT_TOL, Disk, Point, smallest_enclosing_circle
from .periodic import CopyId, PeriodicArrangement, covering_check, delaunay_holes, is_packing
from .union import disk_in_union

COVER_INFLATION = 1e-6
_DIRECTIONS = np.array([(math.cos(a), math.sin(a)) for a in np.arange(8) * math.pi / 4])


@dataclass(frozen=True)
class CheckConfig:
    n: int = 1
    window_radius: float | None = None  # absolute; default (2n+1) * diameter
    placement_grid: float = 0.05  # in units of the disk radius
    refinement_iters: int = 40
    seed: int = 0
    tol: float = DEFAULT_TOL
    multistarts: int = 3

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.placement_grid <= 0:
            raise ValueError("placement_grid must be positive")

    def window(self, radius: float) -> float:
        if self.window_radius is not None:
            return self.window_radius
        return (2 * self.n + 1) * 2.0 * radius


class ReplacementWitness(NamedTuple):
    removed: tuple[CopyId, ...]
    added: tuple[Point, ...]
    margin: float


class Verdict(NamedTuple):
    status: str  # violated | certified-holds | no-violation-found
    witness: ReplacementWitness | None
    resolution: float
    radius: float  # disk radius the verdict refers to
    subsets: int = 0


# ------------------------------------------------------------------ placement


def _slack(X: np.ndarray, fixed: np.ndarray, tree, r: float, region: Disk) -> float:
    """Max-min slack of candidate centers: pair gaps, fixed gaps, region fit."""
    (cx, cy), R = region
    s = float(np.min(R - r - np.hypot(X[:, 0] - cx, X[:, 1] - cy)))
    if len(X) > 1:
        d = np.hypot(*(X[:, None, :] - X[None, :, :]).transpose(2, 0, 1))
        s = min(s, float(d[np.triu_indices(len(X), 1)].min()) - 2.0 * r)
    if tree is not None:
        s = min(s, float(tree.query(X)[0].min()) - 2.0 * r)
    return s


def _pattern_search(X, fixed, tree, r, region, step, iters):
    X = X.copy()
    best = _slack(X, fixed, tree, r, region)
    for _ in range(iters):
        improved = False
        for i in range(len(X)):
            for u in _DIRECTIONS:
                Y = X.copy()
                Y[i] += step * u
                s = _slack(Y, fixed, tree, r, region)
                if s > best:
                    X, best, improved = Y, s, True
        if not improved:
            step *= 0.5
            if step < 1e-7 * r:
                break
    return X, best


def free_placement_search(
    fixed_centers,
    region: Disk,
    k: int,
    radius: float,
    grid: float | None = None,
    iters: int = 40,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    axis=(1.0, 0.0),
    multistarts: int = 3,
) -> tuple[list[Point], float] | None:
    """Find ``k`` disks of ``radius`` inside ``region`` avoiding the fixed disks.

    Returns the centers and their slack (smallest of pair gaps, gaps to fixed
    disks and room left in the region) when the slack exceeds ``10 tol``.
    The seed grid has step ``grid`` and is aligned with ``axis`` through the
    region center.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    r = float(radius)
    grid = 0.05 * r if grid is None else float(grid)
    (cx, cy), R = region
    c = np.array([cx, cy], dtype=float)
    reach = R - r
    if reach < 0:
        return None
    fixed = np.asarray(fixed_centers, dtype=float).reshape(-1, 2)
    tree = cKDTree(fixed) if len(fixed) else None
    ux, uy = np.asarray(axis, dtype=float) / math.hypot(*axis)
    m = int(math.floor(reach / grid))
    t = np.arange(-m, m + 1) * grid
    a, b = np.meshgrid(t, t, indexing="ij")
    a, b = a.ravel(), b.ravel()
    P = c + np.stack([a * ux - b * uy, a * uy + b * ux], axis=1)
    P = P[np.hypot(a, b) <= reach + 1e-12]
    clear = tree.query(P)[0] - 2.0 * r if tree is not None else np.full(len(P), np.inf)
    room = reach - np.hypot(P[:, 0] - cx, P[:, 1] - cy)
    score = np.minimum(clear, room)
    pool = score > -grid
    P, score = P[pool], score[pool]
    if len(P) < 1:
        return None
    order = np.lexsort((P[:, 1], P[:, 0], -score))
    P, score = P[order], score[order]
    rng = np.random.default_rng(seed)
    starts = []
    if k == 2 and len(P) <= 3000:
        # exhaustive best pair on the grid
        d = np.hypot(*(P[:, None, :] - P[None, :, :]).transpose(2, 0, 1)) - 2.0 * r
        val = np.minimum(np.minimum(d, score[:, None]), score[None, :])
        np.fill_diagonal(val, -np.inf)
        val = np.triu(val) + np.tril(np.full_like(val, -np.inf))
        # a feasible pair lies within step/sqrt2 of pool points, so its grid value is >= -sqrt2 step
        if val.max() < -math.sqrt(2.0) * grid:
            return None
        top = np.argpartition(-val, multistarts - 1, axis=None)[:multistarts]
        top = top[np.lexsort((top, -val.ravel()[top]))]
        for f in top:
            i, j = np.unravel_index(f, val.shape)
            starts.append(P[[i, j]])
    else:
        firsts = [0] + list(rng.choice(len(P), size=min(multistarts - 1, len(P)), replace=False))
        for f0 in firsts[:multistarts]:
            chosen = [P[f0]]
            s = np.minimum(score, np.hypot(*(P - P[f0]).T) - 2.0 * r)
            while len(chosen) < k:
                j = int(np.argmax(s))
                chosen.append(P[j])
                s = np.minimum(s, np.hypot(*(P - P[j]).T) - 2.0 * r)
            starts.append(np.array(chosen))
    best_X, best = None, -np.inf
    for X0 in starts:
        X, s = _pattern_search(X0, fixed, tree, r, region, 0.5 * grid, iters)
        if s > best:
            best_X, best = X, s
    if best_X is None or best <= 10.0 * tol:
        return None
    return [Point(float(x), float(y)) for x, y in best_X], float(best)


# ------------------------------------------------------------------ subsets


def _connected_subsets(A: PeriodicArrangement, anchor: int, size: int, link: float, window: float):
    """Sets of ``size`` copies whose smallest id is ``(anchor, 0, 0)``.

    Members lie within ``window`` of the anchor and are connected under the
    relation "center distance <= link". Yields sorted tuples of ids.
    """
    a = A.motif[anchor]
    ids, cs = A.copies_near(a, window)
    pos = {cid: c for cid, c in zip(ids, cs)}
    root = CopyId(anchor, 0, 0)
    cand = sorted(cid for cid in ids if cid > root)
    if size == 1:
        yield (root,)
        return
    seen = set()
    frontier = {(root,)}
    for _ in range(size - 1):
        nxt = set()
        for S in frontier:
            for cid in cand:
                if cid in S:
                    continue
                p = pos[cid]
                if any(math.hypot(*(p - pos[s])) <= link for s in S):
                    T = tuple(sorted(S + (cid,)))
                    if T not in seen:
                        seen.add(T)
                        nxt.add(T)
        frontier = nxt
    yield from sorted(frontier)


def _others_near(A: PeriodicArrangement, point, radius: float, removed) -> np.ndarray:
    ids, cs = A.copies_near(point, radius)
    gone = set(removed)
    keep = [c for cid, c in zip(ids, cs) if cid not in gone]
    return np.array(keep).reshape(-1, 2)


# ------------------------------------------------------------------ saturation


def check_saturation(A: PeriodicArrangement, cfg: CheckConfig | None = None) -> Verdict:
    """Search for n-1 disks that can be swapped for n disks."""
    cfg = cfg or CheckConfig()
    r = A.radius
    if is_packing(A, cfg.tol).status != "certified-yes":
        raise ValueError("input is not a certified packing")
    step = cfg.placement_grid * r
    cov = covering_check(A, 2.0 * r, tol=cfg.tol)
    if cov.status == "certified-no":
        holes, depth = delaunay_holes(A)
        p = holes[0] if depth[0] - 2.0 * r > cov.margin else np.asarray(cov.witness)
        margin = float(A.nearest_distance(p)[0]) - 2.0 * r
        w = ReplacementWitness((), (Point(float(p[0]), float(p[1])),), margin)
        return Verdict("violated", w, cov.resolution, r)
    if cfg.n == 1:
        if cov.status == "certified-yes":
            return Verdict("certified-holds", None, cov.resolution, r)
        return Verdict("no-violation-found", None, cov.resolution, r)

    window = cfg.window(r)
    axis = A.lattice.reduced.basis[0]
    count = 0
    for s in range(1, cfg.n):
        link = 2.0 * r * (s + 2)
        for anchor in range(len(A.motif)):
            for S in _connected_subsets(A, anchor, s, link, window):
                count += 1
                rem = np.array([A.center(cid) for cid in S])
                enc = smallest_enclosing_circle(rem)
                region = Disk(enc.center, enc.radius + 3.0 * r)
                fixed = _others_near(A, enc.center, region.radius + 2.0 * r, S)
                found = free_placement_search(
                    fixed, region, s + 1, r, step, cfg.refinement_iters, cfg.seed, cfg.tol,
                    axis=axis, multistarts=cfg.multistarts)
                if found is not None:
                    pts, _ = found
                    margin = _saturation_margin(A, S, pts)
                    if margin > 10.0 * cfg.tol:
                        return Verdict("violated", ReplacementWitness(S, tuple(pts), margin), step, r, count)
    return Verdict("no-violation-found", None, step, r, count)


def _saturation_margin(A: PeriodicArrangement, removed, added) -> float:
    r = A.radius
    X = np.asarray(added, dtype=float).reshape(-1, 2)
    m = math.inf
    if len(X) > 1:
        d = np.hypot(*(X[:, None, :] - X[None, :, :]).transpose(2, 0, 1))
        m = float(d[np.triu_indices(len(X), 1)].min()) - 2.0 * r
    for p in X:
        others = _others_near(A, p, 2.0 * r + 1.0 * r, removed)
        if len(others):
            m = min(m, float(np.hypot(*(others - p).T).min()) - 2.0 * r)
    return m


# ------------------------------------------------------------------ reduction


def _uncovered_samples(A, removed_centers, others, r_work, step, tol):
    pts = []
    for c in removed_centers:
        t = np.arange(-r_work, r_work + 0.5 * step, step)
        gx, gy = np.meshgrid(t, t, indexing="ij")
        P = c + np.stack([gx.ravel(), gy.ravel()], axis=1)
        P = P[np.hypot(P[:, 0] - c[0], P[:, 1] - c[1]) <= r_work]
        pts.append(P)
    P = np.concatenate(pts)
    if len(others):
        P = P[cKDTree(others).query(P)[0] > r_work + tol]
    return P


def _cover_by(U: np.ndarray, k: int, seed: int, rounds: int = 20) -> list[Disk]:
    """Cover a point cloud with k circles: farthest-point groups, enclosing circles, reassignment."""
    if k == 1:
        return [smallest_enclosing_circle(U, seed)]
    heads = [0]
    d = np.hypot(*(U - U[0]).T)
    for _ in range(k - 1):
        j = int(np.argmax(d))
        heads.append(j)
        d = np.minimum(d, np.hypot(*(U - U[j]).T))
    centers = U[heads]
    disks = []
    for _ in range(rounds):
        lab = np.argmin(np.hypot(*(U[:, None, :] - centers[None, :, :]).transpose(2, 0, 1)), axis=1)
        disks = [smallest_enclosing_circle(U[lab == g], seed) for g in range(k) if np.any(lab == g)]
        new = np.array([dk.center for dk in disks])
        if len(new) == len(centers) and np.allclose(new, centers):
            break
        centers = new
    return disks


def check_reduction(A: PeriodicArrangement, cfg: CheckConfig | None = None) -> Verdict:
    """Search for n disks that can be swapped for n-1 while the covering survives.

    Works at the inflated radius ``r (1 + 1e-6)`` where tangency-critical
    coverings can be certified; the verdict records that radius.
    """
    cfg = cfg or CheckConfig()
    r = A.radius
    r_work = r * (1.0 + COVER_INFLATION)
    if covering_check(A, r_work, tol=cfg.tol).status != "certified-yes":
        raise ValueError("input is not certifiably a covering at the inflated radius")
    step = cfg.placement_grid * r
    window = cfg.window(r)
    count = 0
    for s in range(1, cfg.n + 1):
        link = 2.0 * r * (s + 1)
        for anchor in range(len(A.motif)):
            for S in _connected_subsets(A, anchor, s, link, window):
                count += 1
                rem = np.array([A.center(cid) for cid in S])
                enc = smallest_enclosing_circle(rem)
                others = _others_near(A, enc.center, enc.radius + 2.0 * r_work + step, S)
                U = _uncovered_samples(A, rem, others, r_work, step, cfg.tol)
                if len(U) == 0:
                    added = [Point(float(x), float(y)) for x, y in rem[: s - 1]]
                elif s == 1:
                    continue
                else:
                    disks = _cover_by(U, s - 1, cfg.seed)
                    if len(disks) != s - 1 or max(dk.radius for dk in disks) > r_work:
                        continue
                    added = [Point(float(dk.center[0]), float(dk.center[1])) for dk in disks]
                w = ReplacementWitness(S, tuple(added), r_work - r)
                if verify_witness(A, w, "reduction", cfg.tol):
                    return Verdict("violated", w, step, r_work, count)
    return Verdict("no-violation-found", None, step, r_work, count)


# ------------------------------------------------------------------ verification


def verify_witness(A: PeriodicArrangement, w: ReplacementWitness, mode: str, tol: float = DEFAULT_TOL) -> bool:
    """Re-check a replacement from the arrangement data alone.

    Saturation: added disks are pairwise disjoint and clear of every kept
    disk, with slack at least ``margin - tol``. Reduction: every removed disk,
    shrunk by ``margin``, lies in the union of the kept and added disks at
    the working radius ``radius (1 + 1e-6)``.
    """
    r = A.radius
    removed = tuple(CopyId(*map(int, cid)) for cid in w.removed)
    if len(set(removed)) != len(removed):
        raise ValueError("witness removes the same disk twice")
    rem = np.array([A.center(cid) for cid in removed]).reshape(-1, 2)
    added = np.asarray(w.added, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(added)):
        raise ValueError("witness centers must be finite")
    if not w.margin > 0:
        return False
    if mode == "saturation":
        if len(added) != len(removed) + 1:
            return False
        got = _saturation_margin(A, removed, added)
        return got >= 0.0 and got >= w.margin - tol
    if mode == "reduction":
        if len(added) != len(removed) - 1:
            return False
        r_work = r * (1.0 + COVER_INFLATION)
        probe = r_work - w.margin
        if probe <= 0:
            return False
        for c in rem:
            E = _others_near(A, c, probe + r_work, removed)
            if len(added):
                near = added[np.hypot(*(added - c).T) < probe + r_work]
                E = np.concatenate([E, near])
            if not disk_in_union(c, probe, E, r_work, tol):
                return False
        return True
    raise ValueError(f"unknown mode {mode!r}")
