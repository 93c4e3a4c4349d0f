"""Search over periodic arrangements: greedy saturation, replacement steps and
simulated annealing under saturation or reduction constraints.

Every accepted annealing state satisfies the constraint as judged by the
checker at a coarse resolution; the returned best state is re-validated at
full resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .checker import COVER_INFLATION, CheckConfig, Verdict, check_reduction, check_saturation
from .geom import Lattice, shortest_vector
from .periodic import PeriodicArrangement, covering_check, delaunay_holes, is_packing

FIT_SLACK = 5e-10
MOVES = ("insert", "remove", "jiggle", "replace", "deform")
OBJECTIVES = ("min-density-packing", "min-count-covering")


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    iterations: int = 200
    move_weights: dict = field(default_factory=lambda: {
        "insert": 0.5, "remove": 2.0, "jiggle": 4.0, "replace": 0.2, "deform": 1.0})
    cooling: float = 0.99
    constraint_n: int = 1
    resolution: float = 0.05  # placement grid of in-loop checks, in radii
    final_resolution: float = 0.02
    temperature: float = 0.01
    jiggle: float = 0.25  # step scale, in radii
    deform: float = 0.03

    def __post_init__(self):
        w = self.move_weights
        unknown = set(w) - set(MOVES)
        if unknown:
            raise ValueError(f"unknown moves {sorted(unknown)}")
        if any(v < 0 for v in w.values()) or not any(v > 0 for v in w.values()):
            raise ValueError("move weights must be nonnegative with at least one positive")
        if not 0.0 < self.cooling < 1.0:
            raise ValueError("cooling must lie in (0, 1)")
        if self.constraint_n < 1:
            raise ValueError("constraint_n must be positive")


class AuditEntry(NamedTuple):
    iteration: int
    move: str
    count: int
    density: float


# ------------------------------------------------------------------ greedy


def greedy_saturate(L, radius: float = 1.0, seed: int = 0) -> PeriodicArrangement:
    """Fill a torus by repeatedly placing a disk at the deepest hole.

    The first disk goes at the origin for seed 0 and at a seeded random
    point otherwise. Stops when no hole can take a disk, i.e. when the
    packing is 1-saturated.
    """
    L = L if isinstance(L, Lattice) else Lattice(L)
    if shortest_vector(L) < 2.0 * radius - 1e-12:
        raise ValueError("lattice too small for a single disk of this radius")
    rng = np.random.default_rng(seed)
    first = np.zeros(2) if seed == 0 else L.to_cart(rng.random(2))
    A = PeriodicArrangement(L, [first], radius)
    while True:
        holes, depth = delaunay_holes(A)
        if len(depth) == 0 or depth[0] < 2.0 * radius - FIT_SLACK:
            return A
        A = A.with_motif(np.vstack([A.motif, holes[0]]))


# ------------------------------------------------------------------ replacement step


def apply_witness(A: PeriodicArrangement, w) -> PeriodicArrangement | None:
    """Apply a replacement periodically; None if it does not stay a packing."""
    idx = [cid[0] for cid in w.removed]
    if len(set(idx)) != len(idx):
        return None
    keep = [i for i in range(len(A.motif)) if i not in set(idx)]
    motif = np.vstack([A.motif[keep].reshape(-1, 2), np.asarray(w.added, dtype=float).reshape(-1, 2)])
    try:
        B = A.with_motif(motif)
    except ValueError:
        return None
    return B if is_packing(B).status == "certified-yes" else None


def replace_k_for_k_plus_1(A: PeriodicArrangement, k: int, cfg: CheckConfig | None = None) -> PeriodicArrangement | None:
    """Swap k disks for k+1 when the checker finds room; None otherwise."""
    base = cfg or CheckConfig()
    cfg = CheckConfig(k + 1, base.window_radius, base.placement_grid, base.refinement_iters,
                      base.seed, base.tol, base.multistarts)
    v = check_saturation(A, cfg)
    if v.status != "violated":
        return None
    return apply_witness(A, v.witness)


# ------------------------------------------------------------------ repairs


def _repair_packing(A: PeriodicArrangement, rounds: int = 30) -> PeriodicArrangement | None:
    """Push overlapping disks apart; None if overlaps persist."""
    r = A.radius
    for _ in range(rounds):
        if is_packing(A).status == "certified-yes":
            return A
        shift = np.zeros_like(A.motif)
        for i, p in enumerate(A.motif):
            ids, cs = A.copies_near(p, 2.0 * r)
            for cid, c in zip(ids, cs):
                if cid == (i, 0, 0):
                    continue
                v = p - c
                d = math.hypot(*v)
                if d < 1e-12:
                    return None
                if cid[0] == i:
                    return None  # a disk overlaps its own translate
                shift[i] += (0.5 * (2.0 * r - d) + 1e-9 * r) * v / d
        try:
            A = A.with_motif(A.motif + shift)
        except ValueError:
            return None
    return A if is_packing(A).status == "certified-yes" else None


def _repair_holes(A: PeriodicArrangement, limit: float, packing: bool, rounds: int = 40):
    """Pull disks toward holes deeper than ``limit``; None if that fails."""
    r = A.radius
    for _ in range(rounds):
        holes, depth = delaunay_holes(A)
        if depth[0] < limit:
            return A
        h = holes[0]
        ids, cs = A.copies_near(h, depth[0] + 1e-9 * r)
        shift = np.zeros_like(A.motif)
        step = min(depth[0] - limit + 0.02 * r, 0.25 * r)
        for cid, c in zip(ids, cs):
            v = h - c
            shift[cid[0]] += step * v / max(math.hypot(*v), 1e-12)
        try:
            A = A.with_motif(A.motif + shift)
        except ValueError:
            return None
        if packing:
            A = _repair_packing(A)
            if A is None:
                return None
    return None


# ------------------------------------------------------------------ annealing


class _Problem:
    def __init__(self, objective: str, cfg: SearchConfig, radius: float):
        self.objective = objective
        self.cfg = cfg
        self.packing = objective == "min-density-packing"
        self.r = radius
        self.hole_limit = 2.0 * radius - FIT_SLACK if self.packing else radius * (1 + COVER_INFLATION) - 1e-7

    def check_cfg(self, resolution: float) -> CheckConfig:
        fine = resolution <= self.cfg.final_resolution
        return CheckConfig(n=self.cfg.constraint_n, placement_grid=resolution, seed=self.cfg.seed,
                           refinement_iters=40 if fine else 12, multistarts=3 if fine else 1)

    def verdict(self, A: PeriodicArrangement, resolution: float) -> Verdict | None:
        """Constraint verdict, or None when the state is not admissible at all."""
        if self.packing:
            if is_packing(A).status != "certified-yes":
                return None
            return check_saturation(A, self.check_cfg(resolution))
        if covering_check(A, A.radius * (1 + COVER_INFLATION)).status != "certified-yes":
            return None
        return check_reduction(A, self.check_cfg(resolution))

    def feasible(self, A, resolution) -> bool:
        try:
            v = self.verdict(A, resolution)
        except ValueError:
            return False
        return v is not None and v.status != "violated"

    def fix(self, A):
        if A is None:
            return None
        if self.packing:
            A = _repair_packing(A)
            if A is None:
                return None
        return _repair_holes(A, self.hole_limit, self.packing)


def _deform(A: PeriodicArrangement, rng, size: float) -> PeriodicArrangement | None:
    S = rng.normal(scale=size, size=(2, 2))
    S[1, 1] = -S[0, 0]
    M = np.eye(2) + S
    det = np.linalg.det(M)
    if det <= 0:
        return None
    M /= math.sqrt(det)
    B = A.lattice.basis @ M
    L = Lattice(B)
    if shortest_vector(L) < 2.0 * A.radius * 0.9:
        return None
    frac = A.lattice.to_frac(A.motif)
    return PeriodicArrangement(L, frac @ B, A.radius, A.allow_coincident)


def _propose(move: str, A: PeriodicArrangement, prob: _Problem, rng) -> PeriodicArrangement | None:
    cfg = prob.cfg
    r = A.radius
    m = len(A.motif)
    try:
        if move == "jiggle":
            i = int(rng.integers(m))
            motif = A.motif.copy()
            motif[i] += rng.normal(scale=cfg.jiggle * r, size=2)
            return prob.fix(A.with_motif(motif))
        if move == "remove":
            if m < 2:
                return None
            i = int(rng.integers(m))
            return prob.fix(A.with_motif(np.delete(A.motif, i, axis=0)))
        if move == "insert":
            holes, _ = delaunay_holes(A)
            p = holes[int(rng.integers(min(len(holes), 3)))]
            return prob.fix(A.with_motif(np.vstack([A.motif, p])))
        if move == "deform":
            return prob.fix(_deform(A, rng, cfg.deform))
        if move == "replace":
            if not prob.packing:
                return None
            return replace_k_for_k_plus_1(A, 1, prob.check_cfg(cfg.resolution))
    except ValueError:
        return None
    raise ValueError(f"unknown move {move!r}")


def optimize(A0: PeriodicArrangement, objective: str = "min-density-packing",
             cfg: SearchConfig | None = None) -> tuple[PeriodicArrangement, list[AuditEntry]]:
    """Simulated annealing on density over admissible arrangements.

    Returns the least dense state that passes the full-resolution check and
    the list of accepted moves.
    """
    cfg = cfg or SearchConfig()
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    prob = _Problem(objective, cfg, A0.radius)
    if not prob.feasible(A0, cfg.resolution):
        raise ValueError("initial arrangement does not satisfy the constraint")
    rng = np.random.default_rng(cfg.seed)
    names = [k for k in MOVES if cfg.move_weights.get(k, 0.0) > 0]
    w = np.array([cfg.move_weights[k] for k in names], dtype=float)
    w /= w.sum()
    A, E = A0, A0.density()
    visited = [(E, 0, A0)]
    audit: list[AuditEntry] = []
    T = cfg.temperature
    for it in range(1, cfg.iterations + 1):
        move = names[int(rng.choice(len(names), p=w))]
        B = _propose(move, A, prob, rng)
        if B is not None and prob.feasible(B, cfg.resolution):
            dE = B.density() - E
            if dE <= 0 or rng.random() < math.exp(-dE / T):
                A, E = B, B.density()
                audit.append(AuditEntry(it, move, len(A.motif), E))
                visited.append((E, it, A))
        T *= cfg.cooling
    # least dense state that survives the fine check
    for _, _, S in sorted(visited, key=lambda t: (t[0], t[1])):
        if S is A0 or prob.feasible(S, cfg.final_resolution):
            return S, audit
    return A0, audit  # pragma: no cover - A0 is returned by the loop above
