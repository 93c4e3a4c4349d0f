"""Planar primitives: points, lattices, disks, angular arc sets, enclosing circles."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

TAU = 2.0 * math.pi
DEFAULT_TOL = 1e-9
ANGLE_TOL = 1e-12


class Point(NamedTuple):
    x: float
    y: float


class Disk(NamedTuple):
    center: Point
    radius: float


def as_points(points) -> np.ndarray:
    """Coerce a point or a sequence of points to a float array of shape (n, 2)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected points of shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class Lattice:
    """Translation lattice; rows of ``basis`` are the generators."""

    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] < 1:
            raise ValueError(f"basis must be a square matrix, got shape {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis entries must be finite")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        if self.determinant == 0.0 or abs(self.determinant) < 1e-300:
            raise ValueError("lattice basis is singular")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def determinant(self) -> float:
        if self.dim == 2:
            (a, b), (c, d) = self.basis
            return float(a * d - b * c)
        return float(np.linalg.det(self.basis))

    @property
    def area(self) -> float:
        return abs(self.determinant)

    @cached_property
    def reduced(self) -> Lattice:
        return lattice_reduce(self)

    def to_frac(self, points) -> np.ndarray:
        """Coordinates of ``points`` in the basis (row-vector convention)."""
        return np.linalg.solve(self.basis.T, np.asarray(points, dtype=float).T).T

    def to_cart(self, frac) -> np.ndarray:
        return np.asarray(frac, dtype=float) @ self.basis

    def __repr__(self):
        return f"Lattice({self.basis.tolist()!r})"


def lattice_reduce(L: Lattice) -> Lattice:
    """Lagrange (Gauss) reduction of a planar lattice basis.

    The result satisfies |b1| <= |b2| and |b1.b2| <= |b1|^2 / 2. An already
    reduced basis is returned bit-for-bit unchanged.
    """
    if L.dim != 2:
        raise ValueError("lattice_reduce is only defined for dim=2")
    b1 = L.basis[0].copy()
    b2 = L.basis[1].copy()
    if b1 @ b1 > b2 @ b2:
        b1, b2 = b2, b1
    for _ in range(10_000):
        n1 = b1 @ b1
        mu = round((b1 @ b2) / n1)
        if mu == 0:
            break
        step = b2 - mu * b1
        if step @ step >= b2 @ b2:
            break  # a rounding tie at |mu| = 1/2; no strict progress left
        b2 = step
        if b2 @ b2 < n1:
            b1, b2 = b2, b1
    else:  # pragma: no cover - reduction converges in O(log) steps
        raise RuntimeError("lattice reduction did not converge")
    if np.array_equal(b1, L.basis[0]) and np.array_equal(b2, L.basis[1]):
        return L
    return Lattice(np.array([b1, b2]))


def shortest_vector(L: Lattice) -> float:
    """Length of the shortest nonzero lattice vector (the girth of the translation lattice)."""
    b1 = L.reduced.basis[0]
    return float(math.hypot(b1[0], b1[1]))


def _relevant_offsets(L: Lattice) -> np.ndarray:
    """Lattice vectors with coefficients in {-1,0,1}^2 of the reduced basis."""
    R = L.reduced.basis
    ks = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)
    return ks @ R


def wrap_delta(L: Lattice, delta) -> np.ndarray:
    """Shortest representative of each difference vector modulo the lattice."""
    R = L.reduced
    d = np.atleast_2d(np.asarray(delta, dtype=float))
    frac = R.to_frac(d)
    d = d - np.round(frac) @ R.basis
    cand = d[:, None, :] + _relevant_offsets(L)[None, :, :]
    norms = np.einsum("ijk,ijk->ij", cand, cand)
    best = np.argmin(norms, axis=1)
    return cand[np.arange(len(d)), best]


def periodic_delta(L: Lattice, u, v) -> float:
    """Distance between ``u`` and ``v`` in the torus R^2 / L."""
    d = np.asarray(u, dtype=float) - np.asarray(v, dtype=float)
    w = wrap_delta(L, d)[0]
    return float(math.hypot(w[0], w[1]))


# ---------------------------------------------------------------- enclosing circle


def _circle_two(a, b) -> tuple[float, float, float]:
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    return cx, cy, math.hypot(a[0] - cx, a[1] - cy)


def _circle_three(a, b, c):
    ax, ay = a
    bx, by = b[0] - ax, b[1] - ay
    cx, cy = c[0] - ax, c[1] - ay
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        return None
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return ax + ux, ay + uy, math.hypot(ux, uy)


def _inside(c, p, slack=1e-12) -> bool:
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1.0 + slack) + slack


def _circle_with_boundary(pts, bound):
    """Smallest circle through ``bound`` (1 or 2 points) containing ``pts``."""
    if len(bound) == 1:
        c = (bound[0][0], bound[0][1], 0.0)
        for i, p in enumerate(pts):
            if not _inside(c, p):
                c = _circle_with_boundary(pts[:i], [bound[0], p])
        return c
    a, b = bound
    c = _circle_two(a, b)
    for i, p in enumerate(pts):
        if _inside(c, p):
            continue
        cand = _circle_three(a, b, p)
        if cand is None:
            # collinear: the farthest pair spans the circle
            pairs = [(a, b), (a, p), (b, p)]
            cand = max((_circle_two(*q) for q in pairs), key=lambda t: t[2])
        c = cand
    return c


def smallest_enclosing_circle(points: Iterable, seed: int = 0) -> Disk:
    """Minimal disk containing every point (Welzl's randomized incremental method)."""
    pts = [tuple(map(float, p)) for p in points]
    if not pts:
        raise ValueError("smallest_enclosing_circle of an empty set")
    random.Random(seed).shuffle(pts)
    c = None
    for i, p in enumerate(pts):
        if c is None or not _inside(c, p):
            c = _circle_with_boundary(pts[:i], [p])
    return Disk(Point(c[0], c[1]), c[2])


# ---------------------------------------------------------------- angular arcs


@dataclass(frozen=True)
class AngularArcSet:
    """Union of arcs ``(start, width)`` on the circle of directions."""

    arcs: tuple[tuple[float, float], ...] = ()

    @classmethod
    def from_arcs(cls, arcs: Iterable[Sequence[float]]) -> AngularArcSet:
        return cls(tuple((float(s), float(w)) for s, w in arcs)).normalized()

    @classmethod
    def centered(cls, centers, half_widths) -> AngularArcSet:
        """Arcs ``[c - h, c + h]``; a half width of at least pi gives the full circle."""
        arcs = []
        for c, h in zip(np.atleast_1d(centers), np.atleast_1d(half_widths)):
            if h <= 0.0:
                continue
            if h >= math.pi:
                return cls(((0.0, TAU),))
            arcs.append((c - h, 2.0 * h))
        return cls(tuple(arcs)).normalized()

    def normalized(self) -> AngularArcSet:
        pieces = []
        for start, width in self.arcs:
            if width <= 0.0:
                continue
            if width >= TAU:
                return AngularArcSet(((0.0, TAU),))
            s = start % TAU
            e = s + width
            if e > TAU:
                pieces.append((s, TAU))
                pieces.append((0.0, e - TAU))
            else:
                pieces.append((s, e))
        pieces.sort()
        merged: list[list[float]] = []
        for s, e in pieces:
            if merged and s <= merged[-1][1] + ANGLE_TOL:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        return AngularArcSet(tuple((s, e - s) for s, e in merged))

    def gaps(self, tol: float = ANGLE_TOL) -> list[tuple[float, float]]:
        """Uncovered arcs ``(start, width)`` wider than ``tol``, in normalized form."""
        arcs = self.normalized().arcs
        if not arcs:
            return [(0.0, TAU)]
        out = []
        for (s0, w0), (s1, _) in zip(arcs, arcs[1:]):
            if s1 - (s0 + w0) > tol:
                out.append((s0 + w0, s1 - s0 - w0))
        first_start = arcs[0][0]
        last_end = arcs[-1][0] + arcs[-1][1]
        wrap = TAU - last_end + first_start
        if wrap > tol:
            out.append((last_end % TAU, wrap))
        return out

    def contains(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float) % TAU
        hit = np.zeros(th.shape, dtype=bool)
        for s, w in self.normalized().arcs:
            hit |= (th >= s - ANGLE_TOL) & (th <= s + w + ANGLE_TOL)
        return hit


def arc_set_covers_full_circle(A: AngularArcSet, tol: float = ANGLE_TOL) -> bool:
    return not A.gaps(tol)
