"""Ready-made arrangements: hexagonal packing and covering, the dense lattice
covering with thin rows, the split hexagonal packing, and small clusters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import Lattice
from .periodic import PeriodicArrangement
from .union import Cluster

SQRT3 = math.sqrt(3.0)

CLUSTER_KINDS = ("pack2", "pack3", "pack7", "cover3", "cover4", "cover7")
# scales at which the covering clusters maximize their inner parallel domain
DEFAULT_COVER_SCALE = {"cover3": 1.0, "cover4": math.sqrt(2.0), "cover7": SQRT3}


def hex_packing() -> PeriodicArrangement:
    return PeriodicArrangement(Lattice([[2.0, 0.0], [1.0, SQRT3]]), [(0.0, 0.0)], 1.0)


def hex_covering(inflation: float = 0.0) -> PeriodicArrangement:
    if inflation < 0:
        raise ValueError("inflation must be nonnegative")
    return PeriodicArrangement(Lattice([[SQRT3, 0.0], [SQRT3 / 2.0, 1.5]]), [(0.0, 0.0)], 1.0 + inflation)


def sect5_basis(d: int, a: float) -> np.ndarray:
    """Generators ``a e_i`` (i < d) and ``(1 + sqrt(1 - a^2 (d-1)/4)) e_d + (a/2) sum e_i``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if not 0.0 < a < 2.0 / math.sqrt(d - 1):
        raise ValueError(f"a must lie in (0, 2/sqrt(d-1)) = (0, {2.0 / math.sqrt(d - 1):.6g})")
    B = np.zeros((d, d))
    for i in range(d - 1):
        B[i, i] = a
    B[d - 1, : d - 1] = a / 2.0
    B[d - 1, d - 1] = 1.0 + math.sqrt(1.0 - a * a * (d - 1) / 4.0)
    return B


def sect5_covering(d: int = 2, a: float = 0.5) -> PeriodicArrangement:
    """Unit balls on a lattice with rows of spacing ``a``; dense and 2-reduced.

    Only ``d = 2`` is checkable; higher ``d`` is produced for density and export.
    """
    return PeriodicArrangement(Lattice(sect5_basis(d, a)), [np.zeros(d)], 1.0)


@dataclass(frozen=True)
class SplitPacking:
    """Hexagonal packing cut between two rows, upper half rolled along the lower.

    Rows ``k <= 0`` are the lattice rows ``y = k sqrt3``. The upper half keeps
    contact with row 0: its first row sits at horizontal offset ``1 - slide``
    and height ``sqrt(4 - (1 - slide)^2)``.
    """

    slide: float = 0.0
    radius: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.slide < 1.0:
            raise ValueError("slide must lie in [0, 1)")

    @property
    def offset(self) -> float:
        return 1.0 - self.slide

    @property
    def gap(self) -> float:
        return math.sqrt(4.0 - self.offset ** 2)

    def row(self, k: int) -> tuple[float, float]:
        """``(height, horizontal phase)`` of row ``k``; centers are at ``phase + 2j``."""
        if k <= 0:
            return k * SQRT3, float(k % 2)
        return self.gap + (k - 1) * SQRT3, self.offset + (k - 1)

    def centers(self, window) -> np.ndarray:
        """Centers of the unit disks meeting ``window = (xmin, ymin, xmax, ymax)``."""
        x0, y0, x1, y1 = window
        if not (x1 > x0 and y1 > y0):
            raise ValueError("empty window")
        r = self.radius
        out = []
        k_lo = int(math.floor((y0 - r) / SQRT3)) - 1
        k_hi = int(math.ceil((y1 + r) / SQRT3)) + 1
        for k in range(k_lo, k_hi + 1):
            y, phase = self.row(k)
            if y < y0 - r or y > y1 + r:
                continue
            j0 = math.floor((x0 - r - phase) / 2.0)
            j1 = math.ceil((x1 + r - phase) / 2.0)
            for j in range(j0, j1 + 1):
                x = phase + 2.0 * j
                dx = max(x0 - x, 0.0, x - x1)
                dy = max(y0 - y, 0.0, y - y1)
                if math.hypot(dx, dy) < r:
                    out.append((x, y))
        return np.array(out).reshape(-1, 2)

    def boundary_pairs(self, window) -> np.ndarray:
        """Center distances between row 0 and row 1 inside ``window``, neighbours only."""
        P = self.centers(window)
        low = P[np.abs(P[:, 1]) < 1e-12]
        high = P[np.abs(P[:, 1] - self.gap) < 1e-12]
        if len(low) == 0 or len(high) == 0:
            return np.empty(0)
        d = np.hypot(*(low[:, None, :] - high[None, :, :]).transpose(2, 0, 1))
        return d[d < 2.0 * self.radius + 1.0]


def split_packing(slide: float) -> SplitPacking:
    return SplitPacking(slide)


def cluster(kind: str, scale: float | None = None) -> Cluster:
    """Named unit-disk clusters; packing kinds are tangent, covering kinds take a scale."""
    if kind not in CLUSTER_KINDS:
        raise ValueError(f"unknown cluster kind {kind!r}; expected one of {', '.join(CLUSTER_KINDS)}")
    if kind.startswith("pack"):
        if scale is not None and scale != 2.0:
            raise ValueError("packing clusters are tangent; scale is fixed at 2")
        s = 2.0
    else:
        s = DEFAULT_COVER_SCALE[kind] if scale is None else float(scale)
        if not s > 0:
            raise ValueError("scale must be positive")
    if kind == "pack2":
        pts = [(0.0, 0.0), (s, 0.0)]
    elif kind in ("pack3", "cover3"):
        pts = [(0.0, 0.0), (s, 0.0), (s / 2.0, s * SQRT3 / 2.0)]
    elif kind == "cover4":
        pts = [(0.0, 0.0), (s, 0.0), (s, s), (0.0, s)]
    else:
        h = s * SQRT3 / 2.0
        pts = [(0.0, 0.0), (s, 0.0), (s / 2.0, h), (-s / 2.0, h), (-s, 0.0), (-s / 2.0, -h), (s / 2.0, -h)]
    return Cluster(pts)
