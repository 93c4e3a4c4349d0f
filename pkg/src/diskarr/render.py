"""SVG drawings of arrangements and clusters."""

from __future__ import annotations

import math

import numpy as np

from .periodic import PeriodicArrangement
from .union import Cluster

PX_PER_UNIT = 50.0
FILL_OPACITY = 0.3


def centers_in_window(obj, window) -> tuple[np.ndarray, float]:
    """Disk centers inside the closed ``window`` and the disk radius."""
    x0, y0, x1, y1 = window
    if isinstance(obj, PeriodicArrangement):
        mid = ((x0 + x1) / 2.0, (y0 + y1) / 2.0)
        _, cs = obj.copies_near(mid, 0.5 * math.hypot(x1 - x0, y1 - y0) + 1e-9)
        r = obj.radius
    elif isinstance(obj, Cluster):
        cs, r = obj.centers, 1.0
    else:
        cs, r = np.asarray(obj["centers"]).reshape(-1, 2), obj["radius"]
    eps = 1e-9
    keep = (cs[:, 0] >= x0 - eps) & (cs[:, 0] <= x1 + eps) & (cs[:, 1] >= y0 - eps) & (cs[:, 1] <= y1 + eps)
    cs = cs[keep]
    order = np.lexsort((cs[:, 0], cs[:, 1]))
    return cs[order], r


def render_svg(obj, window) -> str:
    """SVG text for ``obj`` over ``window = (xmin, ymin, xmax, ymax)``.

    Disks are stroked circles filled at 30% opacity, the fundamental cell of
    a periodic arrangement is outlined, and everything is clipped to the
    window. Output depends only on the inputs.
    """
    x0, y0, x1, y1 = map(float, window)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("empty window")
    s = PX_PER_UNIT
    W, H = (x1 - x0) * s, (y1 - y0) * s

    def px(x, y):
        return (x - x0) * s, (y1 - y) * s

    def f(v):
        return f"{v:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{f(W)}" height="{f(H)}" viewBox="0 0 {f(W)} {f(H)}">',
        f'<defs><clipPath id="win"><rect x="0" y="0" width="{f(W)}" height="{f(H)}"/></clipPath></defs>',
        '<g clip-path="url(#win)">',
        f'<rect x="0" y="0" width="{f(W)}" height="{f(H)}" fill="white"/>',
    ]
    cs, r = centers_in_window(obj, (x0, y0, x1, y1))
    for x, y in cs:
        cx, cy = px(x, y)
        out.append(f'<circle cx="{f(cx)}" cy="{f(cy)}" r="{f(r * s)}" fill="steelblue" '
                   f'fill-opacity="{FILL_OPACITY}" stroke="black" stroke-width="1"/>')
    if isinstance(obj, PeriodicArrangement):
        b1, b2 = obj.lattice.basis
        corners = [np.zeros(2), b1, b1 + b2, b2]
        pts = " ".join(f"{f(a)},{f(b)}" for a, b in (px(*c) for c in corners))
        out.append(f'<polygon points="{pts}" fill="none" stroke="crimson" stroke-width="2"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
