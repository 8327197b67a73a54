"""Jitted implementations of the numeric hot paths.

Function-for-function mirror of the numpy module.  The integer kernels
(component labeling, disc fill) use the same predicates and tie-break
rules and must return bit-identical results; the integrator sums
sequentially, so it can drift from the vectorized version by ~1e-13.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def euler_integrate(dl: float, dr: float, wheel_base: float, theta0: float, n_slices: int):
    d = (dl + dr) / 2.0 / n_slices
    ddt = (dr - dl) / wheel_base / n_slices
    x = 0.0
    y = 0.0
    for k in range(n_slices):
        theta = theta0 + k * ddt
        x += d * math.cos(theta)
        y += d * math.sin(theta)
    return x, y, n_slices * ddt


@njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def largest_component(mask):
    """Two-pass union-find labeling over the pixel raster.

    Union by smallest pixel index, so each root is the component's first
    pixel in raster order; ties on area then resolve the same way as the
    run-based numpy version.
    """
    h, w = mask.shape
    n = h * w
    parent = np.empty(n, dtype=np.int64)
    for r in range(h):
        base = r * w
        for c in range(w):
            if mask[r, c] == 0:
                continue
            idx = base + c
            parent[idx] = idx
            if c > 0 and mask[r, c - 1] != 0:
                ra = _find(parent, idx)
                rb = _find(parent, idx - 1)
                if ra < rb:
                    parent[rb] = ra
                elif rb < ra:
                    parent[ra] = rb
            if r > 0 and mask[r - 1, c] != 0:
                ra = _find(parent, idx)
                rb = _find(parent, idx - w)
                if ra < rb:
                    parent[rb] = ra
                elif rb < ra:
                    parent[ra] = rb

    area = np.zeros(n, dtype=np.int64)
    min_r = np.full(n, h, dtype=np.int64)
    min_c = np.full(n, w, dtype=np.int64)
    max_r = np.full(n, -1, dtype=np.int64)
    max_c = np.full(n, -1, dtype=np.int64)
    for r in range(h):
        base = r * w
        for c in range(w):
            if mask[r, c] == 0:
                continue
            root = _find(parent, base + c)
            area[root] += 1
            if r < min_r[root]:
                min_r[root] = r
            if c < min_c[root]:
                min_c[root] = c
            if r > max_r[root]:
                max_r[root] = r
            if c > max_c[root]:
                max_c[root] = c

    best = -1
    for i in range(n):
        if area[i] > 0 and (best < 0 or area[i] > area[best]):
            best = i  # equal areas keep the earlier root
    if best < 0:
        return 0, -1, -1, -1, -1
    return area[best], min_r[best], min_c[best], max_r[best], max_c[best]


@njit(cache=True)
def fill_disc(img, cx: float, cy: float, radius: float, value: int) -> None:
    h, w = img.shape
    r0 = max(0, int(math.ceil(cy - radius)))
    r1 = min(h - 1, int(math.floor(cy + radius)))
    c0 = max(0, int(math.ceil(cx - radius)))
    c1 = min(w - 1, int(math.floor(cx + radius)))
    rr = radius * radius
    for r in range(r0, r1 + 1):
        dy = r - cy
        for c in range(c0, c1 + 1):
            dx = c - cx
            if dy * dy + dx * dx <= rr:
                img[r, c] = value
