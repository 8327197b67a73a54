"""Vectorized numpy implementations of the numeric hot paths.

These are the reference versions: always importable, no compilation
step.  The jitted module mirrors this file function for function and
must agree with it (exactly for the integer kernels, to ~1e-10 for the
float integrator, which sums in a different order).
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 65536


def euler_integrate(dl: float, dr: float, wheel_base: float, theta0: float, n_slices: int):
    """Integrate a wheel-travel pair as ``n_slices`` straight segments.

    ``dl``/``dr`` are total left/right wheel travel in meters.  Each
    slice advances by the mean travel at the heading held at the start
    of the slice (forward Euler).  Returns ``(dx, dy, dtheta)`` in the
    frame where the robot starts at the origin with heading ``theta0``.
    """
    d = (dl + dr) / 2.0 / n_slices
    ddt = (dr - dl) / wheel_base / n_slices
    x = 0.0
    y = 0.0
    k0 = 0
    while k0 < n_slices:
        k1 = min(n_slices, k0 + _CHUNK)
        theta = theta0 + np.arange(k0, k1, dtype=np.float64) * ddt
        x += d * float(np.sum(np.cos(theta)))
        y += d * float(np.sum(np.sin(theta)))
        k0 = k1
    return x, y, n_slices * ddt


def largest_component(mask: np.ndarray):
    """Largest 4-connected component of nonzero pixels.

    Returns ``(area, min_row, min_col, max_row, max_col)``; area 0 and
    bounds -1 when the mask is empty.  Ties on area go to the component
    whose first pixel in raster order comes earliest, so both backends
    pick the same one.
    """
    h, w = mask.shape
    binary = (mask != 0).astype(np.int8)

    # Decompose each row into runs of set pixels; union-find over runs.
    run_row: list[int] = []
    run_start: list[int] = []
    run_end: list[int] = []  # exclusive
    parent: list[int] = []
    prev: list[int] = []  # run indices in the previous row
    for r in range(h):
        edges = np.flatnonzero(np.diff(np.concatenate(([0], binary[r], [0]))))
        cur: list[int] = []
        for s, e in zip(edges[0::2], edges[1::2]):
            j = len(parent)
            run_row.append(r)
            run_start.append(int(s))
            run_end.append(int(e))
            parent.append(j)
            cur.append(j)
        # Merge with vertically adjacent runs; both lists are sorted by
        # start column, so a two-pointer sweep finds every overlap.
        pi = 0
        for j in cur:
            while pi < len(prev) and run_end[prev[pi]] <= run_start[j]:
                pi += 1
            k = pi
            while k < len(prev) and run_start[prev[k]] < run_end[j]:
                _union(parent, j, prev[k])
                k += 1
            if k > pi:
                pi = k - 1  # the last overlapping run may also touch the next run
        prev = cur

    if not parent:
        return 0, -1, -1, -1, -1

    stats: dict[int, list[int]] = {}
    for j in range(len(parent)):
        root = _find(parent, j)
        st = stats.get(root)
        length = run_end[j] - run_start[j]
        if st is None:
            stats[root] = [length, run_row[j], run_start[j], run_row[j], run_end[j] - 1]
        else:
            st[0] += length
            if run_row[j] < st[1]:
                st[1] = run_row[j]
            if run_start[j] < st[2]:
                st[2] = run_start[j]
            if run_row[j] > st[3]:
                st[3] = run_row[j]
            if run_end[j] - 1 > st[4]:
                st[4] = run_end[j] - 1
    best_root = -1
    best = None
    for root, st in stats.items():
        anchor = run_row[root] * w + run_start[root]
        key = (-st[0], anchor)
        if best is None or key < best:
            best = key
            best_root = root
    st = stats[best_root]
    return st[0], st[1], st[2], st[3], st[4]


def _find(parent: list[int], i: int) -> int:
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        parent[i], i = root, parent[i]
    return root


def _union(parent: list[int], a: int, b: int) -> None:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


def fill_disc(img: np.ndarray, cx: float, cy: float, radius: float, value: int) -> None:
    """Paint the disc (x-cx)^2 + (y-cy)^2 <= r^2 into ``img`` in place.

    ``cx`` is the column coordinate, ``cy`` the row coordinate; pixel
    centers sit at integer coordinates.  Pixels outside the image are
    ignored.
    """
    h, w = img.shape
    r0 = max(0, int(math.ceil(cy - radius)))
    r1 = min(h - 1, int(math.floor(cy + radius)))
    c0 = max(0, int(math.ceil(cx - radius)))
    c1 = min(w - 1, int(math.floor(cx + radius)))
    if r0 > r1 or c0 > c1:
        return
    dy = np.arange(r0, r1 + 1, dtype=np.float64) - cy
    dx = np.arange(c0, c1 + 1, dtype=np.float64) - cx
    inside = dy[:, None] * dy[:, None] + dx[None, :] * dx[None, :] <= radius * radius
    img[r0 : r1 + 1, c0 : c1 + 1][inside] = value
