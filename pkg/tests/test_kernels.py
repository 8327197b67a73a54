"""Both kernel backends must agree with each other and with brute force.

The numba and numpy implementations are imported directly so this file
exercises both regardless of which one the package selected at import.
"""

import math
import os
import random
import subprocess
import sys
from collections import deque

import numpy as np
import pytest

from curiosim.kernels import _numpy_impl as knp

try:
    from curiosim.kernels import _numba_impl as knb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    knb = None
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")


# -- oracle: breadth-first flood fill, no cleverness -----------------------

def _components_brute(mask: np.ndarray):
    h, w = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    comps = []
    for r0 in range(h):
        for c0 in range(w):
            if not mask[r0, c0] or seen[r0, c0]:
                continue
            queue = deque([(r0, c0)])
            seen[r0, c0] = True
            area = 0
            rmin = cmin = 1 << 30
            rmax = cmax = -1
            while queue:
                r, c = queue.popleft()
                area += 1
                rmin = min(rmin, r)
                rmax = max(rmax, r)
                cmin = min(cmin, c)
                cmax = max(cmax, c)
                for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                    if 0 <= nr < h and 0 <= nc < w and mask[nr, nc] and not seen[nr, nc]:
                        seen[nr, nc] = True
                        queue.append((nr, nc))
            comps.append((area, (r0, c0), (area, rmin, cmin, rmax, cmax)))
    return comps


def _largest_brute(mask: np.ndarray):
    comps = _components_brute(mask)
    if not comps:
        return (0, -1, -1, -1, -1)
    # largest area, ties broken by earliest raster-order anchor pixel
    comps.sort(key=lambda t: (-t[0], t[1]))
    return comps[0][2]


def _random_mask(rng: random.Random, h: int, w: int, density: float) -> np.ndarray:
    bits = np.array(
        [rng.random() < density for _ in range(h * w)], dtype=np.uint8
    ).reshape(h, w)
    return bits


def test_numpy_labeling_matches_flood_fill():
    rng = random.Random(7)
    for density in (0.1, 0.4, 0.55, 0.8):
        for _ in range(25):
            h = rng.randint(1, 24)
            w = rng.randint(1, 24)
            mask = _random_mask(rng, h, w, density)
            assert knp.largest_component(mask) == _largest_brute(mask)


@needs_numba
def test_backends_agree_on_labeling():
    rng = random.Random(1234)
    for _ in range(120):
        h = rng.randint(1, 40)
        w = rng.randint(1, 40)
        mask = _random_mask(rng, h, w, rng.choice((0.2, 0.5, 0.7)))
        assert tuple(knb.largest_component(mask)) == knp.largest_component(mask)


def test_labeling_empty_mask():
    mask = np.zeros((5, 9), dtype=np.uint8)
    assert knp.largest_component(mask) == (0, -1, -1, -1, -1)


def test_labeling_ties_pick_earliest_raster_anchor():
    # two separate 2x2 blocks of equal area; the upper-left one wins
    mask = np.zeros((8, 8), dtype=np.uint8)
    mask[1:3, 1:3] = 1
    mask[5:7, 5:7] = 1
    assert knp.largest_component(mask) == (4, 1, 1, 2, 2)


def test_fill_disc_matches_pixel_predicate():
    rng = random.Random(42)
    for _ in range(40):
        h = rng.randint(4, 50)
        w = rng.randint(4, 50)
        cx = rng.uniform(-5, w + 5)
        cy = rng.uniform(-5, h + 5)
        radius = rng.uniform(0.5, 20)
        img = np.zeros((h, w), dtype=np.uint8)
        knp.fill_disc(img, cx, cy, radius, 230)
        expect = np.zeros((h, w), dtype=np.uint8)
        for r in range(h):
            for c in range(w):
                if (c - cx) ** 2 + (r - cy) ** 2 <= radius * radius:
                    expect[r, c] = 230
        assert np.array_equal(img, expect)


@needs_numba
def test_backends_fill_identical_discs():
    rng = random.Random(5150)
    for _ in range(60):
        h = rng.randint(2, 64)
        w = rng.randint(2, 64)
        cx = rng.uniform(-10, w + 10)
        cy = rng.uniform(-10, h + 10)
        radius = rng.uniform(0.1, 40)
        a = np.full((h, w), 20, dtype=np.uint8)
        b = np.full((h, w), 20, dtype=np.uint8)
        knp.fill_disc(a, cx, cy, radius, 230)
        knb.fill_disc(b, cx, cy, radius, 230)
        assert np.array_equal(a, b)


def test_numpy_euler_against_closed_form_arc():
    # constant-curvature motion has an exact arc solution
    dl, dr, b, theta0 = 0.05, 0.11, 0.12, 0.3
    dtheta = (dr - dl) / b
    rc = 0.5 * b * (dr + dl) / (dr - dl)
    exact_dx = rc * (math.sin(theta0 + dtheta) - math.sin(theta0))
    exact_dy = -rc * (math.cos(theta0 + dtheta) - math.cos(theta0))
    dx, dy, dth = knp.euler_integrate(dl, dr, b, theta0, 200_000)
    assert abs(dx - exact_dx) < 1e-6
    assert abs(dy - exact_dy) < 1e-6
    assert abs(dth - dtheta) < 1e-12


@needs_numba
def test_backends_integrate_identically_enough():
    rng = random.Random(31337)
    for _ in range(30):
        dl = rng.uniform(-0.5, 0.5)
        dr = rng.uniform(-0.5, 0.5)
        theta0 = rng.uniform(-3, 3)
        n = rng.randint(1, 5000)
        a = knp.euler_integrate(dl, dr, 0.12, theta0, n)
        b = knb.euler_integrate(dl, dr, 0.12, theta0, n)
        # summation order differs (chunked vs sequential); agreement is
        # to accumulation roundoff, far below the kinematics tolerance
        for u, v in zip(a, b):
            assert abs(u - v) < 1e-10


@pytest.mark.parametrize("choice", ["numpy", "numba", "auto"])
def test_backend_env_flag_selects_implementation(choice):
    if choice == "numba" and not HAVE_NUMBA:
        pytest.skip("numba unavailable")
    code = (
        "from curiosim.kernels import ACTIVE_BACKEND\n"
        "print(ACTIVE_BACKEND)\n"
    )
    env = dict(os.environ, CURIOSIM_BACKEND=choice)
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    got = out.stdout.strip()
    if choice == "auto":
        assert got in ("numba", "numpy")
    else:
        assert got == choice


def test_backend_env_flag_rejects_unknown_value():
    code = "import curiosim.kernels\n"
    env = dict(os.environ, CURIOSIM_BACKEND="fortran")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.returncode != 0
    assert "CURIOSIM_BACKEND" in out.stderr
