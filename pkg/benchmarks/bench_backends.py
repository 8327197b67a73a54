"""Compare the compiled and pure-numpy kernel backends.

Runs each backend in a subprocess (the backend is chosen at import time
from CURIOSIM_BACKEND) and reports median wall time per call for the
three hot kernels.  Usage:

    python3 benchmarks/bench_backends.py
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import time

WORKLOADS = ("euler_integrate", "largest_component", "fill_disc")


def _time_calls(fn, repeats):
    fn()  # warm up: first call may compile
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def run_inner():
    import numpy as np

    from curiosim import kernels

    rng = np.random.default_rng(0)
    mask = rng.random((240, 320)) > 0.7
    img = np.full((240, 320), 20, dtype=np.uint8)

    results = {
        "backend": kernels.ACTIVE_BACKEND,
        "euler_integrate": _time_calls(
            lambda: kernels.euler_integrate(0.05, 0.11, 0.12, 0.3, 200_000), 20
        ),
        "largest_component": _time_calls(lambda: kernels.largest_component(mask), 50),
        "fill_disc": _time_calls(
            lambda: kernels.fill_disc(img.copy(), 160.0, 120.0, 40.0, 230), 200
        ),
    }
    print(json.dumps(results))


def run_outer():
    rows = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, CURIOSIM_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--inner"],
            capture_output=True, text=True, env=env,
        )
        if proc.returncode != 0:
            print(f"{backend}: failed\n{proc.stderr}", file=sys.stderr)
            continue
        rows[backend] = json.loads(proc.stdout.strip().splitlines()[-1])

    if not rows:
        raise SystemExit("no backend produced results")

    name_width = max(len(name) for name in WORKLOADS)
    print(f"{'kernel':<{name_width}}  " + "".join(f"{b:>12}" for b in rows) + "   speedup")
    for name in WORKLOADS:
        cells = "".join(f"{rows[b][name] * 1e6:>10.1f}us" for b in rows)
        if len(rows) == 2:
            numpy_t, numba_t = rows["numpy"][name], rows["numba"][name]
            ratio = f"{numpy_t / numba_t:>8.1f}x"
        else:
            ratio = "     n/a"
        print(f"{name:<{name_width}}  {cells}  {ratio}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.inner:
        run_inner()
    else:
        run_outer()


if __name__ == "__main__":
    main()
