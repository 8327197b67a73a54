"""Numeric hot paths with selectable backends.

Two implementations exist: a jitted one (numba) and a plain vectorized
one (numpy).  The environment variable ``CURIOSIM_BACKEND`` picks one at
import time:

* ``auto`` (default): jitted if numba imports, numpy otherwise
* ``numba``: jitted, import error if numba is unavailable
* ``numpy``: plain numpy, never compiles anything

``ACTIVE_BACKEND`` records which one was selected.  The two backends
return bit-identical results for the integer kernels and agree to
~1e-10 on the float integrator; ``benchmarks/bench_backends.py`` times
them against each other.
"""

from __future__ import annotations

import os

_CHOICE = os.environ.get("CURIOSIM_BACKEND", "auto").strip().lower()
if _CHOICE not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"CURIOSIM_BACKEND must be 'auto', 'numba' or 'numpy', not {_CHOICE!r}"
    )

if _CHOICE == "numpy":
    from curiosim.kernels import _numpy_impl as _impl

    ACTIVE_BACKEND = "numpy"
elif _CHOICE == "numba":
    from curiosim.kernels import _numba_impl as _impl

    ACTIVE_BACKEND = "numba"
else:
    try:
        from curiosim.kernels import _numba_impl as _impl

        ACTIVE_BACKEND = "numba"
    except ImportError:
        from curiosim.kernels import _numpy_impl as _impl

        ACTIVE_BACKEND = "numpy"

euler_integrate = _impl.euler_integrate
largest_component = _impl.largest_component
fill_disc = _impl.fill_disc

__all__ = ["ACTIVE_BACKEND", "euler_integrate", "largest_component", "fill_disc"]
