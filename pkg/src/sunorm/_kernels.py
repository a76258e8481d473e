"""Hot inner loops for the projected-subgradient solver.

The stage loop is the only numerically hot code in the package; it is
compiled with numba when available.  Setting ``SUNORM_PURE_NUMPY=1`` (or any
non-empty value other than ``0``) skips numba and uses the vectorized numpy
fallback.  Both implementations are importable so the benchmark can compare
them directly.
"""

import os

import numpy as np


def stage_loop_numpy(P, w, x, eta, inner):
    """Run ``inner`` projected subgradient steps at fixed step size ``eta``.

    Returns (best objective seen, argmin copy, final iterate).  ``x`` is not
    modified.
    """
    x = x.copy()
    best_f = np.inf
    best_x = x.copy()
    for _ in range(inner):
        f = float(np.dot(w, np.abs(x)))
        if f < best_f:
            best_f = f
            best_x[:] = x
        x -= eta * (P @ (w * np.sign(x)))
    return best_f, best_x, x


def _stage_loop_loops(P, w, x, eta, inner):
    # Same contract as stage_loop_numpy, written with explicit loops so that
    # numba produces a single fused kernel.
    x = x.copy()
    n = x.shape[0]
    best_f = np.inf
    best_x = x.copy()
    s = np.empty(n)
    g = np.empty(n)
    for _ in range(inner):
        f = 0.0
        for i in range(n):
            f += w[i] * abs(x[i])
        if f < best_f:
            best_f = f
            for i in range(n):
                best_x[i] = x[i]
        for j in range(n):
            if x[j] > 0.0:
                s[j] = w[j]
            elif x[j] < 0.0:
                s[j] = -w[j]
            else:
                s[j] = 0.0
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += P[i, j] * s[j]
            g[i] = acc
        for i in range(n):
            x[i] -= eta * g[i]
    return best_f, best_x, x


_FORCE_NUMPY = os.environ.get("SUNORM_PURE_NUMPY", "0") not in ("", "0")

stage_loop_numba = None
if not _FORCE_NUMPY:
    try:
        from numba import njit

        stage_loop_numba = njit(cache=True)(_stage_loop_loops)
    except ImportError:
        stage_loop_numba = None

BACKEND = "numba" if stage_loop_numba is not None else "numpy"


def stage_loop(P, w, x, eta, inner):
    if BACKEND == "numba":
        return stage_loop_numba(P, w, x, eta, inner)
    return stage_loop_numpy(P, w, x, eta, inner)
