"""Hot numeric kernels: numba-compiled fast path with a pure-numpy fallback.

The backend is chosen once at import time from the ``PLEVT_BACKEND``
environment variable ("numba" or "numpy").  The default is numba when it
is importable; otherwise the numpy implementations are used.  Both
implementations of every kernel stay importable (``*_nb`` / ``*_np``) so
they can be compared directly in tests and benchmarks.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "active_backend",
    "have_numba",
    "solve_scaled_quantile",
    "compensated_sum",
    "record_scan",
]

_EPS = float(np.finfo(np.float64).eps)


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def solve_scaled_quantile_np(log_inv_u, beta, tol=1e-13, maxiter=200):
    """Solve log1p(y/beta) - y + L = 0 elementwise for y = theta * x.

    L = log(1/u) is the log of the tail mass, so y is the upper quantile
    in the scale-free variable theta*x (theta enters only as the caller's
    final division).  h(y) is strictly decreasing and concave on y >= 0,
    so a Newton iteration started left of the root overshoots once and
    then converges monotonically from the right; a bisection bracket is
    kept as a safeguard.
    """
    L = np.asarray(log_inv_u, dtype=np.float64)
    scalar = L.ndim == 0
    L = np.atleast_1d(L)
    y = L + np.log1p(L / beta)  # first fixed-point iterate; lands left of root
    lo = y.copy()
    hi = np.full_like(y, np.inf)
    stop = np.max if L.size else (lambda a: 0.0)
    for _ in range(maxiter):
        h = np.log1p(y / beta) - y + L
        pos = h > 0.0
        lo = np.where(pos, y, lo)
        hi = np.where(pos, hi, y)
        noise = 8.0 * _EPS * np.maximum(1.0, np.abs(L) + y)
        active = np.abs(h) > np.maximum(tol, noise)
        if not active.any():
            break
        hp = 1.0 / (beta + y) - 1.0
        step = h / hp
        cand = y - step
        inside = (cand > lo) & (cand < hi)
        mid = np.where(np.isinf(hi), y + np.maximum(1.0, y), 0.5 * (lo + hi))
        cand = np.where(inside, cand, mid)
        newy = np.where(active, cand, y)
        if np.array_equal(newy, y):
            break
        y = newy
    return float(y[0]) if scalar else y


def compensated_sum_np(values) -> float:
    # numpy pairwise summation: error O(log n * eps), adequate for k <= 1e4
    return float(np.sum(np.asarray(values, dtype=np.float64)))


def record_scan_np(x):
    """Strict upper records of a stream: (values, 1-based indices)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)
    runmax = np.maximum.accumulate(x)
    mask = np.empty(x.shape, dtype=bool)
    mask[0] = True
    mask[1:] = x[1:] > runmax[:-1]
    idx = np.flatnonzero(mask)
    return x[idx].copy(), (idx + 1).astype(np.int64)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

try:  # pragma: no cover - exercised indirectly through the backend binding
    from numba import njit

    have_numba = True
except ImportError:  # pragma: no cover
    njit = None
    have_numba = False

if have_numba:

    @njit(cache=True)
    def _solve_scaled_quantile_core(L, beta, tol, maxiter):
        n = L.shape[0]
        out = np.empty(n)
        for i in range(n):
            Li = L[i]
            y = Li + np.log1p(Li / beta)
            lo = y
            hi = np.inf
            noise = 8.0 * 2.220446049250313e-16 * max(1.0, abs(Li) + y)
            for _ in range(maxiter):
                h = np.log1p(y / beta) - y + Li
                if h > 0.0:
                    lo = y
                else:
                    hi = y
                if abs(h) <= max(tol, noise):
                    break
                hp = 1.0 / (beta + y) - 1.0
                cand = y - h / hp
                if not (lo < cand < hi):
                    cand = y + max(1.0, y) if np.isinf(hi) else 0.5 * (lo + hi)
                if cand == y:
                    break
                y = cand
                noise = 8.0 * 2.220446049250313e-16 * max(1.0, abs(Li) + y)
            out[i] = y
        return out

    def solve_scaled_quantile_nb(log_inv_u, beta, tol=1e-13, maxiter=200):
        L = np.asarray(log_inv_u, dtype=np.float64)
        if L.ndim == 0:
            return float(_solve_scaled_quantile_core(L.reshape(1), float(beta), tol, maxiter)[0])
        return _solve_scaled_quantile_core(np.ascontiguousarray(L), float(beta), tol, maxiter)

    @njit(cache=True)
    def _compensated_sum_core(values):
        # Kahan-Neumaier compensated accumulation
        total = 0.0
        comp = 0.0
        for i in range(values.shape[0]):
            v = values[i]
            t = total + v
            if abs(total) >= abs(v):
                comp += (total - t) + v
            else:
                comp += (v - t) + total
            total = t
        return total + comp

    def compensated_sum_nb(values) -> float:
        arr = np.ascontiguousarray(np.asarray(values, dtype=np.float64)).ravel()
        return float(_compensated_sum_core(arr))

    @njit(cache=True)
    def _record_scan_core(x):
        n = x.shape[0]
        count = 0
        best = -np.inf
        for i in range(n):
            if x[i] > best:
                best = x[i]
                count += 1
        vals = np.empty(count)
        idx = np.empty(count, dtype=np.int64)
        best = -np.inf
        j = 0
        for i in range(n):
            if x[i] > best:
                best = x[i]
                vals[j] = x[i]
                idx[j] = i + 1
                j += 1
        return vals, idx

    def record_scan_nb(x):
        arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
        if arr.size == 0:
            return np.empty(0), np.empty(0, dtype=np.int64)
        return _record_scan_core(arr)

else:  # pragma: no cover
    solve_scaled_quantile_nb = None
    compensated_sum_nb = None
    record_scan_nb = None


# ---------------------------------------------------------------------------
# backend binding
# ---------------------------------------------------------------------------

_requested = os.environ.get("PLEVT_BACKEND", "").strip().lower()
if _requested not in ("numba", "numpy", ""):
    raise RuntimeError(
        f"PLEVT_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )
if _requested == "":
    _requested = "numba" if have_numba else "numpy"
if _requested == "numba" and not have_numba:  # pragma: no cover
    _requested = "numpy"

_ACTIVE = _requested


def active_backend() -> str:
    """Name of the kernel backend chosen at import time."""
    return _ACTIVE


if _ACTIVE == "numba":
    solve_scaled_quantile = solve_scaled_quantile_nb
    compensated_sum = compensated_sum_nb
    record_scan = record_scan_nb
else:
    solve_scaled_quantile = solve_scaled_quantile_np
    compensated_sum = compensated_sum_np
    record_scan = record_scan_np
