"""Vectorised bisection for monotone functions."""

from __future__ import annotations

from typing import Callable

import numpy as np

MAX_ITER = 200


def bisect_increasing(func: Callable[[np.ndarray], np.ndarray], target, lo, hi,
                      xtol: float = 1e-12) -> np.ndarray:
    """Solve ``func(x) = target`` element-wise for an increasing ``func``.

    The caller guarantees ``func(lo) <= target <= func(hi)``. Returns the
    bracket midpoint once every bracket is narrower than ``xtol``.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        below = func(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= xtol):
            break
    return 0.5 * (lo + hi)
