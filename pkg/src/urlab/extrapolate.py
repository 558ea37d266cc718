"""Limit estimation on shrinking grids: polynomial (Richardson) extrapolation and log-log slopes."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np


class LimitEstimate(NamedTuple):
    value: float
    error: float


def richardson_limit(steps, values) -> LimitEstimate:
    """Extrapolate ``values(step)`` to ``step -> 0`` assuming a power series in ``step``.

    Neville's scheme evaluated at zero; on a geometric grid this is the classic
    Richardson table. The error estimate is the change in the extrapolated
    value when the coarsest point is dropped.
    """
    h = np.asarray(steps, dtype=float)
    f = np.asarray(values, dtype=float)
    if h.shape != f.shape or h.size == 0:
        raise ValueError("steps and values must be non-empty and equally long")
    n = h.size
    if n == 1:
        return LimitEstimate(float(f[0]), float("inf"))
    # p[i] holds the interpolant through points i..i+m evaluated at 0
    p = f.copy()
    for m in range(1, n):
        p = (h[m:] * p[:-1] - h[: n - m] * p[1:]) / (h[m:] - h[: n - m])
        if m == n - 2:
            shorter = p[1]
    return LimitEstimate(float(p[0]), float(abs(p[0] - shorter)))


def loglog_slope(x, y) -> float:
    """Least-squares slope of log|y| against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.abs(np.asarray(y, float))), 1)[0])


def geometric_grid(start: float = 1e-1, stop: float = 1e-5, ratio: float = 10.0) -> list[float]:
    """Descending grid start, start/ratio, ... down to stop (inclusive)."""
    n = int(round(np.log(start / stop) / np.log(ratio))) + 1
    return [start / ratio**k for k in range(n)]
