"""Compiled inner loop of the hull tracker.

Inner products are accumulated in the same order as geometry.project and
without fused multiply-adds, so the running maxima agree bit for bit with the
numpy evaluation.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _running_max_2d(pts, c, s, out):
    for k in range(pts.shape[0]):
        a = pts[k, 0]
        b = pts[k, 1]
        for i in range(out.shape[0]):
            out[i] = max(out[i], a * c[i] + b * s[i])


@njit(cache=True, nogil=True)
def _running_max_nd(pts, dirs, out):
    d = pts.shape[1]
    for k in range(pts.shape[0]):
        for i in range(out.shape[0]):
            v = pts[k, 0] * dirs[i, 0]
            for j in range(1, d):
                v = v + pts[k, j] * dirs[i, j]
            out[i] = max(out[i], v)


def running_max(points: np.ndarray, directions: np.ndarray, out: np.ndarray) -> None:
    """out[i] <- max(out[i], max_k <points[k], directions[i]>), in place."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if directions.shape[1] == 2:
        _running_max_2d(pts, np.ascontiguousarray(directions[:, 0]), np.ascontiguousarray(directions[:, 1]), out)
    else:
        _running_max_nd(pts, np.ascontiguousarray(directions), out)
