"""Brute-force reference implementations used only by the tests."""

import numpy as np


def brute_force_hull_vertices(points: np.ndarray) -> np.ndarray:
    """Vertices of the convex hull by the O(n^3) edge test.

    The ordered pair (i, j) is a hull edge when every other point lies strictly
    to the left of the line i -> j; the vertex set is the set of edge tails.
    Assumes general position (no three collinear points on the boundary).
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    n = len(pts)
    if n <= 2:
        return pts
    keep = np.zeros(n, dtype=bool)
    for i in range(n):
        e = pts - pts[i]  # edge vectors i -> j and offsets i -> k
        cr = e[:, None, 0] * e[None, :, 1] - e[:, None, 1] * e[None, :, 0]  # [j, k]
        cr[:, i] = np.inf
        np.fill_diagonal(cr, np.inf)
        cr[i, :] = -np.inf
        if np.any(cr.min(axis=1) > 0):
            keep[i] = True
    return pts[keep]


def support_on_grid(vertices: np.ndarray, directions: np.ndarray) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    return (v[:, 0:1] * directions[:, 0] + v[:, 1:2] * directions[:, 1]).max(axis=0)


def interval_hausdorff_by_neighbourhoods(a, b, step=1e-3) -> float:
    """Smallest eps on a grid of spacing ``step`` with A in B^eps and B in A^eps.

    Points of each interval are sampled at the same spacing (endpoints
    included); distance to an interval is max(lo - x, x - hi, 0).
    """

    def sample(iv):
        k = max(1, int(np.ceil((iv.hi - iv.lo) / step)))
        return np.linspace(iv.lo, iv.hi, k + 1)

    def dist(x, iv):
        return np.maximum(np.maximum(iv.lo - x, x - iv.hi), 0.0)

    worst = max(dist(sample(a), b).max(), dist(sample(b), a).max())
    eps_grid = np.arange(0.0, worst + 2 * step, step)
    return float(eps_grid[np.argmax(eps_grid >= worst - 1e-12)])
