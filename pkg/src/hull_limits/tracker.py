"""Streaming convex hull of a growing sample, held as per-direction maxima.

The support function of conv{x_1..x_n} in direction theta is
max_k <x_k, theta>, so the hull is maintained by a running maximum per grid
direction: O(M) memory and O(M) work per point, done by a compiled kernel.
An exact 2-D hull can be kept alongside (opt-in).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from ._kernels import running_max
from .geometry import (
    DirectionGrid,
    Ellipsoid,
    Hull2D,
    Interval,
    Polytope,
    SupportProfile,
    hausdorff_intervals,
    hausdorff_profiles,
)
from .normalizers import Normalizer, eval_g


class TrackerState:
    def __init__(self, grid: DirectionGrid, keep_hull: bool = False):
        if keep_hull and grid.d != 2:
            raise ParameterError("exact hull retention is only available in d = 2")
        self.grid = grid
        self.raw_max = np.full(grid.m, -np.inf)
        self.n = 0
        self.min1d = math.inf
        self.max1d = -math.inf
        self.hull2d = Hull2D() if keep_hull else None

    @property
    def d(self) -> int:
        return self.grid.d

    def update(self, x) -> "TrackerState":
        return self.extend(np.asarray(x, dtype=float).reshape(1, self.d))

    def extend(self, points) -> "TrackerState":
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if self.d == 1 else pts.reshape(1, -1)
        if pts.shape[1] != self.d:
            raise ParameterError(f"point dimension {pts.shape[1]} does not match tracker dimension {self.d}")
        if len(pts) == 0:
            return self
        if self.d == 1:
            self.max1d = max(self.max1d, float(pts.max()))
            self.min1d = min(self.min1d, float(pts.min()))
            self.raw_max[0] = self.max1d
            self.raw_max[1] = -self.min1d
        else:
            running_max(pts, self.grid.directions, self.raw_max)
            if self.hull2d is not None:
                self.hull2d.extend(pts)
        self.n += len(pts)
        return self

    def nbytes(self) -> int:
        """Size of the state arrays; independent of n."""
        size = self.raw_max.nbytes
        if self.hull2d is not None:
            size += self.hull2d.vertices().nbytes
        return size


def tracker_update(state: TrackerState, x) -> TrackerState:
    return state.update(x)


@dataclass(frozen=True, eq=False)
class HullSnapshot:
    n: int
    scale: float
    normalized_profile: SupportProfile
    interval: Interval | None = None
    vertices: np.ndarray | None = None


def snapshot(state: TrackerState, normalizer: Normalizer, t: float | None = None) -> HullSnapshot:
    """Hull of the points seen so far, divided by g(t) (t defaults to n)."""
    if state.n == 0:
        raise ParameterError("snapshot of an empty tracker")
    g = eval_g(normalizer, state.n if t is None else t)
    profile = SupportProfile(state.grid, state.raw_max / g)
    interval = Interval(state.min1d / g, state.max1d / g) if state.d == 1 else None
    verts = state.hull2d.vertices() / g if state.hull2d is not None else None
    return HullSnapshot(state.n, g, profile, interval, verts)


def target_interval(target) -> Interval:
    if isinstance(target, Interval):
        return target
    if isinstance(target, Ellipsoid):
        h = math.sqrt(max(float(target.sigma[0, 0]), 0.0))
        return Interval(-h, h)
    return Interval(float(target.vertices.min()), float(target.vertices.max()))


def target_profile(target, grid: DirectionGrid) -> SupportProfile:
    if target.d != grid.d:
        raise ParameterError(f"target dimension {target.d} does not match grid dimension {grid.d}")
    if grid.d == 1:
        return target_interval(target).profile(grid)
    return target.profile(grid)


def distance_to_target(snap: HullSnapshot, target: Ellipsoid | Polytope | Interval) -> float:
    """Hausdorff distance (exact in d = 1, grid version otherwise)."""
    d = snap.normalized_profile.grid.d
    if target.d != d:
        raise ParameterError(f"target dimension {target.d} does not match snapshot dimension {d}")
    if d == 1:
        return hausdorff_intervals(snap.interval, target_interval(target))
    return hausdorff_profiles(snap.normalized_profile, target_profile(target, snap.normalized_profile.grid))


def geometric_checkpoints(n_max: int, n0: int = 100, ratio: float = 2.0) -> list[int]:
    """n_j = ceil(n0 * ratio**j) up to and including n_max."""
    if n0 < 1 or ratio <= 1 or n_max < n0:
        raise ParameterError("need n0 >= 1, ratio > 1 and n_max >= n0")
    out = []
    j = 0
    while True:
        n = math.ceil(n0 * ratio**j)
        if n >= n_max:
            break
        if not out or n > out[-1]:
            out.append(n)
        j += 1
    out.append(int(n_max))
    return out
