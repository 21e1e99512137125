"""Convex compacts in R^d represented through their support functions.

A convex compact K is identified with h_K(theta) = sup_{x in K} <x, theta>
sampled on a fixed grid of unit directions. For two convex compacts the
Hausdorff distance is sup_theta |h_A(theta) - h_B(theta)|; on a finite grid
this gives the "grid Hausdorff distance", which is exact in d = 1 and a lower
approximation otherwise. For bodies inside a ball of radius R in d = 2, the
equiangular grid with M directions under-estimates by at most
R * (1 - cos(pi / M)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError

DEFAULT_M = {2: 512, 3: 1024}

EQUIANGULAR = "equiangular-2d"
FIBONACCI = "fibonacci-sphere"
AXIS_PAIR = "axis-pair-1d"
GAUSSIAN_DESIGN = "gaussian-design"


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    d: int
    directions: np.ndarray = field(repr=False)  # (M, d), unit rows
    kind: str

    def __post_init__(self):
        self.directions.setflags(write=False)

    def __len__(self):
        return self.directions.shape[0]

    @property
    def m(self) -> int:
        return self.directions.shape[0]

    def same_as(self, other: "DirectionGrid") -> bool:
        return self is other or (
            self.d == other.d
            and self.directions.shape == other.directions.shape
            and bool(np.array_equal(self.directions, other.directions))
        )


def make_direction_grid(d: int, m: int | None = None) -> DirectionGrid:
    """Deterministic grid of unit directions.

    d = 1 always gives {+1, -1}. d = 2 gives ``m`` equiangular directions with
    direction i at angle 2*pi*i/m. d >= 3 gives ``m`` Fibonacci-sphere points
    (for d = 3) or a fixed-seed random spherical design (d > 3).
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ParameterError(f"dimension must be an integer >= 1, got {d!r}")
    if m is None:
        m = DEFAULT_M.get(d, 2 if d == 1 else 1024)
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise ParameterError(f"grid size M must be an integer >= 2, got {m!r}")
    if d == 1:
        return DirectionGrid(1, np.array([[1.0], [-1.0]]), AXIS_PAIR)
    if d == 2:
        ang = 2.0 * np.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
        # exact axis values at multiples of pi/2
        dirs[np.abs(dirs) < 1e-15] = 0.0
        return DirectionGrid(2, dirs, EQUIANGULAR)
    if d == 3:
        i = np.arange(m) + 0.5
        z = 1.0 - 2.0 * i / m
        r = np.sqrt(1.0 - z * z)
        phi = np.pi * (3.0 - np.sqrt(5.0)) * i
        dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        kind = FIBONACCI
    else:
        # Higher-dimensional analogue: normalized Gaussian design from a fixed
        # seed, so the grid is deterministic and roughly uniform.
        rng = np.random.Generator(np.random.PCG64(0x5EED0000 + d))
        dirs = rng.standard_normal((m, d))
        kind = GAUSSIAN_DESIGN
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return DirectionGrid(d, dirs, kind)


def grid_error_bound(radius: float, m: int) -> float:
    """Worst-case under-estimate of the 2-D grid Hausdorff distance."""
    return radius * (1.0 - np.cos(np.pi / m))


def project(points: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Inner products <x_k, theta_i> as an (n, M) array.

    Accumulated coordinate by coordinate with plain elementwise operations,
    so every caller gets bit-identical results regardless of batch shape.
    """
    out = points[:, 0:1] * directions[:, 0]
    for j in range(1, points.shape[1]):
        out += points[:, j : j + 1] * directions[:, j]
    return out


@dataclass(frozen=True, eq=False)
class SupportProfile:
    grid: DirectionGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.m,):
            raise ParameterError("profile length does not match its grid")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("support values must be finite")

    def scaled(self, factor: float) -> "SupportProfile":
        return SupportProfile(self.grid, self.values * factor)


def _as_points(points, d: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if d == 1 else pts.reshape(1, -1)
    if pts.shape[0] == 0:
        raise DomainError("support profile of an empty point set is undefined")
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ParameterError(f"points must have dimension {d}, got shape {pts.shape}")
    return pts


def profile_of_points(points, grid: DirectionGrid) -> SupportProfile:
    """Support profile of conv(points): max over points of <x, theta_i>."""
    pts = _as_points(points, grid.d)
    step = max(1, 2**22 // grid.m)
    vals = np.max([project(pts[i : i + step], grid.directions).max(axis=0) for i in range(0, len(pts), step)], axis=0)
    return SupportProfile(grid, vals)


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Concentration ellipsoid {Sigma^{1/2} u : |u| <= 1} of N(0, Sigma)."""

    sigma: np.ndarray

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ParameterError(f"sigma must be a square matrix, got shape {s.shape}")
        if not np.allclose(s, s.T, rtol=0.0, atol=1e-12):
            raise DomainError("sigma must be symmetric")
        if np.linalg.eigvalsh(s).min() < -1e-10:
            raise DomainError("sigma must be positive semidefinite")
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)

    @property
    def d(self) -> int:
        return self.sigma.shape[0]

    def support(self, theta) -> float:
        return ellipsoid_support(self, theta)

    def profile(self, grid: DirectionGrid) -> SupportProfile:
        _check_dim(self.d, grid.d)
        q = np.einsum("ij,jk,ik->i", grid.directions, self.sigma, grid.directions)
        return SupportProfile(grid, np.sqrt(np.maximum(q, 0.0)))


def ellipsoid_support(e: Ellipsoid, theta) -> float:
    """sqrt(theta' Sigma theta), with tiny negative round-off clamped to 0."""
    th = np.asarray(theta, dtype=float).reshape(-1)
    _check_dim(e.d, th.shape[0])
    return float(np.sqrt(max(th @ e.sigma @ th, 0.0)))


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.shape[0] == 0:
            raise ParameterError("polytope needs at least one vertex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def symmetric(cls, generators) -> "Polytope":
        """conv{+a_k, -a_k}."""
        a = np.atleast_2d(np.asarray(generators, dtype=float))
        return cls(np.vstack([a, -a]))

    @property
    def d(self) -> int:
        return self.vertices.shape[1]

    def support(self, theta) -> float:
        th = np.asarray(theta, dtype=float).reshape(1, -1)
        _check_dim(self.d, th.shape[1])
        return float(project(self.vertices, th).max())

    def profile(self, grid: DirectionGrid) -> SupportProfile:
        return profile_of_points(self.vertices, grid)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ParameterError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    d = 1

    def profile(self, grid: DirectionGrid) -> SupportProfile:
        _check_dim(1, grid.d)
        return SupportProfile(grid, np.array([self.hi, -self.lo]))


def _check_dim(expected: int, got: int):
    if expected != got:
        raise ParameterError(f"dimension mismatch: {expected} vs {got}")


def hausdorff_profiles(p: SupportProfile, q: SupportProfile) -> float:
    """Grid Hausdorff distance max_i |h_p(theta_i) - h_q(theta_i)|."""
    if not p.grid.same_as(q.grid):
        raise ParameterError("profiles live on different direction grids")
    return float(np.max(np.abs(p.values - q.values)))


def hausdorff_intervals(a: Interval, b: Interval) -> float:
    return max(abs(a.lo - b.lo), abs(a.hi - b.hi))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(pts: list[tuple[float, float]]) -> list[tuple[float, float]]:
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _strictly_inside(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Mask of points strictly inside a CCW convex polygon (>= 3 vertices)."""
    e = np.roll(poly, -1, axis=0) - poly
    cr = (e[:, 0:1] * (pts[:, 1] - poly[:, 1:2])) - (e[:, 1:2] * (pts[:, 0] - poly[:, 0:1]))
    return np.all(cr > 0, axis=0)


def convex_hull_2d(points) -> np.ndarray:
    """Strictly convex hull vertices in CCW order, starting at the
    lexicographically smallest vertex. Collinear and duplicate points dropped."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) > 64:
        # Akl-Toussaint: discard points strictly inside the polygon spanned by
        # the extreme points in 8 directions; they cannot be hull vertices.
        keys = [pts[:, 0], pts[:, 1], pts[:, 0] + pts[:, 1], pts[:, 0] - pts[:, 1]]
        idx = {int(np.argmin(k)) for k in keys} | {int(np.argmax(k)) for k in keys}
        poly = np.array(_monotone_chain([tuple(pts[i]) for i in idx]))
        if len(poly) >= 3:
            pts = pts[~_strictly_inside(poly, pts)]
    hull = _monotone_chain([(float(x), float(y)) for x, y in pts])
    return np.array(hull, dtype=float).reshape(-1, 2)


class Hull2D:
    """Exact planar convex hull under point insertion.

    Only points outside the current hull trigger a rebuild, and the rebuild
    runs on the current vertices plus the new outside points, so the cost per
    insertion is O(h) for h hull vertices.
    """

    def __init__(self, points=None):
        self._v = np.empty((0, 2))
        if points is not None:
            self.extend(points)

    def insert(self, x) -> "Hull2D":
        return self.extend(np.asarray(x, dtype=float).reshape(1, 2))

    def extend(self, points) -> "Hull2D":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            return self
        if len(self._v) >= 3:
            pts = pts[~_inside_or_on(self._v, pts)]
            if len(pts) == 0:
                return self
        self._v = convex_hull_2d(np.vstack([self._v, pts]))
        return self

    def vertices(self) -> np.ndarray:
        return self._v.copy()

    def __len__(self):
        return len(self._v)


def _inside_or_on(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    e = np.roll(poly, -1, axis=0) - poly
    cr = (e[:, 0:1] * (pts[:, 1] - poly[:, 1:2])) - (e[:, 1:2] * (pts[:, 0] - poly[:, 0:1]))
    return np.all(cr >= 0, axis=0)


def hull2d_insert(state: Hull2D, x) -> Hull2D:
    return state.insert(x)


def hull2d_vertices(state: Hull2D) -> np.ndarray:
    return state.vertices()


def diameter2d(vertices) -> float:
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    if len(v) < 2:
        return 0.0
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt((diff**2).sum(-1).max()))


def area2d(vertices) -> float:
    """Shoelace area of a simple polygon given in order (either orientation)."""
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)
