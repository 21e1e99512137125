"""Seeded Gaussian sequence generators with exact covariance oracles.

Kinds
-----
iid             X_n ~ N(0, Sigma), independent.
scaled-iid      X_n = s_n * Y_n with Y_n ~ N(0, Sigma) i.i.d. and
                s_n = 1 + amplitude * n**(-exponent), so s_n -> 1.
ar1             coordinatewise X_{k+1} = phi X_k + sqrt(1 - phi^2) xi_{k+1},
                started in the stationary N(0, 1) law.
walk            coordinatewise X_k = S_k / sqrt(k), S_k a sum of k standard
                normals.
polytope-lines  independent draws; category j is chosen with probability
                p_j and the draw is zeta * a_j with zeta ~ N(0, 1).

All draws of one path come from streams derived from the path seed, and
batched draws reproduce one-at-a-time draws bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import ParameterError
from .geometry import Ellipsoid, Interval, Polytope, project
from .rng import make_generator

IID = "iid"
SCALED_IID = "scaled-iid"
AR1 = "ar1"
WALK = "walk"
POLYTOPE_LINES = "polytope-lines"
KINDS = (IID, SCALED_IID, AR1, WALK, POLYTOPE_LINES)


def _psd_root(sigma: np.ndarray) -> np.ndarray:
    """A with A A^T = sigma; works for rank-deficient sigma."""
    w, v = np.linalg.eigh(sigma)
    return v * np.sqrt(np.clip(w, 0.0, None))


@dataclass(frozen=True, eq=False)
class SequenceSpec:
    kind: str
    d: int = 1
    sigma: np.ndarray | None = field(default=None, repr=False)
    phi: float = 0.0
    amplitude: float = 1.0
    exponent: float = 0.5
    lines: np.ndarray | None = field(default=None, repr=False)
    weights: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown sequence kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in (IID, SCALED_IID):
            e = Ellipsoid(self.sigma if self.sigma is not None else np.eye(self.d))
            object.__setattr__(self, "sigma", e.sigma)
            object.__setattr__(self, "d", e.d)
        if self.kind == SCALED_IID:
            if not (self.amplitude > -1.0 and self.exponent > 0):
                raise ParameterError("scaled-iid needs amplitude > -1 and exponent > 0 so s_n > 0 and s_n -> 1")
        if self.kind == AR1 and not abs(self.phi) < 1:
            raise ParameterError(f"ar1 needs |phi| < 1, got {self.phi!r}")
        if self.kind == POLYTOPE_LINES:
            if self.lines is None:
                raise ParameterError("polytope-lines needs direction vectors 'lines'")
            a = np.atleast_2d(np.asarray(self.lines, dtype=float))
            if np.any(np.linalg.norm(a, axis=1) == 0):
                raise ParameterError("polytope-lines direction vectors must be nonzero")
            p = (np.full(len(a), 1.0 / len(a)) if self.weights is None
                 else np.asarray(self.weights, dtype=float).reshape(-1))
            if p.shape != (len(a),) or np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-9:
                raise ParameterError("polytope-lines weights must be positive, one per line, summing to 1")
            a.setflags(write=False)
            p.setflags(write=False)
            object.__setattr__(self, "lines", a)
            object.__setattr__(self, "weights", p)
            object.__setattr__(self, "d", a.shape[1])
        if int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"dimension must be an integer >= 1, got {self.d!r}")

    @classmethod
    def iid(cls, sigma=None, d: int = 1) -> "SequenceSpec":
        return cls(IID, d=d, sigma=None if sigma is None else np.atleast_2d(np.asarray(sigma, float)))

    @classmethod
    def scaled_iid(cls, sigma=None, d: int = 1, amplitude=1.0, exponent=0.5) -> "SequenceSpec":
        return cls(SCALED_IID, d=d, sigma=None if sigma is None else np.atleast_2d(np.asarray(sigma, float)),
                   amplitude=amplitude, exponent=exponent)

    @classmethod
    def ar1(cls, phi: float, d: int = 1) -> "SequenceSpec":
        return cls(AR1, d=d, phi=phi)

    @classmethod
    def walk(cls, d: int = 1) -> "SequenceSpec":
        return cls(WALK, d=d)

    @classmethod
    def polytope_lines(cls, lines, weights=None) -> "SequenceSpec":
        return cls(POLYTOPE_LINES, lines=lines, weights=weights)

    def scale_schedule(self, idx: np.ndarray) -> np.ndarray:
        """s_n for 1-based indices (scaled-iid only)."""
        return 1.0 + self.amplitude * np.asarray(idx, dtype=float) ** (-self.exponent)

    def limit_set(self):
        """The a.s. limit of conv{X_1..X_n} / b(n).

        For the walk this is {0}; its nondegenerate limit needs c(n).
        """
        if self.kind in (IID, SCALED_IID):
            e = Ellipsoid(self.sigma)
        elif self.kind == POLYTOPE_LINES:
            return Polytope.symmetric(self.lines) if self.d > 1 else _interval_of(Polytope.symmetric(self.lines))
        elif self.kind == AR1:
            e = Ellipsoid(np.eye(self.d))
        else:
            e = Ellipsoid(np.zeros((self.d, self.d)))
        if self.d == 1:
            h = math.sqrt(max(float(e.sigma[0, 0]), 0.0))
            return Interval(-h, h)
        return e

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "d": int(self.d)}
        if self.kind in (IID, SCALED_IID):
            out["sigma"] = self.sigma.tolist()
        if self.kind == SCALED_IID:
            out.update(amplitude=self.amplitude, exponent=self.exponent)
        if self.kind == AR1:
            out["phi"] = self.phi
        if self.kind == POLYTOPE_LINES:
            out.update(lines=self.lines.tolist(), weights=self.weights.tolist())
        return out


def _interval_of(p: Polytope) -> Interval:
    return Interval(float(p.vertices.min()), float(p.vertices.max()))


class PathState:
    """One path of a sequence: recurrence state plus its random streams."""

    def __init__(self, spec: SequenceSpec, path_seed: int):
        self.spec = spec
        self.seed = int(path_seed)
        self.k = 0  # points emitted so far
        self._normals = make_generator(self.seed, 0)
        d = spec.d
        if spec.kind in (IID, SCALED_IID):
            self._root = _psd_root(spec.sigma)
        elif spec.kind == AR1:
            self._prev = np.zeros(d)
            self._innov = math.sqrt(1.0 - spec.phi**2)
        elif spec.kind == WALK:
            self._sum = np.zeros(d)
        elif spec.kind == POLYTOPE_LINES:
            self._cats = make_generator(self.seed, 1)
            self._cum = np.cumsum(spec.weights)
            self.category_counts = np.zeros(len(spec.weights), dtype=np.int64)

    def draw(self, count: int) -> np.ndarray:
        """Next ``count`` points as a (count, d) array."""
        spec, d = self.spec, self.spec.d
        z = self._normals.standard_normal((count, d))
        start = self.k + 1
        if spec.kind == IID:
            x = project(z, self._root)
        elif spec.kind == SCALED_IID:
            x = project(z, self._root) * spec.scale_schedule(np.arange(start, start + count))[:, None]
        elif spec.kind == AR1:
            x = np.empty_like(z)
            phi = spec.phi
            if self.k == 0:
                x[0] = z[0]
                tail = z[1:]
                prev = z[0]
                off = 1
            else:
                tail, prev, off = z, self._prev, 0
            if len(tail):
                x[off:] = lfilter([self._innov], [1.0, -phi], tail, axis=0, zi=(phi * prev)[None, :])[0]
            if count:
                self._prev = x[-1].copy()
        elif spec.kind == WALK:
            s = np.cumsum(np.vstack([self._sum[None, :], z]), axis=0)[1:]
            if count:
                self._sum = s[-1].copy()
            x = s / np.sqrt(np.arange(start, start + count, dtype=float))[:, None]
        else:
            u = self._cats.random(count)
            cat = np.minimum(np.searchsorted(self._cum, u, side="right"), len(self._cum) - 1)
            self.category_counts += np.bincount(cat, minlength=len(self._cum))
            x = z[:, 0:1] * spec.lines[cat]
        self.k += count
        return x

    def next(self) -> np.ndarray:
        return self.draw(1)[0]


def spawn(spec: SequenceSpec, path_seed: int) -> PathState:
    return PathState(spec, path_seed)


def next_point(state: PathState) -> np.ndarray:
    return state.next()


def sample_paths(spec: SequenceSpec, seeds, n: int) -> np.ndarray:
    """(len(seeds), n, d) array of the first n points of each path."""
    return np.stack([PathState(spec, s).draw(n) for s in seeds])


def marginal(spec: SequenceSpec, n: int, size: int, gen: np.random.Generator) -> np.ndarray:
    """``size`` independent draws from the law of X_n."""
    if spec.kind in (IID, SCALED_IID):
        x = project(gen.standard_normal((size, spec.d)), _psd_root(spec.sigma))
        return x * spec.scale_schedule(n) if spec.kind == SCALED_IID else x
    if spec.kind in (AR1, WALK):
        return gen.standard_normal((size, spec.d))
    cat = np.minimum(np.searchsorted(np.cumsum(spec.weights), gen.random(size), side="right"),
                     len(spec.weights) - 1)
    return gen.standard_normal((size, 1)) * spec.lines[cat]


def rho(spec: SequenceSpec, m: int, n: int, theta=None) -> float:
    """Exact E <X_m, theta> <X_n, theta>.

    ``theta`` is needed when d > 1 for kinds whose covariance is not
    isotropic (iid, scaled-iid, polytope-lines).
    """
    if m < 1 or n < 1:
        raise ParameterError("indices are 1-based")
    if spec.kind in (AR1, WALK):
        # independent unit-variance coordinates: same value in every direction
        if spec.kind == AR1:
            return spec.phi ** abs(m - n)
        return math.sqrt(min(m, n) / max(m, n))
    if theta is None:
        if spec.d != 1:
            raise ParameterError(f"rho for kind {spec.kind!r} in d={spec.d} needs a direction theta")
        theta = np.ones(1)
    th = np.asarray(theta, dtype=float).reshape(-1)
    if th.shape[0] != spec.d:
        raise ParameterError(f"theta has dimension {th.shape[0]}, sequence has {spec.d}")
    if m != n:
        return 0.0
    if spec.kind == POLYTOPE_LINES:
        return float(np.sum(spec.weights * (spec.lines @ th) ** 2))
    var = float(th @ spec.sigma @ th)
    if spec.kind == SCALED_IID:
        var *= float(spec.scale_schedule(m)) ** 2
    return var


@dataclass(frozen=True)
class Condition2Report:
    satisfied: bool
    worst_pair: tuple[int, int]
    worst_value: float
    mode: str
    pairs_scanned: int


def _index_grid(lo: int, hi: int, points: int = 200) -> np.ndarray:
    if hi < lo:
        return np.array([], dtype=np.int64)
    g = np.unique(np.round(np.geomspace(lo, hi, points)).astype(np.int64))
    return np.unique(np.concatenate([[lo, hi], g]))


def check_condition2(spec: SequenceSpec, eps: float, horizon: int, mode: str = "separated",
                     theta=None) -> Condition2Report:
    """Scan |rho(m, n)| over index pairs up to ``horizon``.

    mode="separated": m, n in [N/2, N] with |m - n| >= N/2 (m, n, |m-n| all
    large). mode="ratio": m in [N^(1/4), N^(1/2)], n >= m * N^(1/2), so that
    both m and n/m grow with N. Pairs are taken on a geometric index grid that
    always includes the extreme (least separated) admissible pairs.
    """
    n_max = int(horizon)
    pairs = []
    if mode == "separated":
        half = math.ceil(n_max / 2)
        for m in _index_grid(half, n_max):
            lo = m + half
            for n in _index_grid(lo, n_max):
                pairs.append((int(m), int(n)))
    elif mode == "ratio":
        r = math.sqrt(n_max)
        for m in _index_grid(max(1, math.ceil(n_max ** 0.25)), math.floor(r)):
            for n in _index_grid(math.ceil(m * r), n_max):
                pairs.append((int(m), int(n)))
    else:
        raise ParameterError(f"unknown scan mode {mode!r}")
    if not pairs:
        raise ParameterError(f"horizon {horizon} admits no index pairs in mode {mode!r}")
    vals = [abs(rho(spec, m, n, theta)) for m, n in pairs]
    i = int(np.argmax(vals))
    return Condition2Report(vals[i] < eps, pairs[i], vals[i], mode, len(pairs))
