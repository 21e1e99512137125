"""Multi-path experiments: convergence curves and Monte Carlo checks.

Each path is streamed through its own tracker with a seed derived from the
master seed and the path index; aggregation runs over path-indexed results,
so the output does not depend on the number of worker threads.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import ParameterError
from .geometry import DirectionGrid, Ellipsoid, Interval, Polytope, make_direction_grid, project
from .normalizers import Normalizer, check_domain, eval_b, eval_g
from .rng import derive_seed, make_generator, path_seeds
from .sequences import PathState, SequenceSpec, marginal
from .tracker import TrackerState, target_interval, target_profile

CHUNK = 1 << 16
MIN_LEVY_TRIALS = 10_000
QUANTILES = (0.1, 0.5, 0.9)


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    spec: SequenceSpec
    target: Ellipsoid | Polytope | Interval
    normalizer: Normalizer
    checkpoints: tuple
    paths: int = 100
    master_seed: int = 0
    grid_m: int | None = None
    keep_hull: bool = False

    def __post_init__(self):
        cps = tuple(int(c) for c in self.checkpoints)
        if not cps or cps[0] < 1 or any(b <= a for a, b in zip(cps, cps[1:])):
            raise ParameterError(f"checkpoints must be strictly increasing positive integers, got {list(cps)}")
        object.__setattr__(self, "checkpoints", cps)
        if int(self.paths) < 1:
            raise ParameterError(f"paths must be >= 1, got {self.paths!r}")
        if self.target.d != self.spec.d:
            raise ParameterError(f"target dimension {self.target.d} does not match sequence dimension {self.spec.d}")
        check_domain(self.normalizer, cps)

    def grid(self) -> DirectionGrid:
        return make_direction_grid(self.spec.d, self.grid_m)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "target": target_to_dict(self.target),
            "normalizer": {
                "kind": self.normalizer.kind, "k": self.normalizer.k, "alpha": self.normalizer.alpha,
                "value": self.normalizer.value, "table_t": list(self.normalizer.table_t),
                "table_g": list(self.normalizer.table_g),
            },
            "checkpoints": list(self.checkpoints),
            "paths": int(self.paths),
            "master_seed": int(self.master_seed),
            "grid": {"d": self.spec.d, "m": self.grid().m},
            "keep_hull": bool(self.keep_hull),
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def target_to_dict(target) -> dict:
    if isinstance(target, Interval):
        return {"kind": "interval", "lo": target.lo, "hi": target.hi}
    if isinstance(target, Ellipsoid):
        return {"kind": "ellipsoid", "sigma": target.sigma.tolist()}
    return {"kind": "polytope", "vertices": target.vertices.tolist()}


@dataclass(eq=False)
class ConvergenceCurve:
    checkpoints: np.ndarray  # (C,)
    distances: np.ndarray  # (paths, C)
    quantiles: np.ndarray  # (C, 3): q10, q50, q90
    scales: np.ndarray  # (C,) normalizer values g(n)
    raw_profiles: np.ndarray  # (paths, C, M) un-normalized support maxima
    seeds: list
    config_hash: str
    hull_vertices: list = field(default_factory=list)  # per path, final normalized 2-D hull

    @property
    def median(self) -> np.ndarray:
        return self.quantiles[:, 1]

    def normalized_profiles(self) -> np.ndarray:
        return self.raw_profiles / self.scales[None, :, None]


def stream_path(spec: SequenceSpec, seed: int, checkpoints, grid: DirectionGrid,
                keep_hull: bool = False, chunk: int = CHUNK):
    """Yield the tracker of one path at each checkpoint."""
    state = PathState(spec, seed)
    tracker = TrackerState(grid, keep_hull=keep_hull)
    for n in checkpoints:
        while tracker.n < n:
            tracker.extend(state.draw(min(chunk, n - tracker.n)))
        yield tracker


def _map_paths(fn, count: int, threads: int | None):
    if threads is None or threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def run_convergence(config: ExperimentConfig, threads: int | None = None) -> ConvergenceCurve:
    """Distance of conv{X_1..X_n} / g(n) to the target at every checkpoint, per path."""
    grid = config.grid()
    cps = config.checkpoints
    scales = np.array([eval_g(config.normalizer, n) for n in cps])
    seeds = path_seeds(config.master_seed, config.paths)
    tgt = target_profile(config.target, grid).values
    tgt_iv = target_interval(config.target) if grid.d == 1 else None

    def one(i):
        dist = np.empty(len(cps))
        raw = np.empty((len(cps), grid.m))
        tracker = None
        for j, tracker in enumerate(stream_path(config.spec, seeds[i], cps, grid, config.keep_hull)):
            raw[j] = tracker.raw_max
            if tgt_iv is not None:
                lo, hi = tracker.min1d / scales[j], tracker.max1d / scales[j]
                dist[j] = max(abs(lo - tgt_iv.lo), abs(hi - tgt_iv.hi))
            else:
                dist[j] = float(np.max(np.abs(tracker.raw_max / scales[j] - tgt)))
        hull = tracker.hull2d.vertices() / scales[-1] if tracker.hull2d is not None else None
        return dist, raw, hull

    results = _map_paths(one, config.paths, threads)
    distances = np.stack([r[0] for r in results])
    quantiles = np.quantile(distances, QUANTILES, axis=0).T
    return ConvergenceCurve(
        checkpoints=np.array(cps),
        distances=distances,
        quantiles=quantiles,
        scales=scales,
        raw_profiles=np.stack([r[1] for r in results]),
        seeds=seeds,
        config_hash=config.digest(),
        hull_vertices=[r[2] for r in results if r[2] is not None],
    )


@dataclass(frozen=True)
class LevyRow:
    x: float
    lhs: float  # P(max_k |S_k| >= x)
    rhs: float  # P(|S_n| >= x)
    se: float  # standard error of lhs - 2 rhs
    bound: float  # 2 rhs + 3 se
    passed: bool
    rhs_exact: float  # 2 (1 - Phi(x / sqrt(n)))
    rhs_se: float  # binomial SE of rhs at the exact probability
    rhs_consistent: bool  # |rhs - rhs_exact| <= 4 rhs_se


def default_x_grid(n: int, points: int = 10) -> np.ndarray:
    return math.sqrt(n) * np.linspace(0.0, 3.0, points)


def levy_check(n: int, x_grid=None, trials: int = 100_000, seed: int = 0) -> list[LevyRow]:
    """Monte Carlo check of P(max_{k<=n} |S_k| >= x) <= 2 P(|S_n| >= x).

    S_k is a standard normal random walk. Trials are drawn in blocks, each
    from its own derived stream.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if trials < MIN_LEVY_TRIALS:
        raise ParameterError(f"trials must be >= {MIN_LEVY_TRIALS}, got {trials}")
    xs = default_x_grid(n) if x_grid is None else np.asarray(x_grid, dtype=float)
    if np.any(xs < 0):
        raise ParameterError("x grid values must be >= 0")
    block = max(1, min(trials, (1 << 22) // n))
    hit_l = np.zeros(len(xs))
    hit_r = np.zeros(len(xs))
    hit_lr = np.zeros(len(xs))
    done = 0
    b = 0
    while done < trials:
        size = min(block, trials - done)
        gen = make_generator(seed, b)
        s = np.cumsum(gen.standard_normal((size, n)), axis=1)
        mx = np.abs(s).max(axis=1)
        last = np.abs(s[:, -1])
        il = mx[:, None] >= xs[None, :]
        ir = last[:, None] >= xs[None, :]
        hit_l += il.sum(0)
        hit_r += ir.sum(0)
        hit_lr += (il & ir).sum(0)
        done += size
        b += 1
    lhs, rhs, both = hit_l / trials, hit_r / trials, hit_lr / trials
    # Var(I_l - 2 I_r) from the per-trial indicators
    var = lhs + 4 * rhs - 4 * both - (lhs - 2 * rhs) ** 2
    se = np.sqrt(np.maximum(var, 0.0) / trials)
    exact = 2.0 * norm.sf(xs / math.sqrt(n))
    exact = np.minimum(exact, 1.0)
    rhs_se = np.sqrt(exact * (1 - exact) / trials)
    rows = []
    for i, x in enumerate(xs):
        bound = 2 * rhs[i] + 3 * se[i]
        rows.append(LevyRow(float(x), float(lhs[i]), float(rhs[i]), float(se[i]), float(bound),
                            bool(lhs[i] <= bound), float(exact[i]), float(rhs_se[i]),
                            bool(abs(rhs[i] - exact[i]) <= 4 * rhs_se[i])))
    return rows


def point_distance(points: np.ndarray, target, grid: DirectionGrid) -> np.ndarray:
    """Distance from each point to a convex target, max(0, max_i <y, theta_i> - h(theta_i)).

    Exact in d = 1; in d >= 2 the maximum runs over the grid directions only.
    """
    if grid.d == 1:
        iv = target_interval(target)
        y = points[:, 0]
        return np.maximum(np.maximum(iv.lo - y, y - iv.hi), 0.0)
    h = target_profile(target, grid).values
    out = np.zeros(len(points))
    step = max(1, (1 << 22) // grid.m)
    for i in range(0, len(points), step):
        gap = project(points[i : i + step], grid.directions) - h
        out[i : i + step] = np.maximum(gap.max(axis=1), 0.0)
    return out


@dataclass(frozen=True)
class RateRow:
    n: int
    prob: float
    n_times_prob: float
    se: float
    exceedances: int
    trials: int


def rate_probe(spec: SequenceSpec, eps: float, n_grid, trials: int, seed: int = 0,
               target=None, grid_m: int | None = None) -> list[RateRow]:
    """Empirical P{d(X_n / b(n), E) > eps} at each n (exploratory, no pass/fail).

    X_n is drawn from its exact marginal law; ``target`` defaults to the
    sequence's limit set.
    """
    if spec.d > 2:
        raise ParameterError("rate_probe supports d = 1 and d = 2")
    target = spec.limit_set() if target is None else target
    grid = make_direction_grid(spec.d, grid_m)
    rows = []
    for j, n in enumerate(n_grid):
        bn = eval_b(n)
        hits = 0
        done = 0
        blk = 0
        while done < trials:
            size = min(1 << 20, trials - done)
            gen = make_generator(derive_seed(seed, j), blk)
            y = marginal(spec, int(n), size, gen) / bn
            hits += int(np.count_nonzero(point_distance(y, target, grid) > eps))
            done += size
            blk += 1
        p = hits / trials
        rows.append(RateRow(int(n), p, n * p, math.sqrt(p * (1 - p) / trials), hits, trials))
    return rows


@dataclass(frozen=True)
class Lemma1Row:
    n: int
    q90: float  # 0.9-quantile over paths of max_{k<=n} Y_k / b(n)
    bound: float
    passed: bool


def lemma1_probe(spec: SequenceSpec, n_grid, paths: int, sigma: float = 1.0, seed: int = 0,
                 threads: int | None = None) -> list[Lemma1Row]:
    """Upper-quantile trajectory of max_{k<=n} Y_k / b(n) for a scalar sequence.

    Passes when the 0.9-quantile at the largest n is at most 1.1 * sigma.
    """
    if spec.d != 1:
        raise ParameterError("lemma1_probe needs a scalar (d = 1) sequence")
    cps = tuple(int(n) for n in n_grid)
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ParameterError("n grid must be strictly increasing")
    check_domain(Normalizer("b"), cps)
    grid = make_direction_grid(1)
    seeds = path_seeds(seed, paths)

    def one(i):
        return [t.max1d for t in stream_path(spec, seeds[i], cps, grid)]

    maxima = np.array(_map_paths(one, paths, threads))
    ratios = maxima / np.array([eval_b(n) for n in cps])[None, :]
    q90 = np.quantile(ratios, 0.9, axis=0)
    bound = 1.1 * sigma
    # the verdict is the last row's; earlier rows show the trajectory
    return [Lemma1Row(n, float(q), bound, bool(q <= bound)) for n, q in zip(cps, q90)]
