"""Pre-register Monte Carlo acceptance bands.

Runs an oracle simulation that does not use the package's generators or
tracker: plain numpy streams, scipy's qhull for 2-D hulls, and closed-form
hulls for line-concentrated draws. For each statistic it stores the oracle
per-path values summary and a band for the median over P paths, taken as the
[0.05%, 99.95%] range of bootstrap medians of P paths drawn from the oracle's
paths. Output: tests/data/bands.json.

    python scripts/preregister_bands.py [--paths 1000] [--out tests/data/bands.json]
"""

import argparse
import json
import math
import time
from pathlib import Path

import numpy as np
from scipy.signal import lfilter
from scipy.spatial import ConvexHull

ORACLE_SEED = 20_26_10_17
DECADES_1D = [10**3, 10**4, 10**5, 10**6]
DECADES_WALK = [10**3, 10**4, 10**5, 10**6, 10**7]


def b(t):
    return math.sqrt(2 * math.log(t))


def c(t):
    return math.sqrt(2 * math.log(math.log(t)))


def median_band(values, size, rng, reps=20000, alpha=0.001):
    values = np.asarray(values)
    idx = rng.integers(0, len(values), size=(reps, size))
    meds = np.median(values[idx], axis=1)
    lo, hi = np.quantile(meds, [alpha / 2, 1 - alpha / 2])
    return [float(lo), float(hi)]


def summary(values):
    q = np.quantile(values, [0.05, 0.1, 0.5, 0.9, 0.95])
    return dict(zip(["q05", "q10", "q50", "q90", "q95"], map(float, q)))


def one_dim(kind, paths, rng):
    """Per path, Hausdorff distance of [min, max] / b(n) to [-1, 1] at each decade."""
    n_max = DECADES_1D[-1]
    out = np.empty((paths, len(DECADES_1D)))
    k = np.arange(1, n_max + 1, dtype=float)
    for p in range(paths):
        z = rng.standard_normal(n_max)
        if kind == "iid":
            x = z
        elif kind == "ar1":
            phi = 0.5
            x = np.empty(n_max)
            x[0] = z[0]
            x[1:] = lfilter([math.sqrt(1 - phi**2)], [1, -phi], z[1:], zi=[phi * z[0]])[0]
        else:
            x = (1 + k**-0.5) * z
        for j, n in enumerate(DECADES_1D):
            bn = b(n)
            out[p, j] = max(abs(x[:n].max() / bn - 1), abs(x[:n].min() / bn + 1))
    return out


def walk(paths, rng):
    """Per path, V(n) = max_{k<=n} S_k / sqrt(k) at each decade."""
    out = np.empty((paths, len(DECADES_WALK)))
    for p in range(paths):
        s, v, start = 0.0, -np.inf, 1
        for j, n in enumerate(DECADES_WALK):
            for lo in range(start, n + 1, 1 << 22):
                hi = min(n, lo + (1 << 22) - 1)
                part = np.cumsum(rng.standard_normal(hi - lo + 1)) + s
                s = part[-1]
                v = max(v, float((part / np.sqrt(np.arange(lo, hi + 1))).max()))
            start = n + 1
            out[p, j] = v
    return out


def grid2(m=512):
    a = 2 * np.pi * np.arange(m) / m
    return np.column_stack([np.cos(a), np.sin(a)])


def diamond(paths, rng, ns=(10**4, 10**6)):
    th = grid2()
    h_target = np.abs(th).max(axis=1)
    out = np.empty((paths, len(ns)))
    for p in range(paths):
        cat = rng.random(ns[-1]) < 0.5
        zeta = rng.standard_normal(ns[-1])
        for j, n in enumerate(ns):
            pts = []
            for mask, axis in ((cat[:n], 0), (~cat[:n], 1)):
                zz = zeta[:n][mask]
                for val in (zz.max(), zz.min()):
                    v = np.zeros(2)
                    v[axis] = val
                    pts.append(v)
            h = (np.array(pts) @ th.T).max(axis=0) / b(n)
            out[p, j] = np.abs(h - h_target).max()
    return out


def ellipse(paths, rng, ns=(10**4, 10**6)):
    th = grid2()
    sd = np.array([2.0, 1.0])
    h_target = np.sqrt((th**2 * sd**2).sum(axis=1))
    dist = np.empty((paths, len(ns)))
    ratio_lo = np.empty(paths)
    ratio_hi = np.empty(paths)
    for p in range(paths):
        x = rng.standard_normal((ns[-1], 2)) * sd
        for j, n in enumerate(ns):
            hull = x[:n][ConvexHull(x[:n]).vertices]
            h = (hull @ th.T).max(axis=0) / b(n)
            dist[p, j] = np.abs(h - h_target).max()
        r = h / h_target
        ratio_lo[p], ratio_hi[p] = r.min(), r.max()
    return dist, ratio_lo, ratio_hi


def gumbel_median_1d(n):
    """Median of max(1 - M+/b, 1 + M-/b) with both extremes Gumbel(b', 1/b),
    b' = b - (ln ln n + ln 4 pi) / (2 b); the median of the minimum of two
    independent Gumbels sits at standardized value -ln(-ln(1 - 2^-1/2))."""
    bn = b(n)
    loc = bn - (math.log(math.log(n)) + math.log(4 * math.pi)) / (2 * bn)
    z = -math.log(-math.log(1 - 2**-0.5))
    return 1 - (loc + z / bn) / bn


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=1000)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "data" / "bands.json"))
    args = ap.parse_args()
    P = args.paths
    root = np.random.SeedSequence(ORACLE_SEED)
    streams = [np.random.default_rng(s) for s in root.spawn(8)]
    boot = streams[7]
    res = {"oracle_paths": P, "oracle_seed": ORACLE_SEED, "band_rule": "bootstrap medians, 0.05%..99.95%"}
    t0 = time.time()

    curves = {}
    for i, kind in enumerate(["iid", "ar1", "scaled-iid"]):
        d = one_dim(kind, P, streams[i])
        curves[kind] = d
        res[f"{kind}_1d"] = {
            "checkpoints": DECADES_1D,
            "median_by_checkpoint": np.median(d, axis=0).tolist(),
            "final": summary(d[:, -1]),
            "median100_band_final": median_band(d[:, -1], 100, boot),
        }
        print(kind, np.median(d, axis=0), f"{time.time() - t0:.0f}s", flush=True)
    res["iid_1d"]["gumbel_median_estimate"] = {str(n): gumbel_median_1d(n) for n in DECADES_1D}
    for kind in ("ar1", "scaled-iid"):
        ratios = [np.median(curves[kind][boot.integers(0, P, 100), -1]) /
                  np.median(curves["iid"][boot.integers(0, P, 100), -1]) for _ in range(20000)]
        res[f"{kind}_1d"]["median100_ratio_to_iid_band"] = [float(q) for q in np.quantile(ratios, [0.0005, 0.9995])]

    v = walk(P, streams[3])
    bs = np.array([b(n) for n in DECADES_WALK])
    cs = np.array([c(n) for n in DECADES_WALK])
    res["walk"] = {
        "checkpoints": DECADES_WALK,
        "median_V_over_b": np.median(v / bs, axis=0).tolist(),
        "median_V_over_c": np.median(v / cs, axis=0).tolist(),
        "median100_V_over_b_band": [median_band(v[:, j] / bs[j], 100, boot) for j in range(len(DECADES_WALK))],
        "median100_V_over_c_band": [median_band(v[:, j] / cs[j], 100, boot) for j in range(len(DECADES_WALK))],
    }
    print("walk", res["walk"]["median_V_over_c"], f"{time.time() - t0:.0f}s", flush=True)

    dd = diamond(P, streams[4])
    res["diamond"] = {
        "checkpoints": [10**4, 10**6],
        "median_by_checkpoint": np.median(dd, axis=0).tolist(),
        "median20_band": [median_band(dd[:, j], 20, boot) for j in range(2)],
    }
    print("diamond", res["diamond"]["median_by_checkpoint"], f"{time.time() - t0:.0f}s", flush=True)

    de, rlo, rhi = ellipse(P, streams[5])
    res["ellipse"] = {
        "checkpoints": [10**4, 10**6],
        "median_by_checkpoint": np.median(de, axis=0).tolist(),
        "final": summary(de[:, -1]),
        "median20_band": [median_band(de[:, j], 20, boot) for j in range(2)],
        "support_ratio_min_q01": float(np.quantile(rlo, 0.01)),
        "support_ratio_max_q99": float(np.quantile(rhi, 0.99)),
    }
    print("ellipse", res["ellipse"]["median_by_checkpoint"], f"{time.time() - t0:.0f}s", flush=True)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(res, indent=2) + "\n")
    print("wrote", out)


if __name__ == "__main__":
    main()
