"""Config parsing, CSV output and SVG plots.

Config files are flat TOML: one ``key = value`` per line, no tables. Keys:

    sequence          iid | scaled-iid | ar1 | walk | polytope-lines   (required)
    dim               dimension for iid / ar1 / walk (default 1)
    sigma             covariance: number (d = 1) or matrix (iid, scaled-iid)
    amplitude         scaled-iid: s_n = 1 + amplitude * n**(-exponent) (default 1.0)
    exponent          (default 0.5)
    phi               ar1 coefficient, |phi| < 1
    lines             polytope-lines: list of direction vectors a_k
    weights           polytope-lines: category probabilities p_k (default uniform)
    target            limit (default) | interval | ellipsoid | polytope
    target_lo, target_hi       interval target
    target_sigma               ellipsoid target
    target_vertices            polytope target (explicit vertices)
    target_generators          polytope target conv{+-a_k}
    normalizer        b (default) | c | iterated-log | constant | user-table
    normalizer_k, normalizer_alpha, normalizer_value,
    normalizer_table_t, normalizer_table_g
    checkpoints       explicit list of n, or
    checkpoint_max, checkpoint_start (100), checkpoint_ratio (2.0)
    paths             number of paths (default 100)
    seed              master seed (default 0)
    grid_m            number of grid directions (default 512 in 2-D, 1024 in 3-D)
    keep_hull         keep exact 2-D hulls (default false)
    plot              write plot.svg (default true)
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np
import tomli

from .errors import ParameterError
from .geometry import Ellipsoid, Interval, Polytope, convex_hull_2d
from .normalizers import Normalizer
from .sequences import KINDS, SequenceSpec
from .tracker import geometric_checkpoints


class ConfigError(ParameterError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


SEQUENCE_KEYS = {"sequence", "dim", "sigma", "amplitude", "exponent", "phi", "lines", "weights"}
RUN_KEYS = {
    "target", "target_lo", "target_hi", "target_sigma", "target_vertices", "target_generators",
    "normalizer", "normalizer_k", "normalizer_alpha", "normalizer_value", "normalizer_table_t",
    "normalizer_table_g", "checkpoints", "checkpoint_max", "checkpoint_start", "checkpoint_ratio",
    "paths", "seed", "grid_m", "keep_hull", "plot",
}
PROBE_KEYS = {"eps", "n_grid", "trials", "sigma_bound", "paths", "seed", "grid_m"}


def load_config(path) -> dict:
    """Read a flat config file, or the config echoed inside a run manifest."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"cannot parse {path}: {exc}") from exc
        cfg = data.get("config", data)
    else:
        try:
            cfg = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            raise ParameterError(f"cannot parse {path}: {exc}") from exc
    for key, value in cfg.items():
        if isinstance(value, dict):
            raise ConfigError(key, "nested tables are not supported; use flat key = value lines")
    return cfg


def check_keys(cfg: dict, allowed: set):
    for key in cfg:
        if key not in allowed:
            raise ConfigError(key, "unknown key")


def _get(cfg, key, conv, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(key, "required")
        return default
    try:
        return conv(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, f"invalid value {cfg[key]!r} ({exc})") from exc


def _matrix(v):
    m = np.atleast_2d(np.asarray(v, dtype=float))
    if m.ndim != 2:
        raise ValueError("expected a number or a matrix")
    return m


def _int(v):
    if isinstance(v, bool) or int(v) != v:
        raise ValueError("expected an integer")
    return int(v)


def _bool(v):
    if not isinstance(v, bool):
        raise ValueError("expected true or false")
    return v


def sequence_from_config(cfg: dict) -> SequenceSpec:
    kind = _get(cfg, "sequence", str, required=True)
    if kind not in KINDS:
        raise ConfigError("sequence", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    d = _get(cfg, "dim", _int, 1)
    try:
        if kind in ("iid", "scaled-iid"):
            sigma = _get(cfg, "sigma", _matrix, np.eye(d))
            if kind == "iid":
                return SequenceSpec.iid(sigma)
            return SequenceSpec.scaled_iid(sigma, amplitude=_get(cfg, "amplitude", float, 1.0),
                                           exponent=_get(cfg, "exponent", float, 0.5))
        if kind == "ar1":
            return SequenceSpec.ar1(_get(cfg, "phi", float, required=True), d=d)
        if kind == "walk":
            return SequenceSpec.walk(d=d)
        return SequenceSpec.polytope_lines(_get(cfg, "lines", _matrix, required=True),
                                           _get(cfg, "weights", lambda v: np.asarray(v, float)))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("sequence", str(exc)) from exc


def target_from_config(cfg: dict, spec: SequenceSpec):
    kind = _get(cfg, "target", str, "limit")
    try:
        if kind == "limit":
            return spec.limit_set()
        if kind == "interval":
            return Interval(_get(cfg, "target_lo", float, required=True), _get(cfg, "target_hi", float, required=True))
        if kind == "ellipsoid":
            return Ellipsoid(_get(cfg, "target_sigma", _matrix, required=True))
        if kind == "polytope":
            if "target_generators" in cfg:
                return Polytope.symmetric(_get(cfg, "target_generators", _matrix))
            return Polytope(_get(cfg, "target_vertices", _matrix, required=True))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("target", str(exc)) from exc
    raise ConfigError("target", f"unknown target {kind!r}; expected limit, interval, ellipsoid or polytope")


def normalizer_from_config(cfg: dict) -> Normalizer:
    try:
        return Normalizer(
            kind=_get(cfg, "normalizer", str, "b"),
            k=_get(cfg, "normalizer_k", _int, 1),
            alpha=_get(cfg, "normalizer_alpha", float, 0.5),
            value=_get(cfg, "normalizer_value", float, 1.0),
            table_t=tuple(_get(cfg, "normalizer_table_t", list, [])),
            table_g=tuple(_get(cfg, "normalizer_table_g", list, [])),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("normalizer", str(exc)) from exc


def checkpoints_from_config(cfg: dict) -> list[int]:
    if "checkpoints" in cfg:
        cps = _get(cfg, "checkpoints", lambda v: [_int(x) for x in v])
        if not cps:
            raise ConfigError("checkpoints", "must not be empty")
        return cps
    n_max = _get(cfg, "checkpoint_max", _int)
    if n_max is None:
        raise ConfigError("checkpoints", "required (or give checkpoint_max)")
    try:
        return geometric_checkpoints(n_max, _get(cfg, "checkpoint_start", _int, 100),
                                     _get(cfg, "checkpoint_ratio", float, 2.0))
    except ParameterError as exc:
        raise ConfigError("checkpoint_max", str(exc)) from exc


def fmt(x) -> str:
    """Full double precision (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else v if isinstance(v, str) else fmt(v) for v in row])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


CURVE_HEADER = ["n", "path_id", "distance", "q10", "q50", "q90"]


def write_curve(path, curve):
    rows = []
    for j, n in enumerate(curve.checkpoints):
        for i in range(curve.distances.shape[0]):
            rows.append([n, i, curve.distances[i, j], None, None, None])
    for j, n in enumerate(curve.checkpoints):
        q = curve.quantiles[j]
        rows.append([n, "AGG", None, q[0], q[1], q[2]])
    write_csv(path, CURVE_HEADER, rows)


# --- SVG -------------------------------------------------------------------

_W, _H, _PAD = 480, 360, 48


def _svg(body: list[str], title: str) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">')
    return "\n".join([head, f'<rect width="{_W}" height="{_H}" fill="white"/>',
                      f'<text x="{_W / 2}" y="18" text-anchor="middle">{title}</text>', *body, "</svg>\n"])


def _pts(xy) -> str:
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in xy)


def curve_svg(curve, title: str = "distance to target") -> str:
    n = np.log10(curve.checkpoints.astype(float))
    q = curve.quantiles
    x0, x1 = n.min(), n.max() if n.max() > n.min() else n.min() + 1
    y1 = max(float(q.max()), 1e-12) * 1.1
    sx = lambda v: _PAD + (v - x0) / (x1 - x0) * (_W - 2 * _PAD)
    sy = lambda v: _H - _PAD - v / y1 * (_H - 2 * _PAD)
    band = [(sx(a), sy(b)) for a, b in zip(n, q[:, 0])] + [(sx(a), sy(b)) for a, b in zip(n[::-1], q[::-1, 2])]
    body = [
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<polygon points="{_pts(band)}" fill="#9ecae1" fill-opacity="0.6"/>',
        f'<polyline points="{_pts([(sx(a), sy(b)) for a, b in zip(n, q[:, 1])])}" fill="none" stroke="#08519c" stroke-width="2"/>',
        f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle">log10 n</text>',
        f'<text x="{_PAD - 6}" y="{sy(0):.1f}" text-anchor="end">0</text>',
        f'<text x="{_PAD - 6}" y="{sy(y1 / 1.1):.1f}" text-anchor="end">{y1 / 1.1:.3g}</text>',
    ]
    for a in np.unique(np.floor(n)):
        body.append(f'<text x="{sx(a):.1f}" y="{_H - _PAD + 14}" text-anchor="middle">{int(a)}</text>')
    return _svg(body, title)


def hull_svg(hull: np.ndarray, target_vertices: np.ndarray, title: str = "normalized hull vs target") -> str:
    both = np.vstack([hull.reshape(-1, 2), target_vertices.reshape(-1, 2)])
    r = max(float(np.abs(both).max()), 1e-12) * 1.15
    scale = (min(_W, _H) - 2 * _PAD) / (2 * r)
    cx, cy = _W / 2, _H / 2 + 8
    tr = lambda p: (cx + p[0] * scale, cy - p[1] * scale)
    body = [
        f'<line x1="{cx - r * scale:.1f}" y1="{cy}" x2="{cx + r * scale:.1f}" y2="{cy}" stroke="#bbb"/>',
        f'<line x1="{cx}" y1="{cy - r * scale:.1f}" x2="{cx}" y2="{cy + r * scale:.1f}" stroke="#bbb"/>',
        f'<polygon points="{_pts(tr(p) for p in target_vertices)}" fill="none" stroke="#d62728" stroke-width="2" stroke-dasharray="6 3"/>',
        f'<polygon points="{_pts(tr(p) for p in hull)}" fill="#1f77b4" fill-opacity="0.25" stroke="#1f77b4" stroke-width="1.5"/>',
        f'<text x="{_PAD}" y="{_H - 12}">blue: hull / b(n)   red dashed: target</text>',
    ]
    return _svg(body, title)


def polygon_of_target(target) -> np.ndarray:
    if isinstance(target, Polytope):
        return convex_hull_2d(target.vertices)
    t = np.linspace(0.0, 2 * math.pi, 361)[:-1]
    w, v = np.linalg.eigh(target.sigma)
    root = v * np.sqrt(np.clip(w, 0, None))
    return np.column_stack([np.cos(t), np.sin(t)]) @ root.T
