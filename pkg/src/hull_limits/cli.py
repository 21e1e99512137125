"""Command-line front end: ``hull-limits <subcommand> ...``.

Every subcommand writes CSV files (the output contract), a manifest.json and,
where it makes sense, an SVG plot into ``--out``.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import DomainError, ParameterError
from .experiments import ExperimentConfig, levy_check, lemma1_probe, rate_probe, run_convergence
from .geometry import Polytope, grid_error_bound, make_direction_grid
from .io import (
    PROBE_KEYS,
    RUN_KEYS,
    SEQUENCE_KEYS,
    check_keys,
    checkpoints_from_config,
    curve_svg,
    hull_svg,
    load_config,
    normalizer_from_config,
    polygon_of_target,
    sequence_from_config,
    target_from_config,
    write_csv,
    write_curve,
)
from .normalizers import Normalizer
from .rng import derive_seed, path_seeds
from .sequences import SequenceSpec
from .tracker import geometric_checkpoints

THREADS_ENV = "HULL_LIMITS_THREADS"


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParameterError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, config: dict, seed: int, started: str, **extra):
    manifest = {
        "tool": "hull-limits",
        "version": __version__,
        "command": command,
        "config": config,
        "master_seed": seed,
        **extra,
        "started": started,
        "finished": _now(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(float(v)) for v in text.split(",") if v.strip()]


def build_experiment(cfg: dict) -> ExperimentConfig:
    check_keys(cfg, SEQUENCE_KEYS | RUN_KEYS)
    spec = sequence_from_config(cfg)
    return ExperimentConfig(
        spec=spec,
        target=target_from_config(cfg, spec),
        normalizer=normalizer_from_config(cfg),
        checkpoints=tuple(checkpoints_from_config(cfg)),
        paths=int(cfg.get("paths", 100)),
        master_seed=int(cfg.get("seed", 0)),
        grid_m=cfg.get("grid_m"),
        keep_hull=bool(cfg.get("keep_hull", False)),
    )


def cmd_converge(args) -> int:
    started = _now()
    cfg = dict(load_config(args.config))
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.paths is not None:
        cfg["paths"] = args.paths
    config = build_experiment(cfg)
    curve = run_convergence(config, threads=_threads(args))
    out = _out_dir(args.out)
    write_curve(out / "curve.csv", curve)
    if cfg.get("plot", True):
        (out / "plot.svg").write_text(curve_svg(curve, f"{config.spec.kind}: distance to target, g = {config.normalizer.label}"))
    grid = config.grid()
    _write_manifest(out, "converge", cfg, config.master_seed, started, config_hash=curve.config_hash,
                    path_seeds=curve.seeds, grid={"d": grid.d, "m": grid.m, "kind": grid.kind})
    print(f"wrote {out / 'curve.csv'} ({config.paths} paths x {len(config.checkpoints)} checkpoints)")
    return 0


LEVY_HEADER = ["n", "x", "lhs", "rhs", "se", "bound", "pass", "rhs_exact", "rhs_se", "rhs_consistent"]


def cmd_levy(args) -> int:
    started = _now()
    seed = args.seed if args.seed is not None else 0
    ns = _ints(args.n)
    xgrid = _floats(args.xgrid) if args.xgrid else None
    rows = []
    for n in ns:
        for r in levy_check(n, xgrid, args.trials, derive_seed(seed, n)):
            rows.append([n, r.x, r.lhs, r.rhs, r.se, r.bound, r.passed, r.rhs_exact, r.rhs_se, r.rhs_consistent])
    out = _out_dir(args.out)
    write_csv(out / "levy.csv", LEVY_HEADER, rows)
    _write_manifest(out, "levy", {"n": ns, "trials": args.trials, "xgrid": xgrid}, seed, started)
    failed = sum(1 for r in rows if not r[6])
    print(f"levy: {len(rows) - failed}/{len(rows)} grid points pass")
    return 0


def _probe_config(args) -> dict:
    cfg = dict(load_config(args.config)) if args.config else {}
    if args.sequence:
        cfg["sequence"] = args.sequence
    if getattr(args, "phi", None) is not None:
        cfg["phi"] = args.phi
    cfg.setdefault("sequence", "iid")
    check_keys(cfg, SEQUENCE_KEYS | PROBE_KEYS)
    return cfg


RATE_HEADER = ["n", "prob", "n_times_prob", "se", "exceedances", "trials"]


def cmd_rate(args) -> int:
    started = _now()
    cfg = _probe_config(args)
    spec = sequence_from_config(cfg)
    eps = args.eps if args.eps is not None else float(cfg.get("eps", 0.5))
    n_grid = _ints(args.n_grid) if args.n_grid else [int(v) for v in cfg.get("n_grid", [100, 1000, 10000])]
    trials = args.trials if args.trials is not None else int(cfg.get("trials", 1_000_000))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    rows = rate_probe(spec, eps, n_grid, trials, seed, grid_m=cfg.get("grid_m"))
    out = _out_dir(args.out)
    write_csv(out / "rate.csv", RATE_HEADER,
              [[r.n, r.prob, r.n_times_prob, r.se, r.exceedances, r.trials] for r in rows])
    _write_manifest(out, "rate", {**cfg, "eps": eps, "n_grid": n_grid, "trials": trials}, seed, started)
    print(f"wrote {out / 'rate.csv'} (exploratory, no pass/fail)")
    return 0


LEMMA1_HEADER = ["n", "q90", "bound", "pass"]


def cmd_lemma1(args) -> int:
    started = _now()
    cfg = _probe_config(args)
    spec = sequence_from_config(cfg)
    n_grid = _ints(args.n_grid) if args.n_grid else [int(v) for v in cfg.get("n_grid", [1000, 10_000, 100_000, 1_000_000])]
    paths = args.paths if args.paths is not None else int(cfg.get("paths", 100))
    sigma = args.sigma_bound if args.sigma_bound is not None else float(cfg.get("sigma_bound", 1.0))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    rows = lemma1_probe(spec, n_grid, paths, sigma, seed, threads=_threads(args))
    out = _out_dir(args.out)
    write_csv(out / "lemma1.csv", LEMMA1_HEADER, [[r.n, r.q90, r.bound, r.passed] for r in rows])
    _write_manifest(out, "lemma1", {**cfg, "n_grid": n_grid, "paths": paths, "sigma_bound": sigma}, seed,
                    started, path_seeds=path_seeds(seed, paths))
    print(f"lemma1: q90 at n={rows[-1].n} is {rows[-1].q90:.4f} (bound {rows[-1].bound:.4f}) -> "
          f"{'pass' if rows[-1].passed else 'FAIL'}")
    return 0


def _vectors(text: str) -> list[list[float]]:
    return [_floats(part) for part in text.split(";") if part.strip()]


def cmd_polytope_demo(args) -> int:
    started = _now()
    lines = _vectors(args.lines)
    if not lines or any(len(a) != 2 for a in lines):
        raise ParameterError("polytope-demo needs --lines with 2-D vectors, e.g. '1,0;0,1'")
    weights = _floats(args.weights) if args.weights else None
    seed = args.seed if args.seed is not None else 0
    spec = SequenceSpec.polytope_lines(lines, weights)
    target = Polytope.symmetric(lines)
    if args.n < 3:
        raise DomainError(f"n={args.n} is outside the domain of normalizer b (t > e)")
    cps = [c for c in geometric_checkpoints(args.n, min(args.checkpoint_start, args.n)) if c >= 3]
    config = ExperimentConfig(spec, target, Normalizer("b"), tuple(cps), args.paths or 1, seed,
                              args.grid_m, keep_hull=True)
    curve = run_convergence(config, threads=_threads(args))
    out = _out_dir(args.out)
    write_curve(out / "curve.csv", curve)
    hull = curve.hull_vertices[0]
    write_csv(out / "hull.csv", ["x", "y"], hull.tolist())
    tv = polygon_of_target(target)
    write_csv(out / "target.csv", ["x", "y"], tv.tolist())
    (out / "plot.svg").write_text(hull_svg(hull, tv, f"conv(X_1..X_n) / b(n), n = {args.n}"))
    cfg = {"lines": lines, "weights": spec.weights.tolist(), "n": args.n, "paths": config.paths,
           "checkpoint_start": args.checkpoint_start, "grid_m": config.grid().m}
    _write_manifest(out, "polytope-demo", cfg, seed, started, config_hash=curve.config_hash,
                    path_seeds=curve.seeds)
    print(f"polytope-demo: median grid-Hausdorff at n={cps[-1]} is {curve.median[-1]:.4f}")
    return 0


def cmd_grid_info(args) -> int:
    grid = make_direction_grid(args.dim, args.m)
    print(f"d={grid.d} M={grid.m} kind={grid.kind}")
    if grid.d == 1:
        print("grid Hausdorff distance is exact in d=1")
    elif grid.d == 2:
        print(f"under-estimate bound for bodies in a ball of radius {args.radius}: "
              f"{grid_error_bound(args.radius, grid.m):.6g}")
    else:
        print("grid Hausdorff distance is a lower bound in d>=3")
    if args.out:
        out = _out_dir(args.out)
        write_csv(out / "directions.csv", [f"x{j}" for j in range(grid.d)], grid.directions.tolist())
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hull-limits", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=True):
        sp.add_argument("--out", required=out_required, help="output directory")
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--threads", type=int, help=f"worker threads (default ${THREADS_ENV} or 1)")

    sp = sub.add_parser("converge", help="convergence curve of normalized hulls")
    sp.add_argument("--config", required=True)
    sp.add_argument("--paths", type=int)
    common(sp)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("levy", help="Monte Carlo check of the maximal inequality for random walks")
    sp.add_argument("--n", default="1,10,1000", help="comma-separated walk lengths")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--xgrid", help="comma-separated x values (default: 10 points in [0, 3 sqrt(n)])")
    common(sp)
    sp.set_defaults(func=cmd_levy)

    for name, func, help_ in (("rate", cmd_rate, "single-point exceedance probabilities (exploratory)"),
                              ("lemma1", cmd_lemma1, "upper quantiles of max_k Y_k / b(n)")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="flat config with sequence keys")
        sp.add_argument("--sequence", help="sequence kind (overrides config)")
        sp.add_argument("--phi", type=float)
        sp.add_argument("--n-grid", dest="n_grid", help="comma-separated n values")
        if name == "rate":
            sp.add_argument("--eps", type=float)
            sp.add_argument("--trials", type=int)
        else:
            sp.add_argument("--paths", type=int)
            sp.add_argument("--sigma-bound", dest="sigma_bound", type=float)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("polytope-demo", help="hull of line-concentrated draws vs the polytope conv{+-a_k}")
    sp.add_argument("--lines", default="1,0;0,1", help="direction vectors, e.g. '1,0;0,1'")
    sp.add_argument("--weights", help="category probabilities, e.g. '0.5,0.5'")
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--paths", type=int, default=1)
    sp.add_argument("--grid-m", dest="grid_m", type=int, default=512)
    sp.add_argument("--checkpoint-start", dest="checkpoint_start", type=int, default=100)
    common(sp)
    sp.set_defaults(func=cmd_polytope_demo)

    sp = sub.add_parser("grid-info", help="describe a direction grid")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--m", type=int)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_grid_info)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
