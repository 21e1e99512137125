"""Run every experiment through the CLI and collect outputs under one directory.

    python scripts/run_experiments.py [--out results] [--threads 1] [--quick]

--quick shrinks path counts and horizons so the whole set finishes in about a
minute; the full set takes several minutes on one core.
"""

import argparse
import sys
import time
from pathlib import Path

from hull_limits.cli import main as cli

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = sorted((ROOT / "configs").glob("*.toml"))


def run(argv):
    t0 = time.perf_counter()
    code = cli(argv)
    print(f"  [{'ok' if code == 0 else f'exit {code}'}] {' '.join(argv[:1])} {time.perf_counter() - t0:.1f}s")
    return code


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--threads", default="1")
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    common = ["--threads", args.threads]
    paths = ["--paths", "10"] if args.quick else []
    codes = []
    for cfg in CONFIGS:
        print(cfg.stem)
        codes.append(run(["converge", "--config", str(cfg), "--out", str(out / cfg.stem)] + paths + common))
    print("levy")
    codes.append(run(["levy", "--n", "1,10,1000", "--trials", "10000" if args.quick else "100000",
                      "--out", str(out / "levy")] + common))
    print("rate")
    codes.append(run(["rate", "--eps", "0.5", "--n-grid", "10,100,1000,10000",
                      "--trials", "100000" if args.quick else "10000000", "--out", str(out / "rate")] + common))
    for seq in ("iid", "scaled-iid"):
        print(f"lemma1 {seq}")
        codes.append(run(["lemma1", "--sequence", seq, "--n-grid", "1000,10000,100000" if args.quick else
                          "1000,10000,100000,1000000", "--paths", "20" if args.quick else "100",
                          "--out", str(out / f"lemma1-{seq}")] + common))
    print("polytope-demo")
    codes.append(run(["polytope-demo", "--lines", "1,0;0,1;1,1", "--weights", "0.4,0.4,0.2",
                      "--n", "100000" if args.quick else "1000000", "--out", str(out / "polytope-demo")] + common))
    print("grid-info")
    codes.append(run(["grid-info", "--dim", "2", "--m", "512", "--out", str(out / "grid")]))
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
