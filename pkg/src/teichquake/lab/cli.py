"""``lab <experiment> --config <file> [--out <dir>] [--seed N] [--tol X]``.

Exit status: 0 when every row passes, 2 when any row misses its threshold,
1 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

from ..errors import GeometryError
from .experiments import EXPERIMENTS, load_config, run


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lab", description=__doc__.splitlines()[0])
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", required=True, help="JSON config file (see docs/config.md)")
    ap.add_argument("--out", default=None, help="output directory (default from config or ./lab_out)")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--tol", type=float, default=None, help="override the experiment's main tolerance")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.experiment, seed=args.seed, tol=args.tol, out=args.out)
        result = run(cfg)
    except (OSError, json.JSONDecodeError, GeometryError, KeyError, TypeError) as exc:
        print(f"lab: invalid input: {exc}", file=sys.stderr)
        return 1
    print(result.summary_line())
    return 0 if result.n_fail == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
