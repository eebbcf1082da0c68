"""Run every experiment config in configs/ and print one summary line each."""
import argparse
import sys
from pathlib import Path

from teichquake.lab import load_config, run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--configs", default=str(Path(__file__).resolve().parent.parent / "configs"))
    ap.add_argument("--out", default="lab_out")
    args = ap.parse_args(argv)
    failed = 0
    for path in sorted(Path(args.configs).glob("*.json")):
        res = run(load_config(path, out=args.out))
        print(res.summary_line())
        failed += res.n_fail > 0
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
