"""Earthquake-ray error constant per box.

For each random lamination and lambda-generic box the error of the normalized
mass behaves like C(Q, lam) / t.  This prints C = t * err at every t, the worst
boxes first, together with the distance from the box corners to the nearest
leaf endpoint, which is what makes C large.
"""
import argparse
import math

import numpy as np

from teichquake import PiecewiseMobiusHomeo, earthquake_ray_masses
from teichquake.generators import lamination_endpoints, random_generic_box, random_lamination


def corner_gap(q, lam):
    ends = lamination_endpoints(lam)
    gaps = [abs((c - e + math.pi) % (2 * math.pi) - math.pi) for c in q.angles() for e in ends]
    return min(gaps) if gaps else math.inf


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=105)
    ap.add_argument("--laminations", type=int, default=20)
    ap.add_argument("--boxes", type=int, default=20)
    ap.add_argument("--margin", type=float, default=0.05)
    ap.add_argument("--top", type=int, default=10)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    ts = [10.0, 20.0, 50.0, 100.0, 200.0]
    out = []
    for i in range(args.laminations):
        lam = random_lamination(rng, int(rng.integers(1, 9)))
        boxes = [random_generic_box(rng, lam, margin=args.margin, min_gap=args.margin) for _ in range(args.boxes)]
        rows = earthquake_ray_masses(PiecewiseMobiusHomeo.identity(), lam, ts, boxes)
        for k, q in enumerate(boxes):
            errs = [r.abs_err for r in rows if r.box_id == k]
            out.append((errs[-1], i, k, [e * t for e, t in zip(errs, ts)], corner_gap(q, lam), float(lam.mass(q))))
    out.sort(reverse=True)
    print("lam box  err@200   corner_gap  mass   t*err at t=" + ",".join(f"{t:g}" for t in ts))
    for err, i, k, c, gap, mass in out[: args.top]:
        print(f"{i:3d} {k:3d}  {err:.5f}  {gap:.4f}     {mass:.3f}  " + " ".join(f"{x:.3f}" for x in c))
    print(f"{sum(o[0] >= 0.02 for o in out)}/{len(out)} boxes with err@200 >= 0.02")


if __name__ == "__main__":
    main()
