"""Vertical rotation interval of the standard map as a function of k.

Writes a CSV of (k, lo, hi, gap) rows and an SVG of the interval envelope.

Usage: python scripts/rotation_interval_scan.py [--kmin 0] [--kmax 3]
       [--steps 25] [--grid 24] [--out-prefix rotscan]
"""

import argparse

import numpy as np

import torusdyn as td
from torusdyn.report import write_csv
from torusdyn.svg import SvgCanvas


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmin", type=float, default=0.0)
    ap.add_argument("--kmax", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=25)
    ap.add_argument("--grid", type=int, default=24)
    ap.add_argument("--n1", type=int, default=200)
    ap.add_argument("--n2", type=int, default=2000)
    ap.add_argument("--out-prefix", default="rotscan")
    args = ap.parse_args()

    seeds = td.seed_grid(args.grid, args.grid)
    rows = []
    for k in np.linspace(args.kmin, args.kmax, args.steps):
        iv = td.estimate_vertical_rotation_set(
            td.make_standard_map(k), seeds, (args.n1, args.n2)
        )
        rows.append((float(k), iv.lo, iv.hi, iv.hausdorff_gap))
        print("k=%.3f  interval [%.4f, %.4f]  gap %.2e" % rows[-1])

    write_csv(args.out_prefix + ".csv", ["k", "lo", "hi", "gap"], rows)

    ks = [r[0] for r in rows]
    los = [r[1] for r in rows]
    his = [r[2] for r in rows]
    c = SvgCanvas((min(ks), max(ks)), (min(los) - 0.2, max(his) + 0.2))
    c.frame()
    c.polyline(np.stack([ks, los], axis=-1), color="#3060c0", width=1.5)
    c.polyline(np.stack([ks, his], axis=-1), color="#c03030", width=1.5)
    c.save(args.out_prefix + ".svg")
    print("wrote %s.csv and %s.svg" % (args.out_prefix, args.out_prefix))


if __name__ == "__main__":
    main()
