"""Homoclinic tangle of the standard map at the hyperbolic fixed point.

Grows the unstable and stable branches at (0, 0), scans integer translates
of the stable curve for topologically transverse crossings, and writes an
SVG of the tangle plus a JSON witness table.

Usage: python scripts/tangle_demo.py [--k 2.0] [--budget 200] [--range 1]
       [--out-prefix tangle]
"""

import argparse

import numpy as np

import torusdyn as td
from torusdyn.report import write_json
from torusdyn.svg import SvgCanvas


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=2.0)
    ap.add_argument("--budget", type=float, default=200.0)
    ap.add_argument("--range", type=int, default=1)
    ap.add_argument("--out-prefix", default="tangle")
    args = ap.parse_args()

    m = td.make_standard_map(args.k)
    pp = td.newton_periodic(m, 1, (0, 0), (0.1, 0.1))
    if pp is None or pp.classification != "hyperbolic_positive":
        raise SystemExit("no hyperbolic fixed point near the origin at k=%g" % args.k)
    print("fixed point %s, eigenvalues %s" % (pp.point, pp.eigenvalues.real))

    wu = td.grow_manifold(m, pp, "unstable", "+", arclength_budget=args.budget)
    ws = td.grow_manifold(m, pp, "stable", "+", arclength_budget=args.budget)
    print("unstable: %d vertices, stable: %d vertices" % (len(wu.vertices), len(ws.vertices)))

    table = td.translate_scan(wu, ws, half_range=args.range, max_witnesses=1)
    report = {}
    found = []
    for (a, b), wits in sorted(table.items()):
        if wits:
            report["%d,%d" % (a, b)] = list(map(float, wits[0].location))
            found.extend(wits)
        else:
            report["%d,%d" % (a, b)] = "not found at current budget"
        print("translate (%2d, %2d): %s" % (a, b, report["%d,%d" % (a, b)]))
    write_json(args.out_prefix + "_witnesses.json", report)

    allv = np.vstack([wu.vertices, ws.vertices])
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    pad = 0.05 * float(np.max(hi - lo))
    c = SvgCanvas((lo[0] - pad, hi[0] + pad), (lo[1] - pad, hi[1] + pad), width=800, height=800)
    c.frame()
    c.polyline(wu.vertices, color="#c03030", width=0.5)
    c.polyline(ws.vertices, color="#3060c0", width=0.5)
    for w in found:
        c.circles([w.location], r=3.0, color="#208020")
    c.save(args.out_prefix + ".svg")
    print("wrote %s.svg and %s_witnesses.json" % (args.out_prefix, args.out_prefix))


if __name__ == "__main__":
    main()
