"""Write staircase pictures and JSON for the standard examples.

    python3 scripts/figures.py [outdir]

Produces, for H2: reg S, reg of S/<x2,x3>, reg of the rank-three module,
and reg(I^n), reg(J^n) for n = 1..4 together with the bound reports.
"""

import json
import os
import sys

from torreg.lattice import Window
from torreg.rees import verify_powers_theorem
from torreg.regularity import check_containment_bounds, reg_region
from torreg.ring import MonomialModule
from torreg.svg import render_staircase
from torreg.toric import hirzebruch

I_GENS = [(1, 0, 0, 1), (0, 2, 4, 0)]
J_GENS = [(0, 0, 0, 1), (3, 1, 0, 0)]


def rank3_module(X):
    return MonomialModule.presented(
        X, [(-3, 3), (-2, 2), (-1, 2)],
        [[(0, 1, (5, 1, 0, 0)), (1, 1, (0, 2, 6, 0)), (2, 1, (0, 2, 5, 0))]],
        torsion_free=True, label="rank3")


def write(outdir, name, data, svg=None):
    with open(os.path.join(outdir, name + ".json"), "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
    if svg is not None:
        with open(os.path.join(outdir, name + ".svg"), "w") as fh:
            fh.write(svg)
    print("wrote", name)


def main(outdir="figures"):
    os.makedirs(outdir, exist_ok=True)
    X = hirzebruch(2)
    wide = Window((-7, -1), (7, 7))
    cases = [("reg_S", MonomialModule.ring(X), Window.square(-3, 3)),
             ("reg_torsion_quotient", MonomialModule.quotient(X, [(0, 0, 1, 0), (0, 0, 0, 1)]),
              wide),
             ("reg_rank3_module", rank3_module(X), wide)]
    for name, M, W in cases:
        R = reg_region(M, W)
        data = R.to_json()
        data["bounds"] = check_containment_bounds(M, R).to_json()
        write(outdir, name, data, render_staircase(R.points, R.minima, X.nef, name))

    W = Window.square(-1, 11)
    for label, gens in (("I", I_GENS), ("J", J_GENS)):
        reports = verify_powers_theorem(X, gens, 4, W)
        write(outdir, "powers_" + label, [r.to_json() for r in reports])
        for r in reports:
            pts = [p for p in W.points()
                   if any(X.nef.contains((p[0] - m[0], p[1] - m[1])) for m in r.reg_minima)]
            name = "reg_%s%d" % (label, r.n)
            svg = render_staircase(pts, r.reg_minima, X.nef, name)
            with open(os.path.join(outdir, name + ".svg"), "w") as fh:
                fh.write(svg)
            print("wrote", name)


if __name__ == "__main__":
    main(*sys.argv[1:])
