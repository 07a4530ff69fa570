"""Manufactured-solution and self-convergence order tables.

Writes one JSON record per (study, alpha) to stdout.
"""

import argparse
import json

from levy_exit import ProblemSpec, manufactured_study, self_convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", type=float, default=0.5)
    ap.add_argument("--alphas", default="0.5,1,1.5")
    ap.add_argument("--J-ref", type=int, default=1280)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    for alpha in (float(a) for a in args.alphas.split(",")):
        for probe in (-0.5, 0.0, 0.5):
            rep = manufactured_study(alpha, args.beta, (20, 40, 80, 160), probe, jobs=args.jobs)
            print(json.dumps(rep.to_dict()))
        spec = ProblemSpec.make(alpha, args.beta)
        rep = self_convergence_study(spec, (10, 20, 40, 80, 160), args.J_ref, -0.5, jobs=args.jobs)
        print(json.dumps(rep.to_dict()))


if __name__ == "__main__":
    main()
