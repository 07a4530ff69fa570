"""Monte Carlo versus finite-difference MET over a grid of starting points.

For each (alpha, beta) prints x0, solver value, MC mean, MC standard error.
"""

import argparse

import numpy as np

from levy_exit import McConfig, ProblemSpec, estimate_exit, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=10_000)
    ap.add_argument("--J", type=int, default=320)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    print("alpha,beta,x0,solver,mc_mean,mc_stderr")
    for alpha in (0.5, 1.0, 1.5):
        for beta in (0.5, 1.0):
            spec = ProblemSpec.make(alpha, beta)
            prof = solve(spec, args.J)
            for x0 in np.round(np.arange(-0.8, 0.81, 0.2), 10):
                cfg = McConfig(n_paths=args.paths, seed=args.seed)
                met, _ = estimate_exit(spec, float(x0), cfg, jobs=args.jobs)
                print(f"{alpha},{beta},{x0:g},{prof.value_at(float(x0)):.6f},{met.mean:.6f},{met.stderr:.6f}")


if __name__ == "__main__":
    main()
