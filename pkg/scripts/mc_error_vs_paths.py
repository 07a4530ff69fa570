"""Monte Carlo error at x = 0 versus the closed-form MET for alpha = 1.5, beta = 0.

Prints one row per path count: paths, MC mean, standard error, |error|.
Timings are hardware-specific and not reported.
"""

import argparse

from levy_exit import McConfig, ProblemSpec, analytic_met_symmetric, estimate_exit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", default="1000,2000,4000,8000,16000")
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    spec = ProblemSpec.make(1.5, 0.0)
    exact = analytic_met_symmetric(1.5, 0.0)
    print(f"# exact u(0) = {exact:.6f}")
    print("paths,mean,stderr,abs_error")
    for n in (int(t) for t in args.paths.split(",")):
        met, _ = estimate_exit(spec, 0.0, McConfig(n_paths=n, dt=args.dt, seed=args.seed), jobs=args.jobs)
        print(f"{n},{met.mean:.6f},{met.stderr:.6f},{abs(met.mean - exact):.6f}")


if __name__ == "__main__":
    main()
