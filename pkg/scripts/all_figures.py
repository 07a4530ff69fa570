"""Regenerate every parameter-study data file (fig5 .. fig13) into one directory."""

import argparse

from levy_exit.cli import FIGURES, make_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figure_data")
    ap.add_argument("--J", type=int, default=320)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for fig in FIGURES:
        for path in make_figure(fig, args.out, J=args.J, jobs=args.jobs):
            print(path)


if __name__ == "__main__":
    main()
