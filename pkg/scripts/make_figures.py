"""Regenerate every figure artifact (CSV plus gnuplot script).

Each figure runs its paired cross-checks before writing anything, so a
successful run certifies the numbers as well as producing them.

    python3 scripts/make_figures.py --out artifacts
"""

import argparse
import sys

from omsteady import FIGURES, make_figure


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="artifacts", help="output directory")
    ap.add_argument("--only", choices=FIGURES, action="append",
                    help="build a subset (repeatable)")
    args = ap.parse_args(argv)

    for fig_id in args.only or FIGURES:
        out = make_figure(fig_id, args.out)
        print(f"{fig_id}: wrote {out.csv_path} and {out.plot_path}")
        for check in out.checks:
            print(f"  {check.name}: worst {check.worst:.3e} "
                  f"(tolerance {check.tolerance:.1e})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
