"""Full grid: agents {10,20,30,40,70,100} x sharing {0,0.3,0.5,1} x both
compositions x both reliabilities x {2,3} theories. At 100 repetitions this
is 19,200 runs; expect hours on one core, so set --parallelism or
ARGABM_PARALLELISM.

    python3 scripts/run_full_grid.py --reps 100 --seed 7 --out grid.csv
"""

import argparse
import sys
import time

from argabm.experiment import SweepError, export_results, full_grid, run_sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--theories", default="2,3", help="comma-separated theory counts")
    ap.add_argument("--parallelism", type=int, default=None)
    ap.add_argument("--out", default="grid.csv")
    args = ap.parse_args(argv)

    spec = full_grid(args.reps, args.seed, theory_counts=tuple(int(x) for x in args.theories.split(",")))
    total = len(spec.cells()) * spec.repetitions
    start = time.time()

    def progress(done, _):
        if done % 100 == 0 or done == total:
            rate = done / max(time.time() - start, 1e-9)
            print(f"\r{done}/{total} runs, {rate:.1f}/s", end="", file=sys.stderr)

    try:
        table = run_sweep(spec, parallelism=args.parallelism, progress=progress)
    except SweepError as exc:
        print(f"\n{exc}", file=sys.stderr)
        if exc.table:
            export_results(exc.table, args.out)
        return 1
    print(file=sys.stderr)
    export_results(table, args.out)
    print(f"wrote {len(table)} rows to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
