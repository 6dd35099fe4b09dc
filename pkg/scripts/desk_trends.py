"""Desk-scale trend table: 10 agents, 2 theories, homogeneous and
heterogeneous networks, every sharing probability, both reliabilities.

    python3 scripts/desk_trends.py --reps 100 --seed 1 --out desk.csv
"""

import argparse
import sys

from argabm.engine import SimulationConfig
from argabm.experiment import (
    BIASED,
    GRID_SHARE_PROBABILITIES,
    RELIABLE,
    SweepSpec,
    compare_cells,
    export_results,
    run_sweep,
)
from argabm.social import HETEROGENEOUS, HOMOGENEOUS


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--agents", type=int, default=10)
    ap.add_argument("--parallelism", type=int, default=None)
    ap.add_argument("--out", default=None, help="optional CSV/JSON export")
    args = ap.parse_args(argv)

    spec = SweepSpec(
        agent_counts=(args.agents,),
        theory_counts=(2,),
        share_probabilities=GRID_SHARE_PROBABILITIES,
        compositions=(HOMOGENEOUS, HETEROGENEOUS),
        reliabilities=(RELIABLE, BIASED),
        repetitions=args.reps,
        base_seed=args.seed,
        template=SimulationConfig(),
    )

    def progress(done, total):
        if done % 50 == 0 or done == total:
            print(f"\r{done}/{total} runs", end="", file=sys.stderr)

    table = run_sweep(spec, parallelism=args.parallelism, progress=progress)
    print(file=sys.stderr)

    print(f"{'composition':<14}{'reliability':<12}{'p':>5}{'success':>9}{'mean':>9}{'median':>9}{'cap':>5}")
    for s in table:
        print(f"{s.composition:<14}{s.reliability:<12}{s.share_probability:>5.2f}"
              f"{s.success_rate:>9.2f}{s.mean_rounds:>9.1f}{s.median_rounds:>9.1f}{s.cap_hits:>5}")

    print("\nvs. no sharing (same composition and reliability):")
    for s in table:
        if s.share_probability == 0.0:
            continue
        base = (s.num_agents, 2, 0.0, s.composition, s.reliability)
        cs = compare_cells(table, s, base, "success_rate")
        cr = compare_cells(table, s, base, "rounds")
        print(f"  {s.composition:<14}{s.reliability:<10} p={s.share_probability:.2f}  "
              f"success {cs.difference:+.2f} (p={cs.p_value:.3g})  rounds {cr.difference:+.1f} (p={cr.p_value:.3g})")

    if args.out:
        export_results(table, args.out)
        print(f"wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
