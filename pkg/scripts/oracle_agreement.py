"""Exhaustive oracle versus MaxSAT solving on seeded random toy instances.

    python scripts/oracle_agreement.py [--count 25] [--solver CMD]

Prints one CSV row per instance: oracle reward, solver status and reward, and
whether the solver's reported cost reconciles with the recomputed reward.
"""

import argparse
import csv
import os
import sys

from bnnplan.bnn import brute_force_optimal
from bnnplan.domains import random_instance
from bnnplan.driver import solve
from bnnplan.encoder import encode


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--solver", default=os.environ.get("BNNPLAN_SOLVER", f"{sys.executable} -m bnnplan.minisolver"))
    args = ap.parse_args(argv)
    out = csv.writer(sys.stdout)
    out.writerow(["seed", "states", "actions", "horizon", "oracle_scaled", "status", "solver_scaled", "agree"])
    for seed in range(args.seed, args.seed + args.count):
        n_state, n_action, horizon = 2 + seed % 3, 1 + seed % 2, 2 + seed % 3
        problem, bnn = random_instance(seed, n_state, n_action, (5,), horizon)
        best = brute_force_optimal(bnn, problem)
        rep = solve(encode(problem, bnn), problem, bnn, args.solver, timeout=120)
        out.writerow([seed, n_state, n_action, horizon, None if best is None else best.scaled_reward, rep.status, rep.recomputed_reward, rep.agree])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
