"""Handcrafted navigation networks: exactness and optimal plan rewards.

    python scripts/navigation_anchor.py [--sizes 3 4 5] [--solve]

For each grid size N the handcrafted network is checked against the grid
dynamics on every (cell, action or no-op) pair, then the optimal plan over a
horizon equal to the corner-to-corner distance is found by exhaustive search.
With ``--solve`` the WCNF is also solved with the bundled mini-solver (or the
command in BNNPLAN_SOLVER) and the two rewards are compared.
"""

import argparse
import os
import sys

from bnnplan.bnn import brute_force_optimal, forward
from bnnplan.domains import DomainSpec, generate, navigation_valid_inputs
from bnnplan.driver import solve
from bnnplan.encoder import encode


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--solve", action="store_true")
    args = ap.parse_args(argv)
    solver = os.environ.get("BNNPLAN_SOLVER", f"{sys.executable} -m bnnplan.minisolver")
    for n in args.sizes:
        horizon = 2 * (n - 1)
        inst = generate(DomainSpec("navigation", n, horizon, weight_mode="handcrafted-ground-truth"))
        pairs = navigation_valid_inputs(n)
        exact = sum(forward(inst.bnn, s, a) == inst.truth.step(s, a) for s, a in pairs)
        best = brute_force_optimal(inst.bnn, inst.problem)
        line = f"N={n} widths={':'.join(map(str, inst.bnn.widths))} exact={exact}/{len(pairs)} H={horizon} oracle_reward={best.reward}"
        if args.solve:
            rep = solve(encode(inst.problem, inst.bnn), inst.problem, inst.bnn, solver)
            line += f" solver_status={rep.status} solver_reward={rep.trajectory.reward if rep.trajectory else None} agree={rep.agree}"
        print(line, flush=True)


if __name__ == "__main__":
    main()
