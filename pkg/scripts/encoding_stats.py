"""Formula sizes for every instance of the benchmark grids, as CSV.

    python scripts/encoding_stats.py [--family F ...] [--seed S] [--max-horizon H]

Encodes in memory only; nothing is written besides the table on stdout.
"""

import argparse
import csv
import sys
import time

from bnnplan.domains import FAMILIES, generate, parameter_grid
from bnnplan.encoder import encode


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", action="append", choices=FAMILIES)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-horizon", type=int, help="skip grid points with a longer horizon")
    args = ap.parse_args(argv)
    out = csv.writer(sys.stdout)
    out.writerow(["instance", "widths", "vars", "hard", "soft", "soft_total", "offset", "encode_s"])
    for family in args.family or FAMILIES:
        for spec in parameter_grid(family, args.seed):
            if args.max_horizon is not None and spec.horizon > args.max_horizon:
                continue
            inst = generate(spec)
            start = time.perf_counter()
            art = encode(inst.problem, inst.bnn)
            elapsed = time.perf_counter() - start
            f = art.formula
            widths = ":".join(map(str, inst.bnn.widths))
            out.writerow([spec.name, widths, f.num_vars, f.num_hard, len(f.soft), f.soft_total, art.objective_offset, f"{elapsed:.2f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
