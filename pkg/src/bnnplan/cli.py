"""Command line front end: ``bnnplan <subcommand> ...``.

Exit codes: 0 success, 1 infeasible or plan rejected, 2 usage or
configuration error, 3 capacity guard hit, 4 I/O or solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .bnn import brute_force_optimal
from .domains import FAMILIES, POLICIES, WEIGHT_MODES, DomainSpec, generate, parameter_grid, spec_meta
from .driver import solve, validate_plan
from .encoder import encode
from .errors import CapacityError, ConfigurationError, ManifestError, StructuralError, UnsatisfiableError
from .io import (
    WCNF_FORMATS,
    InstanceManifest,
    atlas_to_dict,
    dumps_manifest,
    dumps_plan,
    loads_plan,
    read_manifest,
    write_wcnf,
)

log = logging.getLogger("bnnplan")

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_CAPACITY, EXIT_FAILURE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bnnplan", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a benchmark instance manifest")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--horizon", type=int, required=True)
    g.add_argument("--policy", choices=POLICIES)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--weight-mode", choices=WEIGHT_MODES, default="random")
    g.add_argument("-o", "--output", required=True)

    e = sub.add_parser("encode", help="compile a manifest to WCNF (plus <out>.atlas.json)")
    e.add_argument("-i", "--input", required=True)
    e.add_argument("-o", "--output", required=True)
    e.add_argument("--format", choices=WCNF_FORMATS, default="wcnf2021")

    s = sub.add_parser("solve", help="encode, run a MaxSAT solver, decode and validate")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--solver", default=os.environ.get("BNNPLAN_SOLVER"))
    s.add_argument("--timeout", type=float)
    s.add_argument("--format", choices=WCNF_FORMATS, default="wcnf2021")
    s.add_argument("--plan-out", help="also write the decoded plan here")

    v = sub.add_parser("validate", help="check a plan against a manifest")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--plan", required=True)

    o = sub.add_parser("oracle", help="exhaustive optimal plan (tiny instances only)")
    o.add_argument("-i", "--input", required=True)
    o.add_argument("--limit", type=int, default=2**22)

    r = sub.add_parser("grid", help="manifests (and WCNFs) for a family's parameter grid")
    r.add_argument("--family", required=True, choices=FAMILIES)
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--format", choices=WCNF_FORMATS, default="wcnf2021")
    r.add_argument("--no-wcnf", action="store_true", help="manifests only")
    r.add_argument("--jobs", type=int, default=1)
    return p


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _encode_to(manifest: InstanceManifest, path: str, fmt: str) -> None:
    artifact = encode(manifest.problem, manifest.bnn)
    with open(path, "w", newline="\n") as fh:
        write_wcnf(artifact, fh, fmt)
    stem = path[:-5] if path.endswith(".wcnf") else path
    _write_text(stem + ".atlas.json", json.dumps(atlas_to_dict(artifact), sort_keys=True, separators=(",", ":")) + "\n")


def _manifest(spec: DomainSpec) -> InstanceManifest:
    inst = generate(spec)
    return InstanceManifest(inst.problem, inst.bnn, spec_meta(spec))


def cmd_generate(args) -> int:
    policy = args.policy or ("x-axis" if args.family == "cellda" else None)
    spec = DomainSpec(args.family, args.n, args.horizon, policy, args.seed, args.weight_mode)
    _write_text(args.output, dumps_manifest(_manifest(spec)))
    log.info("wrote %s", args.output)
    return EXIT_OK


def cmd_encode(args) -> int:
    _encode_to(read_manifest(args.input), args.output, args.format)
    log.info("wrote %s", args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    if not args.solver:
        raise ConfigurationError("no solver: pass --solver or set BNNPLAN_SOLVER")
    m = read_manifest(args.input)
    artifact = encode(m.problem, m.bnn)
    report = solve(artifact, m.problem, m.bnn, args.solver, args.timeout, args.format)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    if report.plan is not None and args.plan_out:
        _write_text(args.plan_out, dumps_plan(report.plan))
    if report.status == "unsat":
        return EXIT_INFEASIBLE
    if report.status in ("unknown", "error"):
        return EXIT_FAILURE
    if not report.verdict.ok or report.agree is False:
        log.error("solver model does not reconcile: %s", report.message or "cost mismatch")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_validate(args) -> int:
    m = read_manifest(args.input)
    with open(args.plan) as fh:
        plan = loads_plan(fh.read())
    verdict = validate_plan(m.problem, m.bnn, plan)
    traj = verdict.trajectory
    print(json.dumps({
        "ok": verdict.ok,
        "failures": [{"condition": f.condition, "step": f.step, "row": f.row} for f in verdict.failures],
        "reward": str(traj.reward),
        "scaled_reward": traj.scaled_reward,
    }, indent=2, sort_keys=True))
    return EXIT_OK if verdict.ok else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    m = read_manifest(args.input)
    traj = brute_force_optimal(m.bnn, m.problem, args.limit)
    if traj is None:
        print(json.dumps({"feasible": False}, sort_keys=True))
        return EXIT_INFEASIBLE
    print(json.dumps({
        "feasible": True,
        "plan": [[int(b) for b in a] for a in traj.actions],
        "reward": str(traj.reward),
        "scaled_reward": traj.scaled_reward,
        "scale_pow10": traj.scale_pow10,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def _grid_job(spec: DomainSpec, out_dir: str, fmt: Optional[str]) -> str:
    m = _manifest(spec)
    base = os.path.join(out_dir, spec.name)
    _write_text(base + ".json", dumps_manifest(m))
    if fmt is not None:
        _encode_to(m, base + ".wcnf", fmt)
    return spec.name


def cmd_grid(args) -> int:
    os.makedirs(args.output, exist_ok=True)
    specs = parameter_grid(args.family, args.seed)
    fmt = None if args.no_wcnf else args.format
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            names = list(pool.map(_grid_job, specs, [args.output] * len(specs), [fmt] * len(specs)))
    else:
        names = [_grid_job(s, args.output, fmt) for s in specs]
    for name in names:
        print(name)
    log.info("%d instances in %s", len(names), args.output)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "encode": cmd_encode,
    "solve": cmd_solve,
    "validate": cmd_validate,
    "oracle": cmd_oracle,
    "grid": cmd_grid,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except CapacityError as exc:
        log.error("%s", exc)
        return EXIT_CAPACITY
    except UnsatisfiableError as exc:
        log.error("infeasible: %s", exc)
        return EXIT_INFEASIBLE
    except ManifestError as exc:
        log.error("manifest error at %s: %s", exc.path, exc)
        return EXIT_FAILURE
    except (StructuralError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())
