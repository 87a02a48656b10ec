"""Run an external MaxSAT solver, decode its model into a plan and check it.

Cost convention: a WCNF solver reports ``cost`` = total weight of falsified
soft clauses. With ``S`` the sum of all soft weights and ``offset`` the
artifact's objective offset, the scaled plan reward is
``S - cost + offset``.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .bnn import Bnn, Trajectory, simulate
from .encoder import EncodingArtifact
from .errors import StructuralError
from .io import parse_solver_output, write_wcnf
from .model import PlanningProblem


@dataclass(frozen=True)
class Failure:
    condition: str  # "global" or "goal"
    step: int
    row: int

    def __str__(self) -> str:
        return f"{self.condition} row {self.row} violated at step {self.step}"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failures: tuple[Failure, ...]
    trajectory: Trajectory


def validate_plan(problem: PlanningProblem, bnn: Bnn, plan: Sequence[Sequence[bool]]) -> Verdict:
    """Simulate ``plan`` and list every violated global row (per step) and goal row (at H+1)."""
    traj = simulate(bnn, problem, plan)
    fails = [Failure("global", t, j) for t, j in traj.global_violations]
    fails += [Failure("goal", problem.horizon + 1, j) for j in traj.goal_violations]
    return Verdict(not fails, tuple(fails), traj)


def decode_plan(artifact: EncodingArtifact, model: Sequence[int]) -> list[tuple[bool, ...]]:
    true_vars = {l for l in model if l > 0}
    return [tuple(v in true_vars for v in step) for step in artifact.atlas.xs]


@dataclass
class SolveReport:
    status: str
    plan: Optional[list] = None
    trajectory: Optional[Trajectory] = None
    solver_cost: Optional[int] = None
    recomputed_reward: Optional[int] = None
    agree: Optional[bool] = None
    wall_time: float = 0.0
    message: str = ""
    verdict: Optional[Verdict] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        traj = self.trajectory
        return {
            "status": self.status,
            "plan": None if self.plan is None else [[int(b) for b in s] for s in self.plan],
            "solver_cost": self.solver_cost,
            "recomputed_reward": self.recomputed_reward,
            "reward": None if traj is None else str(traj.reward),
            "feasible": None if traj is None else traj.feasible,
            "agree": self.agree,
            "wall_time": round(self.wall_time, 6),
            "message": self.message,
        }


def solve(
    artifact: EncodingArtifact,
    problem: PlanningProblem,
    bnn: Bnn,
    solver_cmd: Union[str, Sequence[str]],
    timeout: Optional[float] = None,
    fmt: str = "wcnf2021",
) -> SolveReport:
    """Solve with ``<solver_cmd> <wcnf path>``; failures end up in ``status``, never raised."""
    cmd = shlex.split(solver_cmd) if isinstance(solver_cmd, str) else list(solver_cmd)
    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="bnnplan-") as tmp:
        path = os.path.join(tmp, "instance.wcnf")
        with open(path, "w") as fh:
            write_wcnf(artifact, fh, fmt)
        try:
            proc = subprocess.run(cmd + [path], capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return SolveReport("unknown", wall_time=time.monotonic() - start, message="timeout")
        except OSError as exc:
            return SolveReport("error", wall_time=time.monotonic() - start, message=f"spawn failed: {exc}")
    elapsed = time.monotonic() - start
    out = parse_solver_output(proc.stdout)
    if out.status in ("unsat", "unknown"):
        msg = "" if out.status == "unsat" else "no status line" if "s " not in proc.stdout else "solver gave up"
        return SolveReport(out.status, solver_cost=out.cost, wall_time=elapsed, message=msg)
    try:
        plan = decode_plan(artifact, out.model)
        verdict = validate_plan(problem, bnn, plan)
    except StructuralError as exc:
        return SolveReport("error", wall_time=elapsed, message=f"undecodable model: {exc}")
    traj = verdict.trajectory
    agree = None
    if out.cost is not None:
        agree = out.cost == artifact.reward_to_cost(traj.scaled_reward)
    return SolveReport(
        out.status,
        plan=plan,
        trajectory=traj,
        solver_cost=out.cost,
        recomputed_reward=traj.scaled_reward,
        agree=agree,
        wall_time=elapsed,
        message="" if verdict.ok else "; ".join(map(str, verdict.failures)),
        verdict=verdict,
    )
