"""Weighted partial MaxSAT model of a planning problem with a BNN transition.

Variables: ``x(i, t)`` action bit i at step t (1..H), ``y(i, t)`` state bit i at
step t (1..H+1), ``z(j, l, t)`` neuron j of layer l (1..L, input layer is 1)
at step t (1..H). Bit and neuron indices are 0-based. The atlas is allocated
first (x, then y, then z, each with t outermost) so every auxiliary variable
is numbered above it.

Clause groups are emitted in a fixed order: initial state, goal rows, global
rows, BNN input/output links, activations, reward. Loops run over t first,
then over row/bit/neuron index.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bnn import Bnn
from .cnf import PbRow, WcnfFormula, encode_act_bicond, encode_card_le
from .errors import StructuralError
from .model import PlanningProblem, validate_problem


@dataclass(frozen=True)
class VarAtlas:
    horizon: int
    xs: tuple[tuple[int, ...], ...]
    ys: tuple[tuple[int, ...], ...]
    zs: tuple[tuple[tuple[int, ...], ...], ...]

    def x(self, i: int, t: int) -> int:
        return self.xs[t - 1][i]

    def y(self, i: int, t: int) -> int:
        return self.ys[t - 1][i]

    def z(self, j: int, l: int, t: int) -> int:
        return self.zs[t - 1][l - 1][j]

    @property
    def size(self) -> int:
        return sum(map(len, self.xs)) + sum(map(len, self.ys)) + sum(len(layer) for step in self.zs for layer in step)


def allocate_atlas(problem: PlanningProblem, bnn: Bnn, f: WcnfFormula) -> VarAtlas:
    if f.num_vars:
        raise StructuralError("the atlas must be allocated on an empty formula")
    H = problem.horizon
    xs = tuple(tuple(f.new_var() for _ in range(problem.n_action)) for _ in range(H))
    ys = tuple(tuple(f.new_var() for _ in range(problem.n_state)) for _ in range(H + 1))
    zs = tuple(tuple(tuple(f.new_var() for _ in range(w)) for w in bnn.widths) for _ in range(H))
    return VarAtlas(H, xs, ys, zs)


@dataclass
class EncodingArtifact:
    """The compiled formula plus what is needed to read models back.

    For any total assignment ``A`` satisfying the hard clauses,
    ``soft_weight(A) + objective_offset == 10**scale_pow10 * reward(plan)``.
    """

    formula: WcnfFormula
    atlas: VarAtlas
    objective_offset: int
    scale_pow10: int

    def cost_to_reward(self, cost: int) -> int:
        """Scaled plan reward for a WCNF cost (sum of falsified soft weights)."""
        return self.formula.soft_total - cost + self.objective_offset

    def reward_to_cost(self, scaled_reward: int) -> int:
        return self.formula.soft_total - (scaled_reward - self.objective_offset)


def encode_initial(problem: PlanningProblem, atlas: VarAtlas, f: WcnfFormula) -> None:
    for i, v in enumerate(problem.initial):
        f.add_hard([atlas.y(i, 1) if v else -atlas.y(i, 1)])


def encode_goal(problem: PlanningProblem, atlas: VarAtlas, f: WcnfFormula) -> None:
    H = problem.horizon
    for row in problem.goal_rows:
        terms = tuple((c, atlas.y(i, H + 1)) for i, c in row.state)
        encode_card_le(f, PbRow(terms, row.bound))


def encode_global(problem: PlanningProblem, atlas: VarAtlas, f: WcnfFormula) -> None:
    rows = problem.global_rows
    for t in range(1, problem.horizon + 1):
        for row in rows:
            terms = tuple((c, atlas.y(i, t)) for i, c in row.state)
            terms += tuple((c, atlas.x(i, t)) for i, c in row.action)
            encode_card_le(f, PbRow(terms, row.bound))


def _equiv(f: WcnfFormula, a: int, b: int) -> None:
    f.add_hard([-a, b])
    f.add_hard([a, -b])


def encode_bnn_link(problem: PlanningProblem, bnn: Bnn, atlas: VarAtlas, f: WcnfFormula) -> None:
    covered = set(bnn.output_map)
    frozen = [i for i in range(problem.n_state) if i not in covered]
    if frozen and bnn.uncovered != "frozen":
        raise StructuralError(f"state bits {frozen} have no output neuron and no evolution rule")
    L = bnn.depth
    for t in range(1, problem.horizon + 1):
        for j, (kind, i) in enumerate(bnn.input_map):
            _equiv(f, atlas.y(i, t) if kind == "s" else atlas.x(i, t), atlas.z(j, 1, t))
        for j, i in enumerate(bnn.output_map):
            _equiv(f, atlas.y(i, t + 1), atlas.z(j, L, t))
        for i in frozen:
            _equiv(f, atlas.y(i, t + 1), atlas.y(i, t))


def encode_activations(bnn: Bnn, atlas: VarAtlas, f: WcnfFormula) -> None:
    for t in range(1, atlas.horizon + 1):
        for l, layer in enumerate(bnn.layers, start=2):
            for j, k in enumerate(layer.thresholds):
                lits = [
                    atlas.z(i, l - 1, t) if w > 0 else -atlas.z(i, l - 1, t)
                    for i, w in enumerate(layer.column(j))
                ]
                encode_act_bicond(f, lits, k, atlas.z(j, l, t))


def encode_reward(problem: PlanningProblem, atlas: VarAtlas, f: WcnfFormula) -> int:
    """Soft unit clauses for the reward; returns the constant offset.

    A negative coefficient ``r`` on literal ``v`` becomes soft ``(-r, [-v])``
    with ``r`` added to the offset, since ``r*v = r + (-r)*(1 - v)``.
    """
    offset = 0
    r_s, r_a = problem.reward.scaled_state, problem.reward.scaled_action
    for t in range(1, problem.horizon + 1):
        for coeffs, var in ((r_s, lambda i: atlas.y(i, t + 1)), (r_a, lambda i: atlas.x(i, t))):
            for i, r in enumerate(coeffs):
                if r > 0:
                    f.add_soft(r, [var(i)])
                elif r < 0:
                    f.add_soft(-r, [-var(i)])
                    offset += r
    return offset


def encode(problem: PlanningProblem, bnn: Bnn) -> EncodingArtifact:
    issues = validate_problem(problem)
    if issues:
        raise StructuralError("; ".join(issues))
    bnn.check(problem)
    f = WcnfFormula()
    atlas = allocate_atlas(problem, bnn, f)
    encode_initial(problem, atlas, f)
    encode_goal(problem, atlas, f)
    encode_global(problem, atlas, f)
    encode_bnn_link(problem, bnn, atlas, f)
    encode_activations(bnn, atlas, f)
    offset = encode_reward(problem, atlas, f)
    return EncodingArtifact(f, atlas, offset, problem.reward.scale_pow10)


def interface_assignment(artifact: EncodingArtifact, bnn: Bnn, trajectory) -> dict[int, bool]:
    """Atlas values induced by a simulated trajectory (neurons via forward passes)."""
    atlas = artifact.atlas
    values: dict[int, bool] = {}
    for t, (s, a) in enumerate(zip(trajectory.states, trajectory.actions), start=1):
        for i, v in enumerate(a):
            values[atlas.x(i, t)] = v
        for l, acts in enumerate(bnn.layer_outputs(bnn.input_vector(s, a)), start=1):
            for j, v in enumerate(acts):
                values[atlas.z(j, l, t)] = v
    for t, s in enumerate(trajectory.states, start=1):
        for i, v in enumerate(s):
            values[atlas.y(i, t)] = v
    return values
