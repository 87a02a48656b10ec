"""Binarized networks: exact biases, forward passes and plan simulation.

Everything at the module boundary is Boolean. The +-1 training convention only
shows up inside the ``2*z - 1`` substitution of the pre-activation sum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, ParameterError, StructuralError
from .model import PlanningProblem

UNCOVERED_RULES = ("forbidden", "frozen")
BRUTE_FORCE_LIMIT = 2**22


@dataclass(frozen=True)
class BatchNormParams:
    """Learned batch-normalisation constants as decimal strings."""

    mu: str
    sigma2: str
    eps: str
    gamma: str
    beta: str

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v) for v in (self.mu, self.sigma2, self.eps, self.gamma, self.beta))


def _scaled_root_le(q: Fraction, rad: Fraction, a: Fraction) -> bool:
    """Exact test of ``q * sqrt(rad) <= a`` without taking a root."""
    if q >= 0:
        return a >= 0 and q * q * rad <= a * a
    return a >= 0 or q * q * rad >= a * a


def compute_bias(params: BatchNormParams) -> int:
    """``ceil(beta * sqrt(sigma2 + eps) / gamma - mu)`` in exact arithmetic."""
    mu, sigma2, eps, gamma, beta = params.fractions()
    if gamma == 0:
        raise ParameterError("batch-norm gamma must be nonzero")
    if sigma2 < 0 or eps <= 0:
        raise ParameterError("batch-norm needs sigma2 >= 0 and eps > 0")
    q, rad = beta / gamma, sigma2 + eps

    def at_most(r: int) -> bool:
        return _scaled_root_le(q, rad, r + mu)

    # smallest r with at_most(r); the predicate is monotone in r
    step = 1
    if at_most(0):
        hi = 0
        while at_most(hi - step):
            step *= 2
        lo = hi - step
    else:
        lo = 0
        while not at_most(lo + step):
            step *= 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if at_most(mid):
            hi = mid
        else:
            lo = mid
    return hi


def neuron_fires(weights: Sequence[int], inputs: Sequence[bool], bias: int) -> bool:
    if len(weights) != len(inputs):
        raise StructuralError(f"{len(weights)} weights for {len(inputs)} inputs")
    return sum(w * (2 * int(bool(z)) - 1) for w, z in zip(weights, inputs)) + bias >= 0


def activation_threshold(fan_in: int, bias: int) -> int:
    """Minimum number of satisfied input literals for a neuron to fire."""
    return -(-(fan_in - bias) // 2)


@dataclass(frozen=True)
class BnnLayer:
    """Weights ``weights[i][j]`` from neuron i of the previous layer to neuron j."""

    weights: tuple[tuple[int, ...], ...]
    bias: tuple[int, ...]
    batchnorm: Optional[tuple[BatchNormParams, ...]] = None

    @classmethod
    def from_batchnorm(cls, weights, params: Sequence[BatchNormParams]) -> "BnnLayer":
        params = tuple(params)
        return cls(_as_matrix(weights), tuple(compute_bias(p) for p in params), params)

    @property
    def fan_in(self) -> int:
        return len(self.weights)

    @property
    def width(self) -> int:
        return len(self.bias)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.weights)

    @property
    def thresholds(self) -> tuple[int, ...]:
        return tuple(activation_threshold(self.fan_in, b) for b in self.bias)

    @cached_property
    def _w(self) -> np.ndarray:
        return np.array(self.weights, dtype=np.float32).reshape(self.fan_in, self.width)

    @cached_property
    def _b(self) -> np.ndarray:
        return np.array(self.bias, dtype=np.float32)

    def apply(self, z: np.ndarray) -> np.ndarray:
        """Boolean outputs for a batch of Boolean inputs, shape ``(B, fan_in)``."""
        return (2.0 * z - 1.0) @ self._w + self._b >= 0

    def problems(self, index: int) -> list[str]:
        out = []
        if any(len(row) != self.width for row in self.weights):
            out.append(f"layers[{index}] weights: rows must all have width {self.width}")
        for i, row in enumerate(self.weights):
            for j, w in enumerate(row):
                if w not in (-1, 1) or isinstance(w, bool):
                    out.append(f"layers[{index}] weights[{i}][{j}]: {w!r} is not +-1")
        if self.batchnorm is not None:
            if len(self.batchnorm) != self.width:
                out.append(f"layers[{index}] batchnorm: expected {self.width} entries")
            else:
                for j, (p, b) in enumerate(zip(self.batchnorm, self.bias)):
                    if compute_bias(p) != b:
                        out.append(f"layers[{index}] bias[{j}]: {b} disagrees with batch-norm value {compute_bias(p)}")
        return out


def _as_matrix(weights) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(w) for w in row) for row in weights)


@dataclass(frozen=True)
class Bnn:
    """A layered BNN plus its wiring to the planning problem.

    ``input_map[k]`` is ``("s", i)`` or ``("a", i)``: input neuron k reads state
    bit i or action bit i. State inputs come first in increasing bit order, then
    every action bit in order. ``output_map[j]`` is the state bit written by
    output neuron j. State bits without an output neuron follow ``uncovered``:
    ``"frozen"`` keeps their value, ``"forbidden"`` rejects the network.
    """

    layers: tuple[BnnLayer, ...]
    input_map: tuple[tuple[str, int], ...]
    output_map: tuple[int, ...]
    uncovered: str = "forbidden"

    @property
    def widths(self) -> tuple[int, ...]:
        return (len(self.input_map),) + tuple(layer.width for layer in self.layers)

    @property
    def depth(self) -> int:
        """Number of neuron layers including the input layer."""
        return len(self.layers) + 1

    def problems(self, problem: Optional[PlanningProblem] = None) -> list[str]:
        out = []
        if not self.layers:
            out.append("layers: at least one weight layer required")
        prev = len(self.input_map)
        for k, layer in enumerate(self.layers):
            if layer.fan_in != prev:
                out.append(f"layers[{k}] weights: expected {prev} rows, got {layer.fan_in}")
            out.extend(layer.problems(k))
            prev = layer.width
        if self.layers and len(self.output_map) != self.layers[-1].width:
            out.append(f"output_map: {len(self.output_map)} entries for {self.layers[-1].width} output neurons")
        if len(set(self.output_map)) != len(self.output_map):
            out.append("output_map: state bits must be distinct")
        if self.uncovered not in UNCOVERED_RULES:
            out.append(f"uncovered_state_bits: unknown rule {self.uncovered!r}")
        kinds = [kind for kind, _ in self.input_map]
        if any(k not in ("s", "a") for k in kinds):
            out.append("input_map: entries must be ('s', i) or ('a', i)")
        elif kinds != sorted(kinds, key=lambda k: k == "a"):
            out.append("input_map: state inputs must precede action inputs")
        s_in = [i for kind, i in self.input_map if kind == "s"]
        a_in = [i for kind, i in self.input_map if kind == "a"]
        if s_in != sorted(set(s_in)):
            out.append("input_map: state inputs must be distinct and increasing")
        if problem is not None:
            n, m = problem.n_state, problem.n_action
            if a_in != list(range(m)):
                out.append(f"input_map: action inputs must be 0..{m - 1} in order")
            if any(not 0 <= i < n for i in s_in):
                out.append("input_map: state index out of range")
            if any(not 0 <= i < n for i in self.output_map):
                out.append("output_map: state index out of range")
            missing = set(range(n)) - set(self.output_map)
            if missing and self.uncovered != "frozen":
                out.append(f"output_map: state bits {sorted(missing)} have no output neuron and no evolution rule")
        return out

    def check(self, problem: Optional[PlanningProblem] = None) -> None:
        issues = self.problems(problem)
        if issues:
            raise StructuralError("; ".join(issues))

    def input_vector(self, state: Sequence[bool], action: Sequence[bool]) -> list[bool]:
        return [bool(state[i]) if kind == "s" else bool(action[i]) for kind, i in self.input_map]

    def layer_outputs(self, inputs: Sequence[bool]) -> list[tuple[bool, ...]]:
        """Activations of every layer, input layer first."""
        if len(inputs) != len(self.input_map):
            raise StructuralError(f"{len(inputs)} inputs for input width {len(self.input_map)}")
        z = np.array([inputs], dtype=np.float32)
        out = [tuple(bool(v) for v in inputs)]
        for layer in self.layers:
            z = layer.apply(z)
            out.append(tuple(bool(v) for v in z[0]))
        return out

    def forward_batch(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        s_idx = [i for kind, i in self.input_map if kind == "s"]
        a_idx = [i for kind, i in self.input_map if kind == "a"]
        z = np.concatenate([states[:, s_idx], actions[:, a_idx]], axis=1).astype(np.float32)
        for layer in self.layers:
            z = layer.apply(z)
        nxt = states.copy()  # uncovered bits stay frozen
        nxt[:, list(self.output_map)] = z
        return nxt


def forward(bnn: Bnn, state: Sequence[bool], action: Sequence[bool]) -> tuple[bool, ...]:
    """Next state bits for one (state, action) pair."""
    if any(i >= len(state if kind == "s" else action) for kind, i in bnn.input_map):
        raise StructuralError("state or action vector shorter than the input map requires")
    if any(i >= len(state) for i in bnn.output_map):
        raise StructuralError("output map points past the state vector")
    outputs = bnn.layer_outputs(bnn.input_vector(state, action))[-1]
    nxt = [bool(b) for b in state]
    for j, i in enumerate(bnn.output_map):
        nxt[i] = outputs[j]
    return tuple(nxt)


@dataclass(frozen=True)
class Trajectory:
    """States ``s^1..s^{H+1}`` under a plan, with feasibility and reward.

    ``global_violations`` lists ``(t, j)`` for global row j failing at step t
    (1-based); ``goal_violations`` lists failing goal rows on ``s^{H+1}``.
    """

    states: tuple[tuple[bool, ...], ...]
    actions: tuple[tuple[bool, ...], ...]
    global_violations: tuple[tuple[int, int], ...]
    goal_violations: tuple[int, ...]
    scaled_reward: int
    scale_pow10: int = 0

    @property
    def horizon(self) -> int:
        return len(self.actions)

    @property
    def global_ok(self) -> tuple[bool, ...]:
        bad = {t for t, _ in self.global_violations}
        return tuple(t not in bad for t in range(1, self.horizon + 1))

    @property
    def goal_ok(self) -> bool:
        return not self.goal_violations

    @property
    def feasible(self) -> bool:
        return not self.global_violations and not self.goal_violations

    @property
    def reward(self) -> Fraction:
        return Fraction(self.scaled_reward, 10**self.scale_pow10)


def simulate(bnn: Bnn, problem: PlanningProblem, actions: Sequence[Sequence[bool]]) -> Trajectory:
    if len(actions) != problem.horizon:
        raise StructuralError(f"plan has {len(actions)} steps, horizon is {problem.horizon}")
    acts = []
    for t, a in enumerate(actions, start=1):
        if len(a) != problem.n_action:
            raise StructuralError(f"step {t}: expected {problem.n_action} action bits, got {len(a)}")
        acts.append(tuple(bool(v) for v in a))
    glob, goal = problem.global_rows, problem.goal_rows
    states = [tuple(bool(v) for v in problem.initial)]
    violations = []
    reward = 0
    for t, a in enumerate(acts, start=1):
        s = states[-1]
        violations.extend((t, j) for j, row in enumerate(glob) if not row.holds(s, a))
        nxt = forward(bnn, s, a)
        reward += problem.reward.scaled_value(nxt, a)
        states.append(nxt)
    goal_bad = tuple(j for j, row in enumerate(goal) if not row.holds(states[-1]))
    return Trajectory(tuple(states), tuple(acts), tuple(violations), goal_bad, reward, problem.reward.scale_pow10)


def _rows_ok(rows, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    ok = np.ones(len(states), dtype=bool)
    for row in rows:
        lhs = np.zeros(len(states), dtype=np.int64)
        for i, c in row.state:
            lhs += c * states[:, i]
        for i, c in row.action:
            lhs += c * actions[:, i]
        ok &= lhs <= row.bound
    return ok


def brute_force_optimal(bnn: Bnn, problem: PlanningProblem, limit: int = BRUTE_FORCE_LIMIT) -> Optional[Trajectory]:
    """Best plan by exhaustive enumeration, or ``None`` when no plan is feasible.

    Ties go to the lexicographically smallest flattened action-bit sequence.
    """
    bnn.check(problem)
    m, n, H = problem.n_action, problem.n_state, problem.horizon
    choices = np.array(list(itertools.product((False, True), repeat=m)), dtype=bool).reshape(-1, m)
    action_only = [r for r in problem.global_rows if not r.state]
    per_step = int(_rows_ok(action_only, np.zeros((len(choices), n), dtype=bool), choices).sum())
    if per_step**H > limit:
        raise CapacityError(f"{per_step}^{H} action sequences exceed the enumeration guard of {limit}; shrink the instance")
    r_state = np.array(problem.reward.scaled_state, dtype=np.int64)
    r_action = np.array(problem.reward.scaled_action, dtype=np.int64)

    states = np.array([problem.initial], dtype=bool).reshape(1, n)
    history = np.zeros((1, 0), dtype=np.int64)
    reward = np.zeros(1, dtype=np.int64)
    for _ in range(H):
        k, c = len(states), len(choices)
        s = np.repeat(states, c, axis=0)
        a = np.tile(choices, (k, 1))
        idx = np.tile(np.arange(c), k)
        keep = _rows_ok(problem.global_rows, s, a)
        s, a, idx = s[keep], a[keep], idx[keep]
        hist = np.repeat(history, c, axis=0)[keep]
        rew = np.repeat(reward, c)[keep]
        nxt = bnn.forward_batch(s, a)
        reward = rew + nxt.astype(np.int64) @ r_state + a.astype(np.int64) @ r_action
        history = np.concatenate([hist, idx[:, None]], axis=1)
        states = nxt
    feasible = _rows_ok(problem.goal_rows, states, np.zeros((len(states), m), dtype=bool))
    if not feasible.any():
        return None
    rewards = np.where(feasible, reward, np.iinfo(np.int64).min)
    best = int(np.argmax(rewards))
    assert not (reward[feasible] > reward[best]).any()
    plan = [tuple(bool(v) for v in choices[i]) for i in history[best]]
    traj = simulate(bnn, problem, plan)
    assert traj.feasible and traj.scaled_reward == int(reward[best])
    return traj
