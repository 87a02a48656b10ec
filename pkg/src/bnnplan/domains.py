"""Benchmark families with synthetic BNN transition functions.

Four families (navigation, inventory, sysadmin, cellda) with the published
network architectures and parameter grids. Learned weights are not
available, so networks are either seeded random (+-1 weights, small integer
biases) or, for navigation, handcrafted threshold logic that reproduces the
reference grid dynamics exactly.

Reference dynamics (our reading, used by oracles and the handcrafted net):

* navigation: cells row-major with row 0 on top; actions up/down/right/left
  move one cell, walls clamp; no action keeps the cell.
* inventory: the order (1 unit) arrives before demand; demand is 1 unit in
  the first half of the cycle and 0 otherwise; the level cannot drop below
  zero or exceed the largest representable value; the phase advances mod N.
* sysadmin: a rebooted machine gets age 0 and runs; otherwise age grows by
  one (capped) and a machine stops once its age reaches the cap.
* cellda: the agent moves (walls clamp to the representable part of the
  grid), then the enemy steps one cell toward the agent along its policy
  axis; the key is picked up on the key cell and the agent dies when it
  shares a cell with the enemy.

Network wiring follows the architecture widths: see ``_layout_*``. State bits
that the network does not produce are frozen (copied between steps).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from math import isqrt
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .bnn import Bnn, BnnLayer
from .errors import ConfigurationError, StructuralError
from .model import (
    Binarization,
    PlanningProblem,
    RewardSpec,
    decode_binarized,
    encode_binarized,
    eq,
    ge,
    int_terms,
    le,
)

FAMILIES = ("navigation", "inventory", "sysadmin", "cellda")
POLICIES = ("x-axis", "y-axis")
WEIGHT_MODES = ("random", "handcrafted-ground-truth")

ARCHITECTURES = {
    ("navigation", 3): (13, 36, 36, 9),
    ("navigation", 4): (20, 96, 96, 16),
    ("navigation", 5): (29, 128, 128, 25),
    ("inventory", 2): (7, 96, 96, 5),
    ("inventory", 4): (8, 128, 128, 5),
    ("sysadmin", 4): (16, 128, 128, 12),
    ("sysadmin", 5): (20, 128, 128, 128, 15),
    ("cellda", 4): (12, 256, 256, 4),
}

GRID = {
    "navigation": ((3, 4, 5), range(4, 11)),
    "inventory": ((2, 4), range(5, 9)),
    "sysadmin": ((4, 5), range(2, 5)),
    "cellda": ((4,), range(8, 13)),
}
DEFAULT_BITS = {"inventory": (4, 0), "sysadmin": (3, 0), "cellda": (2, 0)}

NAV_ACTIONS = ("up", "down", "right", "left")
INVENTORY_ORDER = 1
INVENTORY_DEMAND = 1
INVENTORY_COST = 1
INVENTORY_START_LEVEL = 1
SYSADMIN_MAX_REBOOTS = 1
CELLDA_AGENT_START = (0, 0)
CELLDA_ENEMY_START = (1, 0)
CELLDA_DOOR = (1, 1)
CELLDA_KEY = (0, 1)


@dataclass(frozen=True)
class DomainSpec:
    family: str
    n: int
    horizon: int
    policy: Optional[str] = None
    seed: int = 0
    weight_mode: str = "random"
    m1: Optional[int] = None
    m2: Optional[int] = None
    hidden: Optional[tuple[int, ...]] = None

    @property
    def bits(self) -> tuple[int, int]:
        m1, m2 = DEFAULT_BITS.get(self.family, (None, None))
        return (self.m1 if self.m1 is not None else m1, self.m2 if self.m2 is not None else m2)

    @property
    def name(self) -> str:
        base = f"{self.family}_N{self.n}_H{self.horizon}"
        return f"{base}_{self.policy}" if self.family == "cellda" else base

    def check(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1 or self.horizon < 1:
            raise ConfigurationError("n and horizon must be positive")
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigurationError("seed must fit in 64 unsigned bits")
        if self.weight_mode not in WEIGHT_MODES:
            raise ConfigurationError(f"unknown weight mode {self.weight_mode!r}")
        if self.weight_mode == "handcrafted-ground-truth" and self.family != "navigation":
            raise ConfigurationError("handcrafted weights exist for navigation only")
        if self.family == "cellda":
            if self.policy not in POLICIES:
                raise ConfigurationError(f"cellda needs a policy in {POLICIES}")
        elif self.policy is not None:
            raise ConfigurationError("policy applies to cellda only")
        sizes, horizons = GRID[self.family]
        off_grid = self.n not in sizes or self.horizon not in horizons
        if self.family in DEFAULT_BITS and self.bits != DEFAULT_BITS[self.family]:
            off_grid = True
        if off_grid:
            warnings.warn(f"{self.name} lies outside the published parameter grid", stacklevel=3)


def parameter_grid(family: str, seed: int = 0) -> list[DomainSpec]:
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}")
    sizes, horizons = GRID[family]
    policies = POLICIES if family == "cellda" else (None,)
    return [DomainSpec(family, n, h, policy=p, seed=seed) for p in policies for n in sizes for h in horizons]


# --- ground truth ----------------------------------------------------------------


def _unsigned(bits: Sequence[bool]) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b)


def _to_unsigned(value: int, width: int) -> list[bool]:
    return [bool((value >> i) & 1) for i in range(width)]


def _single_action(action: Sequence[bool]) -> Optional[int]:
    on = [i for i, a in enumerate(action) if a]
    if len(on) > 1:
        raise StructuralError("at most one movement action per step")
    return on[0] if on else None


def _nav_move(n: int, cell: int, d: Optional[int]) -> int:
    r, c = divmod(cell, n)
    if d == 0:
        r = max(r - 1, 0)
    elif d == 1:
        r = min(r + 1, n - 1)
    elif d == 2:
        c = min(c + 1, n - 1)
    elif d == 3:
        c = max(c - 1, 0)
    return r * n + c


def _step_navigation(n, state, action):
    if len(state) != n * n or len(action) != 4 or sum(map(bool, state)) != 1:
        raise StructuralError("navigation state must be one-hot over N*N cells with 4 action bits")
    cell = [bool(b) for b in state].index(True)
    nxt = _nav_move(n, cell, _single_action(action))
    return tuple(i == nxt for i in range(n * n))


def _inventory_layout(n: int, m1: int):
    phase_bits = max(1, (n - 1).bit_length())
    return m1, phase_bits


def _step_inventory(n, state, action, m1, m2):
    _, p = _inventory_layout(n, m1)
    if len(state) != m1 + p + 1 or len(action) != 1:
        raise StructuralError("inventory state/action width mismatch")
    level_bin = Binarization("level", 0, m1, m2)
    level = decode_binarized(state[:m1], level_bin)
    phase = _unsigned(state[m1 : m1 + p])
    if phase >= n or level < 0:
        raise StructuralError("inventory state outside the reference domain")
    avail = level + INVENTORY_ORDER * int(bool(action[0]))
    demand = INVENTORY_DEMAND if phase < max(1, n // 2) else 0
    met = avail >= demand
    level = min(max(avail - demand, 0), level_bin.high)
    return tuple(encode_binarized(level, level_bin)) + tuple(_to_unsigned((phase + 1) % n, p)) + (met,)


def _step_sysadmin(n, state, action, m1, m2):
    if len(state) != n * m1 + n or len(action) != n:
        raise StructuralError("sysadmin state/action width mismatch")
    ages, running = [], []
    cap = 2 ** (m1 - 1) - 1
    for i in range(n):
        b = Binarization(f"age{i + 1}", i * m1, m1, 0)
        age = decode_binarized(state[i * m1 : (i + 1) * m1], b)
        if not 0 <= age <= cap:
            raise StructuralError("sysadmin age outside the reference domain")
        run = bool(state[n * m1 + i])
        if action[i]:
            age, run = 0, True
        else:
            age = min(age + 1, cap)
            run = run and age < cap
        ages.extend(encode_binarized(age, b))
        running.append(run)
    return tuple(ages) + tuple(running)


def _step_cellda(n, state, action, m1, m2, policy):
    if len(state) != 4 * m1 + 2 or len(action) != 4:
        raise StructuralError("cellda state/action width mismatch")
    key, alive = state[4 * m1], state[4 * m1 + 1]
    bins = [Binarization(k, i * m1, m1, 0) for i, k in enumerate(("ax", "ay", "ex", "ey"))]
    ax, ay, ex, ey = (decode_binarized(state[b.start : b.start + m1], b) for b in bins)
    top = min(n - 1, bins[0].high)
    if not all(0 <= v <= top for v in (ax, ay, ex, ey)):
        raise StructuralError("cellda position outside the reference domain")
    d = _single_action(action)
    if d == 0:
        ay = min(ay + 1, top)
    elif d == 1:
        ay = max(ay - 1, 0)
    elif d == 2:
        ax = min(ax + 1, top)
    elif d == 3:
        ax = max(ax - 1, 0)
    if policy == "x-axis":
        ex += (ax > ex) - (ax < ex)
    else:
        ey += (ay > ey) - (ay < ey)
    key = key or (ax, ay) == CELLDA_KEY
    alive = alive and (ax, ay) != (ex, ey)
    bits = []
    for b, v in zip(bins, (ax, ay, ex, ey)):
        bits.extend(encode_binarized(v, b))
    return tuple(bits) + (key, alive)


def ground_truth_step(family: str, n: int, state, action, policy: Optional[str] = None, m1=None, m2=None):
    """Reference next state (as state bits) for one step of a family."""
    state = [bool(b) for b in state]
    action = [bool(a) for a in action]
    dm1, dm2 = DEFAULT_BITS.get(family, (None, None))
    m1 = dm1 if m1 is None else m1
    m2 = dm2 if m2 is None else m2
    if family == "navigation":
        return _step_navigation(n, state, action)
    if family == "inventory":
        return _step_inventory(n, state, action, m1, m2)
    if family == "sysadmin":
        return _step_sysadmin(n, state, action, m1, m2)
    if family == "cellda":
        return _step_cellda(n, state, action, m1, m2, policy or "x-axis")
    raise ConfigurationError(f"unknown family {family!r}")


@dataclass(frozen=True)
class GroundTruth:
    family: str
    n: int
    policy: Optional[str] = None
    m1: Optional[int] = None
    m2: Optional[int] = None

    def step(self, state, action):
        return ground_truth_step(self.family, self.n, state, action, self.policy, self.m1, self.m2)


# --- problem layouts -------------------------------------------------------------


class Layout(NamedTuple):
    problem: PlanningProblem
    input_map: tuple
    output_map: tuple


def _inputs(state_bits: Sequence[int], n_action: int) -> tuple:
    return tuple(("s", i) for i in state_bits) + tuple(("a", i) for i in range(n_action))


def _layout_navigation(spec: DomainSpec) -> Layout:
    n = spec.n
    cells = n * n
    goal = cells - 1
    names = tuple(f"at_{r}_{c}" for r in range(n) for c in range(n))
    rows = le(action={i: 1 for i in range(4)}, bound=1)
    rows += ge(state={goal: 1}, bound=1, kind="goal")
    rows += le(state={i: 1 for i in range(cells) if i != goal}, bound=0, kind="goal")
    problem = PlanningProblem(
        state_names=names,
        action_names=NAV_ACTIONS,
        initial=tuple(i == 0 for i in range(cells)),
        horizon=spec.horizon,
        constraints=tuple(rows),
        reward=RewardSpec.from_values([0] * cells, [-1] * 4),
    )
    return Layout(problem, _inputs(range(cells), 4), tuple(range(cells)))


def _layout_inventory(spec: DomainSpec) -> Layout:
    m1, m2 = spec.bits
    _, p = _inventory_layout(spec.n, m1)
    level = Binarization("level", 0, m1, m2)
    names = tuple(f"level_b{k + 1}" for k in range(m1)) + tuple(f"phase_b{k + 1}" for k in range(p)) + ("demand_met",)
    met = m1 + p
    rows = ge(state={met: 1}, bound=1) + ge(state={met: 1}, bound=1, kind="goal")
    state_reward = [-INVENTORY_COST * w for w in level.bit_weights()] + [0] * (p + 1)
    initial = encode_binarized(INVENTORY_START_LEVEL, level) + (False,) * p + (True,)
    problem = PlanningProblem(
        state_names=names,
        action_names=("order",),
        initial=initial,
        horizon=spec.horizon,
        constraints=tuple(rows),
        reward=RewardSpec.from_values(state_reward, [0]),
        binarizations=(level,),
    )
    return Layout(problem, _inputs(range(m1 + p + 1), 1), tuple(range(m1)) + (met,))


def _layout_sysadmin(spec: DomainSpec) -> Layout:
    n = spec.n
    m1, m2 = spec.bits
    ages = tuple(Binarization(f"age{i + 1}", i * m1, m1, m2) for i in range(n))
    names = tuple(f"age{i + 1}_b{k + 1}" for i in range(n) for k in range(m1))
    names += tuple(f"running{i + 1}" for i in range(n))
    running = [n * m1 + i for i in range(n)]
    rows = le(action={i: 1 for i in range(n)}, bound=SYSADMIN_MAX_REBOOTS)
    for r in running:
        rows += ge(state={r: 1}, bound=1)
    for r in running:
        rows += ge(state={r: 1}, bound=1, kind="goal")
    initial = sum((encode_binarized(0, b) for b in ages), ()) + (True,) * n
    problem = PlanningProblem(
        state_names=names,
        action_names=tuple(f"reboot{i + 1}" for i in range(n)),
        initial=initial,
        horizon=spec.horizon,
        constraints=tuple(rows),
        reward=RewardSpec.from_values([0] * len(names), [-1] * n),
        binarizations=ages,
    )
    # age sign bits stay out of the network: ages are non-negative
    wired = [b for age in ages for b in list(age.bits)[:-1]] + running
    return Layout(problem, _inputs(wired, n), tuple(wired))


def _layout_cellda(spec: DomainSpec) -> Layout:
    n = spec.n
    m1, m2 = spec.bits
    labels = ("agent_x", "agent_y", "enemy_x", "enemy_y")
    coords = tuple(Binarization(k, i * m1, m1, m2) for i, k in enumerate(labels))
    names = tuple(f"{k}_b{j + 1}" for k in labels for j in range(m1)) + ("has_key", "alive")
    key, alive = 4 * m1, 4 * m1 + 1
    ax, ay = coords[0], coords[1]
    rows = le(action={i: 1 for i in range(4)}, bound=1)
    for b in (ax, ay):
        rows += ge(state=int_terms(b, 1), bound=0)
        rows += le(state=int_terms(b, 1), bound=n - 1)
    rows += ge(state={alive: 1}, bound=1)
    rows += eq(state=int_terms(ax, 1), bound=CELLDA_DOOR[0], kind="goal")
    rows += eq(state=int_terms(ay, 1), bound=CELLDA_DOOR[1], kind="goal")
    rows += ge(state={key: 1}, bound=1, kind="goal")
    rows += ge(state={alive: 1}, bound=1, kind="goal")
    start = CELLDA_AGENT_START + CELLDA_ENEMY_START
    # key and alive have no output neuron, so they are frozen: the key is
    # held from the start, otherwise the goal could never be met
    initial = sum((encode_binarized(v, b) for v, b in zip(start, coords)), ()) + (True, True)
    problem = PlanningProblem(
        state_names=names,
        action_names=NAV_ACTIONS,
        initial=initial,
        horizon=spec.horizon,
        constraints=tuple(rows),
        reward=RewardSpec.from_values([0] * len(names), [-1] * 4),
        binarizations=coords,
    )
    return Layout(problem, _inputs(range(4 * m1), 4), tuple(range(2 * m1)))


_LAYOUTS = {
    "navigation": _layout_navigation,
    "inventory": _layout_inventory,
    "sysadmin": _layout_sysadmin,
    "cellda": _layout_cellda,
}


def architecture(spec: DomainSpec, layout: Optional[Layout] = None) -> tuple[int, ...]:
    layout = layout or _LAYOUTS[spec.family](spec)
    ends = (len(layout.input_map), len(layout.output_map))
    if spec.hidden is not None:
        return (ends[0],) + tuple(spec.hidden) + (ends[1],)
    row = ARCHITECTURES.get((spec.family, spec.n))
    if row is None:
        raise ConfigurationError(f"no published architecture for {spec.family} N={spec.n}; pass hidden widths")
    if (row[0], row[-1]) != ends:
        raise ConfigurationError(f"layout widths {ends} do not match architecture {row}")
    return row


# --- weights ---------------------------------------------------------------------


def _seed_sequence(spec: DomainSpec) -> np.random.SeedSequence:
    policy = POLICIES.index(spec.policy) + 1 if spec.policy in POLICIES else 0
    return np.random.SeedSequence([spec.seed, FAMILIES.index(spec.family), spec.n, policy])


def random_layers(widths: Sequence[int], rng: np.random.Generator) -> tuple[BnnLayer, ...]:
    layers = []
    for fan_in, width in zip(widths[:-1], widths[1:]):
        w = rng.integers(0, 2, size=(fan_in, width)) * 2 - 1
        r = isqrt(fan_in)
        b = rng.integers(-r, r + 1, size=width)
        layers.append(BnnLayer(tuple(tuple(int(v) for v in row) for row in w), tuple(int(v) for v in b)))
    return tuple(layers)


def _fit_layer(inputs: np.ndarray, columns: list, targets: list) -> BnnLayer:
    """Thresholds realising each target exactly on the given inputs (asserted)."""
    fan_in = inputs.shape[1]
    bias = []
    for w, target in zip(columns, targets):
        w = np.asarray(w)
        if target is None:
            bias.append(-(fan_in + 1))  # unused neuron, never fires
            continue
        count = np.where(w > 0, inputs, ~inputs).sum(axis=1)
        k = int(count[target].min())
        assert not (count[~target] >= k).any(), "target is not a threshold function of the inputs"
        bias.append(fan_in - 2 * k)
    weights = tuple(tuple(int(columns[j][i]) for j in range(len(columns))) for i in range(fan_in))
    return BnnLayer(weights, tuple(bias))


def navigation_valid_inputs(n: int):
    """All (cell, action-or-noop) pairs as (state bits, action bits)."""
    cells = n * n
    out = []
    for cell in range(cells):
        for d in (None, 0, 1, 2, 3):
            out.append((tuple(i == cell for i in range(cells)), tuple(i == d for i in range(4))))
    return out


def handcrafted_navigation_layers(n: int, widths: Sequence[int]) -> tuple[BnnLayer, ...]:
    """Three threshold layers computing the navigation grid move exactly.

    Layer 1 neurons ``at c and not d``; layer 2 one-hot events (stay at c,
    or move from c in an open direction d); output cell c' is the OR of the
    events landing there. Spare neurons are constant off.
    """
    cells = n * n
    if len(widths) != 4:
        raise ConfigurationError("handcrafted navigation needs exactly two hidden layers")
    pairs = [(c, d) for c in range(cells) for d in range(4)]
    opened = {c: [d for d in range(4) if _nav_move(n, c, d) != c] for c in range(cells)}
    events = [("stay", c, None) for c in range(cells)] + [("move", c, d) for c in range(cells) for d in opened[c]]
    if widths[1] < len(pairs) or widths[2] < len(events):
        raise ConfigurationError(f"hidden widths {widths[1:3]} too small for a {n}x{n} handcrafted net")

    samples = navigation_valid_inputs(n)
    cell_of = np.array([s.index(True) for s, _ in samples])
    act_of = np.array([a.index(True) if any(a) else -1 for _, a in samples])
    x0 = np.array([list(s) + list(a) for s, a in samples], dtype=bool)

    cols, targets = [], []
    for c, d in pairs:
        w = [-1] * (cells + 4)
        w[c] = 1
        for e in range(4):
            w[cells + e] = -1 if e == d else 1
        cols.append(w)
        targets.append((cell_of == c) & (act_of != d))
    cols += [[1] * (cells + 4)] * (widths[1] - len(pairs))
    targets += [None] * (widths[1] - len(pairs))
    l1 = _fit_layer(x0, cols, targets)
    x1 = l1.apply(x0.astype(np.float32))

    cols, targets = [], []
    for kind, c, d in events:
        w = [-1] * widths[1]
        base = pairs.index((c, 0))
        if kind == "stay":
            for e in opened[c]:
                w[base + e] = 1
            targets.append((cell_of == c) & ~np.isin(act_of, opened[c]))
        else:
            for e in range(4):
                w[base + e] = -1 if e == d else 1
            targets.append((cell_of == c) & (act_of == d))
        cols.append(w)
    cols += [[1] * widths[1]] * (widths[2] - len(events))
    targets += [None] * (widths[2] - len(events))
    l2 = _fit_layer(x1, cols, targets)
    x2 = l2.apply(x1.astype(np.float32))

    dest = [c if kind == "stay" else _nav_move(n, c, d) for kind, c, d in events]
    nxt = np.array([_nav_move(n, c, a if a >= 0 else None) for c, a in zip(cell_of, act_of)])
    cols, targets = [], []
    for cell in range(cells):
        w = [-1] * widths[2]
        for k, t in enumerate(dest):
            if t == cell:
                w[k] = 1
        cols.append(w)
        targets.append(nxt == cell)
    l3 = _fit_layer(x2, cols, targets)
    return (l1, l2, l3)


# --- generation ------------------------------------------------------------------


class Instance(NamedTuple):
    problem: PlanningProblem
    bnn: Bnn
    truth: GroundTruth


def generate(spec: DomainSpec) -> Instance:
    spec.check()
    layout = _LAYOUTS[spec.family](spec)
    widths = architecture(spec, layout)
    if spec.weight_mode == "handcrafted-ground-truth":
        layers = handcrafted_navigation_layers(spec.n, widths)
    else:
        layers = random_layers(widths, np.random.default_rng(_seed_sequence(spec)))
    uncovered = "frozen" if len(set(layout.output_map)) < layout.problem.n_state else "forbidden"
    bnn = Bnn(layers, layout.input_map, layout.output_map, uncovered)
    bnn.check(layout.problem)
    m1, m2 = spec.bits
    return Instance(layout.problem, bnn, GroundTruth(spec.family, spec.n, spec.policy, m1, m2))


def spec_meta(spec: DomainSpec) -> dict:
    return {
        "family": spec.family,
        "n": spec.n,
        "seed": spec.seed,
        "policy": spec.policy,
        "weight_mode": spec.weight_mode,
    }


def random_instance(
    seed: int,
    n_state: int,
    n_action: int,
    hidden: Sequence[int],
    horizon: int,
    n_global: int = 2,
    n_goal: int = 1,
    frozen: int = 0,
) -> tuple[PlanningProblem, Bnn]:
    """Small random problem + network for encoder/oracle cross-checks.

    Rows get coefficients in -2..2 and a bound drawn between the row's extreme
    values; rewards mix integers and one- or two-digit decimals. The last
    ``frozen`` state bits get no output neuron.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for kind, count in (("global", n_global), ("goal", n_goal)):
        for _ in range(count):
            s = {int(i): int(rng.integers(-2, 3)) for i in range(n_state) if rng.random() < 0.6}
            a = {}
            if kind == "global":
                a = {int(i): int(rng.integers(-2, 3)) for i in range(n_action) if rng.random() < 0.6}
            coeffs = [c for c in list(s.values()) + list(a.values())]
            lo = sum(c for c in coeffs if c < 0)
            hi = sum(c for c in coeffs if c > 0)
            rows += le(s, a, int(rng.integers(lo, hi + 1)), kind)
    rows.sort(key=lambda r: r.kind != "global")
    pool = ["0", "1", "-1", "2", "-0.5", "0.25", "-3", "1.5"]
    reward = RewardSpec.from_values(
        [pool[int(rng.integers(len(pool)))] for _ in range(n_state)],
        [pool[int(rng.integers(len(pool)))] for _ in range(n_action)],
    )
    problem = PlanningProblem(
        state_names=tuple(f"s{i + 1}" for i in range(n_state)),
        action_names=tuple(f"a{i + 1}" for i in range(n_action)),
        initial=tuple(bool(v) for v in rng.integers(0, 2, size=n_state)),
        horizon=horizon,
        constraints=tuple(rows),
        reward=reward,
    )
    out_bits = tuple(range(n_state - frozen))
    widths = (n_state + n_action,) + tuple(hidden) + (len(out_bits),)
    layers = random_layers(widths, rng)
    bnn = Bnn(layers, _inputs(range(n_state), n_action), out_bits, "frozen" if frozen else "forbidden")
    bnn.check(problem)
    return problem, bnn


def all_action_sequences(n_action: int, horizon: int):
    steps = list(itertools.product((False, True), repeat=n_action))
    return itertools.product(steps, repeat=horizon)
