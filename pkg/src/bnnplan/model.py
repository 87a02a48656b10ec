"""Planning-problem data model.

A problem is a fixed horizon ``H``, Boolean state and action bits, linear rows
over those bits (global rows hold at every step, goal rows at the final
state), a linear reward and the initial state. Integer-valued state variables
are carried as groups of bits in a signed fixed-point layout (see
:class:`Binarization`); constraints over them are expanded into bit rows with
:func:`int_terms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ParameterError, StructuralError

MAX_SCALE_POW10 = 6

Number = Union[int, str, Fraction, Decimal]
Terms = Union[Mapping[int, int], Iterable[tuple[int, int]]]


def _pow10(exp: int) -> Union[int, Fraction]:
    return 10**exp if exp >= 0 else Fraction(1, 10**-exp)


@dataclass(frozen=True)
class Binarization:
    """``m1`` consecutive state bits encoding one integer, least significant first.

    Bit ``start + m1 - 1`` is the sign bit with weight ``-2**(m1-1)``; the
    whole value is scaled by ``10**m2``.
    """

    name: str
    start: int
    m1: int
    m2: int = 0

    @property
    def bits(self) -> range:
        return range(self.start, self.start + self.m1)

    @property
    def low(self):
        return -(2 ** (self.m1 - 1)) * _pow10(self.m2)

    @property
    def high(self):
        return (2 ** (self.m1 - 1) - 1) * _pow10(self.m2)

    def bit_weights(self) -> list:
        w = [2**i for i in range(self.m1 - 1)] + [-(2 ** (self.m1 - 1))]
        return [x * _pow10(self.m2) for x in w]


def decode_binarized(bits: Sequence[bool], binarization: Binarization):
    """Value of a little-endian signed bit group (int when ``m2 >= 0``)."""
    if len(bits) != binarization.m1:
        raise StructuralError(f"expected {binarization.m1} bits for {binarization.name!r}, got {len(bits)}")
    m1 = binarization.m1
    raw = -(2 ** (m1 - 1)) * int(bool(bits[m1 - 1]))
    raw += sum(2**i * int(bool(b)) for i, b in enumerate(bits[: m1 - 1]))
    return raw * _pow10(binarization.m2)


def encode_binarized(value, binarization: Binarization) -> tuple[bool, ...]:
    scaled = Fraction(value) / _pow10(binarization.m2)
    if scaled.denominator != 1:
        raise ParameterError(f"{value} is not a multiple of 10^{binarization.m2}")
    raw = int(scaled)
    m1 = binarization.m1
    if not -(2 ** (m1 - 1)) <= raw < 2 ** (m1 - 1):
        raise ParameterError(f"{value} outside the range of {binarization.name!r}")
    return tuple(bool((raw >> i) & 1) for i in range(m1))


def int_terms(binarization: Binarization, coeff: int) -> list[tuple[int, int]]:
    """Bit-level terms of ``coeff * value`` for a binarized integer."""
    if binarization.m2 < 0:
        raise ParameterError("linear rows over fractional fixed-point values are not integral")
    return [(b, coeff * w) for b, w in zip(binarization.bits, binarization.bit_weights())]


def _canon_terms(terms: Terms) -> tuple[tuple[int, int], ...]:
    items = terms.items() if isinstance(terms, Mapping) else terms
    acc: dict[int, int] = {}
    for idx, c in items:
        acc[idx] = acc.get(idx, 0) + c
    return tuple(sorted((i, c) for i, c in acc.items() if c != 0))


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(c * s) + sum(c * a) <= bound``; always stored in this form."""

    state: tuple[tuple[int, int], ...] = ()
    action: tuple[tuple[int, int], ...] = ()
    bound: int = 0
    kind: str = "global"

    def lhs(self, state: Sequence[bool], action: Sequence[bool] = ()) -> int:
        total = sum(c for i, c in self.state if state[i])
        return total + sum(c for i, c in self.action if action[i])

    def holds(self, state: Sequence[bool], action: Sequence[bool] = ()) -> bool:
        return self.lhs(state, action) <= self.bound


def le(state: Terms = (), action: Terms = (), bound: int = 0, kind: str = "global") -> list[LinearConstraint]:
    return [LinearConstraint(_canon_terms(state), _canon_terms(action), bound, kind)]


def ge(state: Terms = (), action: Terms = (), bound: int = 0, kind: str = "global") -> list[LinearConstraint]:
    neg_s = [(i, -c) for i, c in _canon_terms(state)]
    neg_a = [(i, -c) for i, c in _canon_terms(action)]
    return le(neg_s, neg_a, -bound, kind)


def eq(state: Terms = (), action: Terms = (), bound: int = 0, kind: str = "global") -> list[LinearConstraint]:
    state, action = _canon_terms(state), _canon_terms(action)
    return le(state, action, bound, kind) + ge(state, action, bound, kind)


def _to_fraction(v: Number) -> Fraction:
    if isinstance(v, float):
        raise ParameterError("reward coefficients must be exact (int, decimal string, Fraction or Decimal)")
    return Fraction(v if not isinstance(v, Decimal) else str(v))


def _decimal_str(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    for p in range(1, 64):
        scaled = v * 10**p
        if scaled.denominator == 1:
            sign = "-" if scaled < 0 else ""
            digits = str(abs(scaled.numerator)).rjust(p + 1, "0")
            return f"{sign}{digits[:-p]}.{digits[-p:]}".rstrip("0")
    raise ParameterError(f"{v} has no finite decimal expansion")


def min_scale_pow10(values: Iterable[Fraction]) -> int:
    values = list(values)
    for p in range(MAX_SCALE_POW10 + 1):
        if all((v * 10**p).denominator == 1 for v in values):
            return p
    raise ParameterError(f"reward coefficients need more than 10^{MAX_SCALE_POW10} scaling")


@dataclass(frozen=True)
class RewardSpec:
    """Per-bit reward coefficients as decimal strings.

    MaxSAT weights are ``coeff * 10**scale_pow10``, which must be integral.
    """

    state: tuple[str, ...]
    action: tuple[str, ...]
    scale_pow10: int = 0

    @classmethod
    def from_values(cls, state: Sequence[Number], action: Sequence[Number]) -> "RewardSpec":
        s = [_to_fraction(v) for v in state]
        a = [_to_fraction(v) for v in action]
        return cls(tuple(map(_decimal_str, s)), tuple(map(_decimal_str, a)), min_scale_pow10(s + a))

    @classmethod
    def zero(cls, n_state: int, n_action: int) -> "RewardSpec":
        return cls(("0",) * n_state, ("0",) * n_action, 0)

    def _scaled(self, values: Sequence[str]) -> tuple[int, ...]:
        out = []
        for v in values:
            x = Fraction(v) * 10**self.scale_pow10
            if x.denominator != 1:
                raise ParameterError(f"reward coefficient {v} not integral at 10^{self.scale_pow10}")
            out.append(int(x))
        return tuple(out)

    @property
    def scaled_state(self) -> tuple[int, ...]:
        return self._scaled(self.state)

    @property
    def scaled_action(self) -> tuple[int, ...]:
        return self._scaled(self.action)

    def scaled_value(self, state: Sequence[bool], action: Sequence[bool]) -> int:
        total = sum(c for c, b in zip(self.scaled_state, state) if b)
        return total + sum(c for c, b in zip(self.scaled_action, action) if b)


@dataclass(frozen=True)
class PlanningProblem:
    state_names: tuple[str, ...]
    action_names: tuple[str, ...]
    initial: tuple[bool, ...]
    horizon: int
    constraints: tuple[LinearConstraint, ...] = ()
    reward: RewardSpec = None
    binarizations: tuple[Binarization, ...] = ()

    def __post_init__(self):
        if self.reward is None:
            object.__setattr__(self, "reward", RewardSpec.zero(len(self.state_names), len(self.action_names)))

    @property
    def n_state(self) -> int:
        return len(self.state_names)

    @property
    def n_action(self) -> int:
        return len(self.action_names)

    @property
    def global_rows(self) -> tuple[LinearConstraint, ...]:
        return tuple(r for r in self.constraints if r.kind == "global")

    @property
    def goal_rows(self) -> tuple[LinearConstraint, ...]:
        return tuple(r for r in self.constraints if r.kind == "goal")

    def binarization(self, name: str) -> Binarization:
        for b in self.binarizations:
            if b.name == name:
                return b
        raise KeyError(name)

    def decode(self, state: Sequence[bool]) -> dict:
        """Integer values of every binarized group in ``state``."""
        return {b.name: decode_binarized([state[i] for i in b.bits], b) for b in self.binarizations}


def validate_problem(p: PlanningProblem) -> list[str]:
    """Diagnostics for every violated invariant; empty when ``p`` is well formed."""
    out: list[str] = []
    n, m = p.n_state, p.n_action
    if not isinstance(p.horizon, int) or p.horizon < 1:
        out.append(f"horizon: must be a positive integer, got {p.horizon!r}")
    if len(p.initial) != n:
        out.append(f"initial length: expected {n}, got {len(p.initial)}")
    for j, row in enumerate(p.constraints):
        if row.kind not in ("global", "goal"):
            out.append(f"constraints[{j}] kind: unknown kind {row.kind!r}")
        if row.kind == "goal" and row.action:
            out.append(f"constraints[{j}] goal over actions: goal rows may only mention state bits")
        for label, terms, size in (("state", row.state, n), ("action", row.action, m)):
            for i, c in terms:
                if not isinstance(i, int) or not 0 <= i < size:
                    out.append(f"constraints[{j}] {label} index {i} out of range")
                if not isinstance(c, int):
                    out.append(f"constraints[{j}] {label} coefficient {c!r} not integral")
        if not isinstance(row.bound, int):
            out.append(f"constraints[{j}] bound {row.bound!r} not integral")
    owner: dict[int, int] = {}
    for k, b in enumerate(p.binarizations):
        if b.m1 < 1:
            out.append(f"binarizations[{k}] m1: must be >= 1")
            continue
        if b.start < 0 or b.start + b.m1 > n:
            out.append(f"binarizations[{k}] bits: group {b.name!r} exceeds the state bits")
            continue
        for i in b.bits:
            if i in owner:
                out.append(f"binarizations[{k}] bits: bit {i} already in binarizations[{owner[i]}]")
            owner[i] = k
    r = p.reward
    if len(r.state) != n:
        out.append(f"reward state length: expected {n}, got {len(r.state)}")
    if len(r.action) != m:
        out.append(f"reward action length: expected {m}, got {len(r.action)}")
    if not 0 <= r.scale_pow10 <= MAX_SCALE_POW10:
        out.append(f"reward scale: scale_pow10 {r.scale_pow10} outside 0..{MAX_SCALE_POW10}")
    else:
        for label, values in (("state", r.state), ("action", r.action)):
            for i, v in enumerate(values):
                try:
                    ok = (Fraction(v) * 10**r.scale_pow10).denominator == 1
                except (ValueError, ZeroDivisionError):
                    ok = False
                if not ok:
                    out.append(f"reward {label}[{i}]: {v!r} not integral after scaling")
    return out
