"""Clause database and the two cardinality-style encoders the model needs.

Literals are DIMACS integers: variable ``v >= 1`` is the literal ``v``, its
negation ``-v``.

``encode_card_le`` turns a pseudo-Boolean ``<=`` row into clauses (cardinality
network for unit coefficients, generalized totalizer otherwise).
``encode_act_bicond`` ties an output literal to "at least k inputs are true"
in both directions with a pruned odd-even merge sorting network.

Every auxiliary variable is registered with a gate definition (``or``, ``and``
or ``geq``) so test oracles can extend an assignment of the interface
literals to the auxiliaries; see :func:`complete_assignment`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import StructuralError, UnsatisfiableError


OR, AND, GEQ = "or", "and", "geq"
_OPCODES = (OR, AND)


class WcnfFormula:
    """Hard clauses, weighted soft clauses and gate definitions of auxiliaries.

    Hard clauses and definitions are kept in creation order as a list of
    chunks: plain Python lists, or int32 blocks padded with 0 (comparator
    networks, see :func:`_network`). ``hard`` and ``defs`` materialize lists.
    """

    def __init__(self):
        self.num_vars = 0
        self.soft: list[tuple[int, list[int]]] = []
        self.hard_chunks: list = []
        self.def_chunks: list = []
        self.num_hard = 0
        self._csr = None

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def _check(self, clause: Sequence[int]) -> list[int]:
        clause = [int(l) for l in clause]
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise StructuralError(f"literal {lit} outside 1..{self.num_vars}")
        return clause

    def _tail(self, chunks: list) -> list:
        if not chunks or not isinstance(chunks[-1], list):
            chunks.append([])
        return chunks[-1]

    def add_hard(self, clause: Sequence[int]) -> None:
        if not clause:
            raise UnsatisfiableError("empty hard clause")
        self._tail(self.hard_chunks).append(self._check(clause))
        self.num_hard += 1

    def add_hard_block(self, block: np.ndarray) -> None:
        """Trusted clauses as rows of a 0-padded int array."""
        if len(block):
            self.hard_chunks.append(np.ascontiguousarray(block, dtype=np.int32))
            self.num_hard += len(block)

    def add_soft(self, weight: int, clause: Sequence[int]) -> None:
        if int(weight) < 1:
            raise StructuralError(f"soft weight must be >= 1, got {weight}")
        self.soft.append((int(weight), self._check(clause)))

    def define(self, var: int, op: str, args: tuple) -> None:
        self._tail(self.def_chunks).append((var, op, args))

    def define_block(self, block: np.ndarray) -> None:
        """Rows ``(var, opcode, a, b)`` with opcode 0 = or, 1 = and."""
        if len(block):
            self.def_chunks.append(np.ascontiguousarray(block, dtype=np.int32))

    @property
    def hard(self) -> list[list[int]]:
        out = []
        for chunk in self.hard_chunks:
            if isinstance(chunk, list):
                out.extend(chunk)
            else:
                out.extend([l for l in row if l] for row in chunk.tolist())
        return out

    @property
    def defs(self) -> list[tuple[int, str, tuple]]:
        out = []
        for chunk in self.def_chunks:
            if isinstance(chunk, list):
                out.extend(chunk)
            else:
                out.extend((v, _OPCODES[op], (x, y)) for v, op, x, y in chunk.tolist())
        return out

    @property
    def soft_total(self) -> int:
        return sum(w for w, _ in self.soft)

    @property
    def top(self) -> int:
        return self.soft_total + 1

    @property
    def num_clauses(self) -> int:
        return self.num_hard + len(self.soft)


@dataclass(frozen=True)
class PbRow:
    """``sum(coeff * lit) <= bound``."""

    terms: tuple[tuple[int, int], ...]
    bound: int

    @property
    def is_normalized(self) -> bool:
        return all(c > 0 for c, _ in self.terms)


def normalize_pb(row: PbRow) -> PbRow:
    terms, bound = [], row.bound
    for c, lit in row.terms:
        if c > 0:
            terms.append((c, lit))
        elif c < 0:
            # c*x = c - c*(not x)
            terms.append((-c, -lit))
            bound -= c
    return PbRow(tuple(terms), bound)


# --- sorting / selection networks -------------------------------------------------


def _oddeven_merge(lo: int, hi: int, r: int):
    step = r * 2
    if step < hi - lo:
        yield from _oddeven_merge(lo, hi, step)
        yield from _oddeven_merge(lo + r, hi, step)
        yield from ((i, i + r) for i in range(lo + r, hi - r, step))
    else:
        yield (lo, lo + r)


def _oddeven_merge_sort(lo: int, hi: int):
    if hi - lo >= 1:
        mid = lo + (hi - lo) // 2
        yield from _oddeven_merge_sort(lo, mid)
        yield from _oddeven_merge_sort(mid + 1, hi)
        yield from _oddeven_merge(lo, hi, 1)


def sorting_network(n: int) -> list[tuple[int, int]]:
    """Batcher comparators for a power-of-two width >= n; (i, j) puts the max on i."""
    size = 1 << max(n - 1, 0).bit_length()
    return list(_oddeven_merge_sort(0, size - 1)) if size > 1 else []


FALSE = -1


@lru_cache(maxsize=None)
def selection_network(n: int, k: int):
    """Comparators deciding the k-th largest of n Booleans.

    Returns ``(ops, out)``. Symbols ``0..n-1`` are the inputs; each op is
    ``(a, b, hi, lo)`` where ``hi``/``lo`` are fresh symbols (``None`` when
    that output is never read). Padding wires are constant false and their
    comparators fold away; comparators outside the cone of output ``k-1``
    are dropped.
    """
    size = 1 << max(n - 1, 0).bit_length()
    wires = list(range(n)) + [FALSE] * (size - n)
    nxt = n
    raw = []
    for i, j in sorting_network(n):
        a, b = wires[i], wires[j]
        if b == FALSE:
            continue
        if a == FALSE:
            wires[i], wires[j] = b, FALSE
            continue
        wires[i], wires[j] = nxt, nxt + 1
        raw.append((a, b, nxt, nxt + 1))
        nxt += 2
    out = wires[k - 1]
    needed = {out}
    kept = []
    for a, b, hi, lo in reversed(raw):
        if hi in needed or lo in needed:
            kept.append((a, b, hi if hi in needed else None, lo if lo in needed else None))
            needed.update((a, b))
    kept.reverse()
    return tuple(kept), out


@lru_cache(maxsize=None)
def _template(n: int, k: int, both_sides: bool):
    """Clause/definition rows of a selection network over symbolic codes.

    Code ``c`` stands for input ``c - 1`` when ``1 <= c <= n`` and for the
    ``c - n``-th fresh variable above; negative codes negate. Fresh variables
    are numbered in comparator order (hi before lo).
    """
    ops, out = selection_network(n, k)
    code = {i: i + 1 for i in range(n)}
    fresh = 0
    clauses, defs = [], []
    for a, b, hi, lo in ops:
        x, y = code[a], code[b]
        if hi is not None:
            fresh += 1
            h = code[hi] = n + fresh
            defs.append((h, 0, x, y))
            clauses += [(-x, h, 0), (-y, h, 0)]
            if both_sides:
                clauses.append((x, y, -h))
        if lo is not None:
            fresh += 1
            l = code[lo] = n + fresh
            defs.append((l, 1, x, y))
            clauses.append((-x, -y, l))
            if both_sides:
                clauses += [(x, -l, 0), (y, -l, 0)]
    clauses = np.array(clauses, dtype=np.int64).reshape(-1, 3)
    defs = np.array(defs, dtype=np.int64).reshape(-1, 4)
    return clauses, defs, fresh, code[out]


def _network(f: WcnfFormula, lits: Sequence[int], k: int, both_sides: bool) -> int:
    """Instantiate the selection network for the k-th largest of ``lits``; returns its output literal."""
    n = len(lits)
    clauses, defs, fresh, out = _template(n, k, both_sides)
    lookup = np.concatenate([[0], f._check(lits), np.arange(f.num_vars + 1, f.num_vars + fresh + 1)])
    if lookup.size and abs(lookup).max() >= 2**31:
        raise StructuralError("variable numbers exceed 32 bits")
    f.num_vars += fresh
    sub = lambda c: np.sign(c) * lookup[np.abs(c)]  # noqa: E731
    f.add_hard_block(sub(clauses))
    if len(defs):
        f.define_block(np.column_stack([lookup[defs[:, 0]], defs[:, 1], sub(defs[:, 2]), sub(defs[:, 3])]))
    return int(np.sign(out) * lookup[abs(out)])


def encode_act_bicond(f: WcnfFormula, lits: Sequence[int], k: int, out: int) -> None:
    """Clauses for ``out <-> (number of true lits >= k)``."""
    if not lits:
        raise StructuralError("activation needs at least one input literal")
    if k <= 0:
        f.add_hard([out])
        return
    if k > len(lits):
        f.add_hard([-out])
        return
    kth = _network(f, lits, k, both_sides=True)
    f.add_hard([-out, kth])
    f.add_hard([out, -kth])


def _totalizer(f: WcnfFormula, terms: Sequence[tuple[int, int]], cap: int) -> dict[int, int]:
    """Node outputs ``{v: lit}`` with ``lit`` forced true when the node sum >= v (capped)."""
    if len(terms) == 1:
        c, lit = terms[0]
        return {min(c, cap): lit}
    mid = len(terms) // 2
    left = _totalizer(f, terms[:mid], cap)
    right = _totalizer(f, terms[mid:], cap)
    combos = []
    for a, la in [(0, None)] + sorted(left.items()):
        for b, lb in [(0, None)] + sorted(right.items()):
            if a or b:
                combos.append((min(a + b, cap), la, lb))
    lits = tuple(l for _, l in terms)
    coeffs = tuple(c for c, _ in terms)
    node = {}
    for v in sorted({v for v, _, _ in combos}):
        node[v] = f.new_var()
        f.define(node[v], GEQ, (lits, coeffs, v))
    for v, la, lb in combos:
        f.add_hard([-l for l in (la, lb) if l is not None] + [node[v]])
    return node


def encode_card_le(f: WcnfFormula, row: PbRow) -> None:
    """Clauses whose projection onto the row's literals is ``sum <= bound``."""
    row = normalize_pb(row)
    if row.bound < 0:
        raise UnsatisfiableError(f"row with bound {row.bound} < 0 after normalisation")
    if sum(c for c, _ in row.terms) <= row.bound:
        return
    lits = [l for _, l in row.terms]
    if all(c == 1 for c, _ in row.terms):
        if row.bound == 0:
            for lit in lits:
                f.add_hard([-lit])
            return
        over = _network(f, lits, row.bound + 1, both_sides=False)
        f.add_hard([-over])
        return
    cap = row.bound + 1
    root = _totalizer(f, list(row.terms), cap)
    if cap in root:
        f.add_hard([-root[cap]])


# --- evaluation ------------------------------------------------------------------

Assignment = Union[np.ndarray, Sequence[bool], Mapping[int, bool]]


def _as_array(f: WcnfFormula, assignment: Assignment) -> np.ndarray:
    if isinstance(assignment, Mapping):
        missing = [v for v in range(1, f.num_vars + 1) if v not in assignment]
        if missing:
            raise StructuralError(f"assignment misses variables, first {missing[0]}")
        arr = np.zeros(f.num_vars + 1, dtype=bool)
        for v in range(1, f.num_vars + 1):
            arr[v] = bool(assignment[v])
        return arr
    arr = np.asarray(assignment, dtype=bool)
    if arr.shape[-1] < f.num_vars + 1:
        raise StructuralError(f"assignment covers {arr.shape[-1] - 1} of {f.num_vars} variables")
    return arr


def _pack_chunks(chunks):
    lits, lengths = [], []
    for chunk in chunks:
        if isinstance(chunk, list):
            lits.append(np.array([l for c in chunk for l in c], dtype=np.int64))
            lengths.append(np.array([len(c) for c in chunk], dtype=np.int64))
        else:
            lits.append(chunk[chunk != 0].astype(np.int64))
            lengths.append((chunk != 0).sum(axis=1))
    lits = np.concatenate(lits) if lits else np.zeros(0, np.int64)
    lengths = np.concatenate(lengths) if lengths else np.zeros(0, np.int64)
    starts = np.concatenate([[0], np.cumsum(lengths)[:-1]]).astype(np.int64) if len(lengths) else lengths
    return np.abs(lits), lits < 0, starts


def _csr(f: WcnfFormula):
    key = (f.num_hard, len(f.soft))
    if f._csr is None or f._csr[0] != key:
        weights = np.array([w for w, _ in f.soft], dtype=np.int64)
        f._csr = (key, _pack_chunks(f.hard_chunks), _pack_chunks([[c for _, c in f.soft]]), weights)
    return f._csr[1:]


def _clause_values(packed, arr: np.ndarray, count: int) -> np.ndarray:
    var, neg, starts = packed
    if count == 0:
        return np.zeros(arr.shape[:-1] + (0,), dtype=bool)
    # trailing False column keeps reduceat in bounds when the last clause is empty
    vals = np.concatenate([arr[..., var] ^ neg, np.zeros(arr.shape[:-1] + (1,), bool)], axis=-1)
    lengths = np.diff(np.append(starts, len(var)))
    sat = np.logical_or.reduceat(vals, starts, axis=-1)
    return np.where(lengths > 0, sat, False)


def eval_clauses(f: WcnfFormula, assignment: Assignment):
    """``(hard_ok, soft_weight)`` for a total assignment indexed by variable.

    Accepts a mapping, a vector of length ``num_vars + 1`` (index 0 ignored)
    or a ``(B, num_vars + 1)`` batch, in which case both results are arrays.
    """
    arr = _as_array(f, assignment)
    hard, soft, weights = _csr(f)
    hard_ok = _clause_values(hard, arr, f.num_hard).all(axis=-1)
    soft_w = (_clause_values(soft, arr, len(f.soft)) * weights).sum(axis=-1)
    if arr.ndim == 1:
        return bool(hard_ok), int(soft_w)
    return hard_ok, soft_w


def _lit_values(arr: np.ndarray, lit: int) -> np.ndarray:
    return ~arr[:, -lit] if lit < 0 else arr[:, lit]


def complete_assignment(f: WcnfFormula, partial: np.ndarray) -> np.ndarray:
    """Fill auxiliary variables of a ``(B, num_vars + 1)`` batch from their gate definitions."""
    arr = np.array(partial, dtype=bool, copy=True)
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[None, :]
    if arr.shape[1] < f.num_vars + 1:
        arr = np.concatenate([arr, np.zeros((arr.shape[0], f.num_vars + 1 - arr.shape[1]), bool)], axis=1)
    for chunk in f.def_chunks:
        rows = chunk.tolist() if not isinstance(chunk, list) else chunk
        for row in rows:
            if len(row) == 4:
                var, op, x, y = row
                op, args = _OPCODES[op], (x, y)
            else:
                var, op, args = row
            if op == OR:
                arr[:, var] = _lit_values(arr, args[0]) | _lit_values(arr, args[1])
            elif op == AND:
                arr[:, var] = _lit_values(arr, args[0]) & _lit_values(arr, args[1])
            else:
                lits, coeffs, v = args
                total = sum(c * _lit_values(arr, l).astype(np.int64) for l, c in zip(lits, coeffs))
                arr[:, var] = total >= v
    return arr[0] if squeeze else arr
