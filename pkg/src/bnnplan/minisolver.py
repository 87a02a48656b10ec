"""Exhaustive MaxSAT solver for small formulas, used as a test-only solver.

Branch and bound over the variables of the soft clauses with unit
propagation; each candidate objective value is confirmed by a DPLL search
over the remaining variables. Complete, so the reported optimum is exact.

Run as ``python -m bnnplan.minisolver FILE.wcnf``; prints MaxSAT-evaluation
style ``o``/``s``/``v`` lines.
"""

from __future__ import annotations

import sys
from collections import defaultdict
from typing import Iterable, Iterator, Optional, Sequence

UNSAT, OPTIMUM = "UNSATISFIABLE", "OPTIMUM FOUND"


class Engine:
    """Clause database with an assignment trail and unit propagation."""

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]]):
        self.num_vars = num_vars
        self.value = [0] * (num_vars + 1)  # +1 true, -1 false, 0 free
        self.trail: list[int] = []
        self.clauses = [list(c) for c in clauses]
        self.occ: dict[int, list[int]] = defaultdict(list)
        for k, c in enumerate(self.clauses):
            for lit in c:
                self.occ[lit].append(k)
        self.ok = all(self.clauses) and self._initial_units()

    def _initial_units(self) -> bool:
        for c in self.clauses:
            if len(c) == 1 and not self.assign(c[0]):
                return False
        return True

    def lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def assign(self, lit: int) -> bool:
        """Set ``lit`` true and propagate; False on conflict (trail kept for undo)."""
        cur = self.lit_value(lit)
        if cur:
            return cur > 0
        queue = [lit]
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)
        while queue:
            falsified = -queue.pop()
            for k in self.occ.get(falsified, ()):
                unit = None
                free = 0
                for l in self.clauses[k]:
                    v = self.lit_value(l)
                    if v > 0:
                        break
                    if v == 0:
                        free += 1
                        unit = l
                else:
                    if free == 0:
                        return False
                    if free == 1:
                        self.value[abs(unit)] = 1 if unit > 0 else -1
                        self.trail.append(unit)
                        queue.append(unit)
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.value[abs(self.trail.pop())] = 0

    def walk(self, variables: Sequence[int], prune=None, phase=None) -> Iterator[None]:
        """Yield once per consistent assignment of ``variables`` reached by branching.

        State is live while suspended at a yield; the caller must restore any
        changes it makes before resuming. ``prune()`` returning True cuts the
        current node.
        """
        frames: list[tuple[int, list[int], int]] = []
        descend = True
        while True:
            if descend and not (prune is not None and prune()):
                var = next((v for v in variables if self.value[v] == 0), None)
                if var is None:
                    yield
                else:
                    first = var if (phase or {}).get(var, False) else -var
                    frames.append((var, [-first], len(self.trail)))
                    descend = self.assign(first)
                    continue
            while frames and not frames[-1][1]:
                self.undo(frames.pop()[2])
            if not frames:
                return
            var, alts, mark = frames[-1]
            self.undo(mark)
            descend = self.assign(alts.pop())

    def model(self) -> list[int]:
        return [v if self.value[v] > 0 else -v for v in range(1, self.num_vars + 1)]

    def extend(self, variables: Sequence[int]) -> Optional[list[int]]:
        """A full model extending the current state, or None; state is restored."""
        mark = len(self.trail)
        found = None
        for _ in self.walk(variables):
            found = self.model()
            break
        self.undo(mark)
        return found


def solve_maxsat(num_vars: int, hard: Sequence[Sequence[int]], soft: Sequence[tuple[int, Sequence[int]]]):
    """``(status, cost, model)``: optimum cost is the minimum falsified soft weight."""
    engine = Engine(num_vars, hard)
    if not engine.ok:
        return UNSAT, None, []
    weights = [w for w, _ in soft]
    clauses = [list(c) for _, c in soft]
    total = sum(weights)
    soft_vars = sorted({abs(l) for c in clauses for l in c})
    taken = set(soft_vars)
    rest = [v for v in range(1, num_vars + 1) if v not in taken]
    pull: dict[int, int] = defaultdict(int)
    for w, c in zip(weights, clauses):
        for l in c:
            pull[abs(l)] += w if l > 0 else -w
    phase = {v: pull[v] > 0 for v in soft_vars}
    best = [-1, None]

    def open_weight() -> int:
        ub = 0
        for w, c in zip(weights, clauses):
            if any(engine.lit_value(l) >= 0 for l in c):
                ub += w
        return ub

    for _ in engine.walk(soft_vars, prune=lambda: open_weight() <= best[0], phase=phase):
        got = open_weight()
        if got <= best[0]:
            continue
        model = engine.extend(rest)
        if model is not None:
            best = [got, model]
    if best[1] is None:
        return UNSAT, None, []
    return OPTIMUM, total - best[0], best[1]


def project_models(num_vars: int, hard: Sequence[Sequence[int]], variables: Sequence[int]) -> set[tuple[bool, ...]]:
    """Every assignment of ``variables`` that extends to a model of ``hard``."""
    engine = Engine(num_vars, hard)
    if not engine.ok:
        return set()
    taken = set(variables)
    rest = [v for v in range(1, num_vars + 1) if v not in taken]
    out = set()
    for _ in engine.walk(list(variables)):
        if engine.extend(rest) is not None:
            out.add(tuple(engine.value[v] > 0 for v in variables))
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .io import read_wcnf

    argv = list(sys.argv[1:] if argv is None else argv)
    if len(argv) != 1:
        print("usage: python -m bnnplan.minisolver FILE.wcnf", file=sys.stderr)
        return 2
    with open(argv[0]) as fh:
        wcnf = read_wcnf(fh.read())
    status, cost, model = solve_maxsat(wcnf.num_vars, wcnf.hard, wcnf.soft)
    print("c bnnplan minisolver")
    if status == UNSAT:
        print(f"s {UNSAT}")
        return 20
    print(f"o {cost}")
    print(f"s {OPTIMUM}")
    print("v " + " ".join(map(str, model)) + " 0")
    return 30


if __name__ == "__main__":
    sys.exit(main())
