import itertools
import subprocess
import sys

from hypothesis import given, strategies as st

from bnnplan.io import dumps_wcnf, parse_solver_output
from bnnplan.cnf import WcnfFormula
from bnnplan.minisolver import OPTIMUM, UNSAT, project_models, solve_maxsat

NV = 5
lit = st.integers(1, NV).flatmap(lambda v: st.sampled_from((v, -v)))
clause = st.lists(lit, min_size=1, max_size=3)


def brute(hard, soft):
    best = None
    for bits in itertools.product((False, True), repeat=NV):
        val = lambda l: bits[abs(l) - 1] == (l > 0)  # noqa: E731
        if all(any(map(val, c)) for c in hard):
            cost = sum(w for w, c in soft if not any(map(val, c)))
            best = cost if best is None else min(best, cost)
    return best


@given(st.lists(clause, max_size=8), st.lists(st.tuples(st.integers(1, 5), clause), max_size=6))
def test_optimum_matches_enumeration(hard, soft):
    status, cost, model = solve_maxsat(NV, hard, soft)
    want = brute(hard, soft)
    if want is None:
        assert status == UNSAT
        return
    assert status == OPTIMUM and cost == want
    val = {abs(l): l > 0 for l in model}
    assert all(any(val[abs(l)] == (l > 0) for l in c) for c in hard)
    assert sum(w for w, c in soft if not any(val[abs(l)] == (l > 0) for l in c)) == cost


@given(st.lists(clause, max_size=8))
def test_projection_matches_enumeration(hard):
    got = project_models(NV, hard, [1, 3])
    want = set()
    for bits in itertools.product((False, True), repeat=NV):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in hard):
            want.add((bits[0], bits[2]))
    assert got == want


def test_command_line(tmp_path):
    f = WcnfFormula()
    a, b = f.new_var(), f.new_var()
    f.add_hard([a, b])
    f.add_soft(3, [-a])
    f.add_soft(2, [-b])
    path = tmp_path / "x.wcnf"
    path.write_text(dumps_wcnf(f))
    proc = subprocess.run([sys.executable, "-m", "bnnplan.minisolver", str(path)], capture_output=True, text=True)
    out = parse_solver_output(proc.stdout)
    assert proc.returncode == 30 and out.status == "optimum" and out.cost == 2
    assert set(out.model) == {-1, 2}
