"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even under
output capture) or directly as a script.
"""

import itertools
import math
import os
import sys
import time
import warnings

import numpy as np
import pytest

from bnnplan.bnn import activation_threshold, brute_force_optimal, forward, neuron_fires, simulate
from bnnplan.cli import run
from bnnplan.cnf import complete_assignment, eval_clauses
from bnnplan.domains import (
    ARCHITECTURES,
    FAMILIES,
    DomainSpec,
    generate,
    navigation_valid_inputs,
    random_instance,
)
from bnnplan.driver import solve
from bnnplan.encoder import encode, interface_assignment
from bnnplan.io import read_manifest, read_wcnf
from bnnplan.minisolver import project_models

sys.path.insert(0, os.path.dirname(__file__))
from conftest import MINISOLVER, all_plans  # noqa: E402


def report(capsys, number, title, ok, detail, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f", {elapsed:.1f}s"
        if limit is not None:
            timing += f" of {limit:g}s"
            ok = ok and elapsed < limit
    line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail}{timing})"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


# --- 1 ---------------------------------------------------------------------------


def test_c1_architecture_fidelity(capsys):
    start = time.monotonic()
    rows = []
    for (family, n), widths in sorted(ARCHITECTURES.items()):
        policies = ("x-axis", "y-axis") if family == "cellda" else (None,)
        for policy in policies:
            horizon = {"navigation": 4, "inventory": 5, "sysadmin": 2, "cellda": 8}[family]
            got = generate(DomainSpec(family, n, horizon, policy=policy)).bnn.widths
            rows.append((family, n, policy, got == widths))
    good = sum(ok for *_, ok in rows)
    bad = [r[:3] for r in rows if not r[3]]
    report(capsys, 1, "architecture fidelity", len(rows) == 9 and not bad, f"{good}/{len(rows)} rows match {bad or ''}".strip(), time.monotonic() - start, 1)


# --- 2 ---------------------------------------------------------------------------


def test_c2_grid_fidelity(capsys, tmp_path):
    start = time.monotonic()
    want = {"navigation": 21, "inventory": 8, "sysadmin": 6, "cellda": 10}
    got = {}
    for family in FAMILIES:
        out = tmp_path / family
        code = run(["grid", "--family", family, "-o", str(out), "--no-wcnf"])
        got[family] = len(list(out.glob("*.json"))) if code == 0 else -code
    capsys.readouterr()
    report(capsys, 2, "grid fidelity", got == want, f"counts {got}", time.monotonic() - start, 10)


# --- 3 ---------------------------------------------------------------------------


def test_c3_activation_threshold_identity(capsys):
    start = time.monotonic()
    rng = np.random.default_rng(3)
    mismatches = checked = 0
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        w = [int(v) for v in rng.choice([-1, 1], size=n)]
        b = int(rng.integers(-n - 2, n + 3))
        k = math.ceil((n - b) / 2)
        assert activation_threshold(n, b) == k
        for z in itertools.product((False, True), repeat=n):
            satisfied = sum(zi if wi > 0 else not zi for wi, zi in zip(w, z))
            mismatches += neuron_fires(w, z, b) != (satisfied >= k)
            checked += 1
    report(capsys, 3, "activation-threshold identity", mismatches == 0, f"{mismatches} mismatches over {checked} evaluations", time.monotonic() - start, 60)


# --- 4 and 6 ---------------------------------------------------------------------


def soundness_instances():
    rng = np.random.default_rng(4)
    out = []
    for k in range(20):
        n_state = int(rng.integers(2, 9))
        n_action = int(rng.integers(1, min(4, 10 - n_state) + 1))
        hidden = (int(rng.integers(4, 17)), int(rng.integers(4, 17)))
        horizon = int(rng.integers(1, 5))
        frozen = int(rng.integers(0, n_state)) if rng.random() < 0.3 else 0
        out.append(random_instance(1000 + k, n_state, n_action, hidden, horizon, frozen=frozen))
    return out


def sample_plans(problem, bnn, rng, count=500):
    """Up to half feasible plans (when enumerable), the rest uniformly random."""
    plans = []
    if problem.n_action * problem.horizon <= 12:
        feasible = [p for p in all_plans(problem) if simulate(bnn, problem, p).feasible]
        for i in rng.permutation(len(feasible))[: count // 2]:
            plans.append(feasible[i])
    while len(plans) < count:
        bits = rng.integers(0, 2, size=(problem.horizon, problem.n_action)).astype(bool)
        plans.append([tuple(bool(v) for v in row) for row in bits])
    return plans


@pytest.fixture(scope="module")
def sampled():
    rng = np.random.default_rng(6)
    rows = []
    for problem, bnn in soundness_instances():
        art = encode(problem, bnn)
        trajs = [simulate(bnn, problem, p) for p in sample_plans(problem, bnn, rng)]
        partial = np.zeros((len(trajs), art.formula.num_vars + 1), dtype=bool)
        for r, traj in enumerate(trajs):
            for v, b in interface_assignment(art, bnn, traj).items():
                partial[r, v] = b
        hard_ok, soft = eval_clauses(art.formula, complete_assignment(art.formula, partial))
        rows.append((problem, bnn, art, trajs, hard_ok, soft))
    return rows


def test_c4_encoding_soundness(capsys, sampled):
    start = time.monotonic()
    discrepancies = feasible = total = 0
    for problem, bnn, art, trajs, hard_ok, _ in sampled:
        want = np.array([t.feasible for t in trajs])
        discrepancies += int((hard_ok != want).sum())
        feasible += int(want.sum())
        total += len(trajs)
        assert max(bnn.widths) <= 16 and bnn.widths[0] <= 10 and bnn.widths[-1] <= 8 and problem.horizon <= 4
    detail = f"{discrepancies} discrepancies over {total} trajectories on {len(sampled)} instances, {feasible} feasible"
    report(capsys, 4, "encoding soundness", discrepancies == 0 and len(sampled) == 20 and 0 < feasible < total, detail)


def test_c6_objective_identity(capsys, sampled):
    bad = total = 0
    for _, _, art, trajs, _, soft in sampled:
        want = np.array([t.scaled_reward for t in trajs])
        bad += int((soft + art.objective_offset != want).sum())
        total += len(trajs)
    report(capsys, 6, "objective identity", bad == 0 and total == 10000, f"{total - bad}/{total} sampled assignments exact")


# --- 5 ---------------------------------------------------------------------------


def test_c5_encoding_completeness(capsys):
    start = time.monotonic()
    shapes = [(2, 2, 3), (3, 1, 3), (2, 1, 4), (3, 2, 2), (4, 1, 2), (2, 2, 4), (2, 3, 2), (2, 2, 2), (4, 2, 1), (3, 3, 1)]
    rng = np.random.default_rng(5)
    equal = nonempty = 0
    for k, (n_state, n_action, horizon) in enumerate(shapes):
        interface = n_action * horizon + n_state * (horizon + 1)
        assert interface <= 18
        hidden = (int(rng.integers(3, 7)),)
        problem, bnn = random_instance(500 + k, n_state, n_action, hidden, horizon)
        art = encode(problem, bnn)
        xs = [v for step in art.atlas.xs for v in step]
        got = project_models(art.formula.num_vars, art.formula.hard, xs)
        want = {tuple(b for a in p for b in a) for p in all_plans(problem) if simulate(bnn, problem, p).feasible}
        equal += got == want
        nonempty += bool(want)
    detail = f"{equal}/10 projections equal the feasible plan set, {nonempty} non-empty"
    report(capsys, 5, "encoding completeness", equal == 10 and nonempty > 0, detail, time.monotonic() - start, 300)


# --- 7 ---------------------------------------------------------------------------


def tiny_instances():
    feasible, infeasible = [], []
    for seed in itertools.count(700):
        problem, bnn = random_instance(seed, 3, 2, (4,), 2 + seed % 2)
        best = brute_force_optimal(bnn, problem)
        bucket = feasible if best is not None else infeasible
        if (len(feasible) < 8 and best is not None) or (len(infeasible) < 2 and best is None):
            bucket.append((problem, bnn, best))
        if len(feasible) == 8 and len(infeasible) == 2:
            return feasible + infeasible


def test_c7_oracle_agreement(capsys):
    start = time.monotonic()
    agree = 0
    external = os.environ.get("BNNPLAN_SOLVER")
    ext_ok = 0
    for problem, bnn, best in tiny_instances():
        art = encode(problem, bnn)
        rep = solve(art, problem, bnn, MINISOLVER)
        if best is None:
            agree += rep.status == "unsat"
        else:
            agree += rep.status == "optimum" and rep.agree and rep.recomputed_reward == best.scaled_reward
        if external:
            ext = solve(art, problem, bnn, external, timeout=60)
            if best is None:
                ext_ok += ext.status == "unsat"
            else:
                ext_ok += ext.agree is True and art.cost_to_reward(ext.solver_cost) == best.scaled_reward
    detail = f"mini-solver {agree}/10"
    ok = agree == 10
    if external:
        detail += f", external solver {ext_ok}/10"
        ok = ok and ext_ok == 10
    else:
        detail += ", no external solver configured (BNNPLAN_SOLVER unset)"
    report(capsys, 7, "oracle agreement", ok, detail, time.monotonic() - start, 600)


# --- 8 ---------------------------------------------------------------------------


def test_c8_handcrafted_navigation_anchor(capsys):
    start = time.monotonic()
    n, horizon = 3, 4
    inst = generate(DomainSpec("navigation", n, horizon, weight_mode="handcrafted-ground-truth"))
    pairs = navigation_valid_inputs(n)
    exact = sum(forward(inst.bnn, s, a) == inst.truth.step(s, a) for s, a in pairs)
    art = encode(inst.problem, inst.bnn)
    rep = solve(art, inst.problem, inst.bnn, MINISOLVER)
    manhattan = 2 * (n - 1)
    scale = 10**inst.problem.reward.scale_pow10
    reached = rep.trajectory is not None and rep.trajectory.states[-1] == tuple(i == n * n - 1 for i in range(n * n))
    ok = len(pairs) == 45 and exact == 45 and rep.status == "optimum" and rep.agree and reached
    ok = ok and rep.verdict.ok and rep.recomputed_reward == -manhattan * scale
    detail = f"{exact}/45 transitions exact, solved plan reward {rep.recomputed_reward} vs {-manhattan * scale}"
    report(capsys, 8, "handcrafted navigation anchor", ok, detail, time.monotonic() - start, 60)


# --- 9 ---------------------------------------------------------------------------


def canonical(clauses):
    width = max((len(c) for c in clauses), default=0)
    arr = np.zeros((len(clauses), width), dtype=np.int64)
    for i, c in enumerate(clauses):
        arr[i, : len(c)] = sorted(c)
    return arr[np.lexsort(arr.T[::-1])] if len(arr) else arr


def header_and_counts(path):
    header, lines = None, 0
    with open(path) as fh:
        for line in fh:
            if line.startswith("p "):
                header = tuple(int(t) for t in line.split()[2:])
            elif line[0] != "c":
                lines += 1
    return header, lines


def test_c9_determinism_and_format(capsys, tmp_path):
    start = time.monotonic()
    cases = [
        ("navigation", "3", "4", None),
        ("inventory", "2", "5", None),
        ("sysadmin", "4", "2", None),
        ("cellda", "4", "1", "y-axis"),  # horizon 1 keeps the re-parse within memory
    ]
    failures = []
    files = 0
    for family, n, h, policy in cases:
        extra = ["--policy", policy] if policy else []
        texts = {}
        for tag in ("a", "b"):
            m = tmp_path / f"{family}_{tag}.json"
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                run(["generate", "--family", family, "--n", n, "--horizon", h, "--seed", "9", "-o", str(m)] + extra)
            for fmt in ("wcnf2021", "wcnf2022"):
                w = tmp_path / f"{family}_{tag}_{fmt}.wcnf"
                run(["encode", "-i", str(m), "-o", str(w), "--format", fmt])
                texts[(tag, fmt)] = w
            texts[(tag, "manifest")] = m
        for kind in ("manifest", "wcnf2021", "wcnf2022"):
            if texts[("a", kind)].read_bytes() != texts[("b", kind)].read_bytes():
                failures.append(f"{family} {kind} not byte-identical")
        manifest = read_manifest(str(texts[("a", "manifest")]))
        formula = encode(manifest.problem, manifest.bnn).formula
        expected_hard = canonical(formula.hard)
        expected_soft = sorted((w, tuple(c)) for w, c in formula.soft)
        for fmt in ("wcnf2021", "wcnf2022"):
            path = texts[("a", fmt)]
            files += 1
            if fmt == "wcnf2021":
                header, body = header_and_counts(path)
                nv, nc, top = header
                if (nv, nc) != (formula.num_vars, body) or top <= formula.soft_total:
                    failures.append(f"{family} header {header} vs vars {formula.num_vars}, lines {body}, soft {formula.soft_total}")
            parsed = read_wcnf(path.read_text())
            soft = sorted((w, tuple(c)) for w, c in parsed.soft)
            hard = canonical(parsed.hard)
            del parsed
            if soft != expected_soft or hard.shape != expected_hard.shape or not (hard == expected_hard).all():
                failures.append(f"{family} {fmt} clause multiset differs")
            del hard
    detail = f"{files} WCNF files and {len(cases)} manifests checked" + (f"; {failures}" if failures else "")
    report(capsys, 9, "determinism and format", not failures, detail, time.monotonic() - start)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
