import json
from collections import Counter

import pytest

from bnnplan.cli import run
from bnnplan.domains import random_instance
from bnnplan.io import InstanceManifest, dumps_plan, read_wcnf, write_manifest
from bnnplan.encoder import encode
from bnnplan.io import read_manifest

from conftest import MINISOLVER


@pytest.fixture
def toy_manifest(tmp_path):
    problem, bnn = random_instance(1, 2, 2, (4,), 3)
    path = tmp_path / "toy.json"
    write_manifest(InstanceManifest(problem, bnn, {"family": "toy"}), str(path))
    return path


def test_generate_is_deterministic(tmp_path):
    args = ["generate", "--family", "navigation", "--n", "3", "--horizon", "4", "--seed", "7", "-o"]
    assert run(args + [str(tmp_path / "a.json")]) == 0
    assert run(args + [str(tmp_path / "b.json")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_encode_reparses(tmp_path, toy_manifest):
    out = tmp_path / "toy.wcnf"
    assert run(["encode", "-i", str(toy_manifest), "-o", str(out)]) == 0
    f = encode(*(lambda m: (m.problem, m.bnn))(read_manifest(str(toy_manifest)))).formula
    back = read_wcnf(out.read_text())
    assert Counter(map(tuple, back.hard)) == Counter(map(tuple, f.hard))
    atlas = json.loads((tmp_path / "toy.atlas.json").read_text())
    assert atlas["num_vars"] == f.num_vars


def test_oracle_agrees_with_solve(toy_manifest, capsys):
    assert run(["oracle", "-i", str(toy_manifest)]) == 0
    oracle = json.loads(capsys.readouterr().out)
    assert run(["solve", "-i", str(toy_manifest), "--solver", MINISOLVER]) == 0
    solved = json.loads(capsys.readouterr().out)
    assert solved["recomputed_reward"] == oracle["scaled_reward"] and solved["agree"]


def test_solve_uses_environment(toy_manifest, monkeypatch, capsys):
    monkeypatch.setenv("BNNPLAN_SOLVER", MINISOLVER)
    assert run(["solve", "-i", str(toy_manifest)]) == 0
    monkeypatch.delenv("BNNPLAN_SOLVER")
    assert run(["solve", "-i", str(toy_manifest)]) == 2


def test_validate_exit_codes(tmp_path, toy_manifest, capsys):
    run(["oracle", "-i", str(toy_manifest)])
    plan = json.loads(capsys.readouterr().out)["plan"]
    good = tmp_path / "good.json"
    good.write_text(dumps_plan(plan))
    assert run(["validate", "-i", str(toy_manifest), "--plan", str(good)]) == 0
    verdicts = []
    for flip in range(6):
        bad = [list(s) for s in plan]
        bad[flip // 2][flip % 2] ^= 1
        path = tmp_path / f"bad{flip}.json"
        path.write_text(dumps_plan(bad))
        verdicts.append(run(["validate", "-i", str(toy_manifest), "--plan", str(path)]))
    assert set(verdicts) <= {0, 1}
    malformed = tmp_path / "malformed.json"
    malformed.write_text("[[0, 1]]")
    assert run(["validate", "-i", str(toy_manifest), "--plan", str(malformed)]) == 4


def test_usage_errors(tmp_path):
    assert run([]) == 2
    assert run(["generate", "--family", "navigation"]) == 2
    assert run(["generate", "--family", "navigation", "--n", "3", "--horizon", "4", "--bogus", "-o", "x"]) == 2
    assert run(["generate", "--family", "inventory", "--n", "2", "--horizon", "5", "--weight-mode", "handcrafted-ground-truth", "-o", str(tmp_path / "x")]) == 2


def test_io_and_capacity_errors(tmp_path, toy_manifest):
    assert run(["encode", "-i", str(tmp_path / "missing.json"), "-o", str(tmp_path / "x.wcnf")]) == 4
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run(["oracle", "-i", str(broken)]) == 4
    assert run(["oracle", "-i", str(toy_manifest), "--limit", "1"]) == 3


def test_grid_counts(tmp_path, capsys):
    assert run(["grid", "--family", "cellda", "-o", str(tmp_path), "--no-wcnf"]) == 0
    names = capsys.readouterr().out.split()
    assert len(names) == 10 and sorted(p.stem for p in tmp_path.glob("*.json")) == sorted(names)


def test_grid_with_wcnf(tmp_path, capsys):
    assert run(["grid", "--family", "inventory", "-o", str(tmp_path), "--jobs", "2"]) == 0
    assert len(list(tmp_path.glob("*.wcnf"))) == 8
    assert (tmp_path / "inventory_N2_H5.atlas.json").exists()
