import json
from collections import Counter

import pytest

from bnnplan.bnn import BatchNormParams, Bnn, BnnLayer
from bnnplan.domains import DomainSpec, generate, random_instance, spec_meta
from bnnplan.encoder import encode
from bnnplan.errors import ManifestError, StructuralError
from bnnplan.io import (
    InstanceManifest,
    atlas_from_dict,
    atlas_to_dict,
    dumps_manifest,
    dumps_plan,
    dumps_wcnf,
    loads_manifest,
    loads_plan,
    manifest_to_dict,
    parse_solver_output,
    read_wcnf,
)


def _family_manifest(family, n, policy=None):
    spec = DomainSpec(family, n, 2 if family == "sysadmin" else 8 if family == "cellda" else 5, policy=policy)
    inst = generate(spec)
    return InstanceManifest(inst.problem, inst.bnn, spec_meta(spec))


@pytest.mark.parametrize("family,n,policy", [("navigation", 3, None), ("inventory", 2, None), ("sysadmin", 4, None), ("cellda", 4, "y-axis")])
def test_manifest_roundtrip(family, n, policy):
    m = _family_manifest(family, n, policy)
    text = dumps_manifest(m)
    back = loads_manifest(text)
    assert back.problem == m.problem and back.bnn == m.bnn and back.meta == m.meta
    assert dumps_manifest(back) == text
    assert text.endswith("}\n") and "\n" not in text[:-1]


def test_batchnorm_roundtrip_and_check(toy):
    problem, bnn = toy
    params = [BatchNormParams("0.5", "1", "0.01", "1", str(j)) for j in range(bnn.layers[-1].width)]
    last = BnnLayer.from_batchnorm(bnn.layers[-1].weights, params)
    net = Bnn(bnn.layers[:-1] + (last,), bnn.input_map, bnn.output_map, bnn.uncovered)
    doc = manifest_to_dict(InstanceManifest(problem, net))
    assert loads_manifest(json.dumps(doc)).bnn == net
    doc["bnn"]["layers"][-1]["bias"][0] += 1
    with pytest.raises(ManifestError) as exc:
        loads_manifest(json.dumps(doc))
    assert exc.value.path == f"bnn.layers[{len(net.layers) - 1}].bias[0]"
    del doc["bnn"]["layers"][-1]["bias"]
    assert loads_manifest(json.dumps(doc)).bnn == net


def test_schema_error_path(toy):
    problem, bnn = toy
    doc = manifest_to_dict(InstanceManifest(problem, bnn))
    doc["bnn"]["layers"][0]["weights"][1][2] = 2
    with pytest.raises(ManifestError) as exc:
        loads_manifest(json.dumps(doc))
    assert exc.value.path == "bnn.layers[0].weights[1][2]"


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(version="2.0"), "version"),
        (lambda d: d["problem"].update(initial=[1]), "problem"),
        (lambda d: d["bnn"].update(widths=[5, 4]), "bnn.widths"),
        (lambda d: d["bnn"]["layers"][0]["weights"].pop(), "bnn.layers[0].weights"),
        (lambda d: d.update(extra=1), ""),
    ],
)
def test_manifest_rejections(toy, mutate, path):
    problem, bnn = toy
    doc = manifest_to_dict(InstanceManifest(problem, bnn))
    mutate(doc)
    with pytest.raises(ManifestError) as exc:
        loads_manifest(json.dumps(doc))
    assert exc.value.path == path


def test_minor_version_accepted(toy):
    doc = manifest_to_dict(InstanceManifest(*toy))
    doc["version"] = "1.7"
    loads_manifest(json.dumps(doc))


@pytest.mark.parametrize("fmt", ["wcnf2021", "wcnf2022"])
def test_wcnf_roundtrip(toy, fmt):
    art = encode(*toy)
    f = art.formula
    text = dumps_wcnf(art, fmt)
    back = read_wcnf(text)
    assert Counter(map(tuple, back.hard)) == Counter(map(tuple, f.hard))
    assert Counter((w, tuple(c)) for w, c in back.soft) == Counter((w, tuple(c)) for w, c in f.soft)
    if fmt == "wcnf2021":
        assert (back.num_vars, back.declared_clauses, back.top) == (f.num_vars, f.num_clauses, f.soft_total + 1)
        assert text.count("\np wcnf") == 1
    else:
        assert "p wcnf" not in text
    assert f"c objective_offset {art.objective_offset}" in text


@pytest.mark.parametrize(
    "text",
    [
        "p wcnf 2 1 5\n5 1 2\n",
        "p wcnf 2 2 5\n5 1 0\n",
        "p wcnf 1 1 5\n5 2 0\n",
        "p cnf 2 1\n1 0\n",
        "h 1 x 0\n",
        "0 1 0\n",
        "p wcnf 2 1 5\nh 1 0\n",
        "w 1 0\n",
    ],
)
def test_wcnf_strictness(text):
    with pytest.raises(StructuralError):
        read_wcnf(text)


def test_solver_output_variants():
    legacy = parse_solver_output("c hi\no 9\no 4\ns OPTIMUM FOUND\nv 1 -2\nv 3 0\n")
    assert legacy == parse_solver_output("o 4\ns OPTIMUM FOUND\nv 1 -2 3\n")
    assert legacy.model == (1, -2, 3) and legacy.cost == 4 and legacy.status == "optimum"
    bits = parse_solver_output("s OPTIMUM FOUND\no 1\nv 101\n")
    assert bits.model == (1, -2, 3)
    assert parse_solver_output("s UNSATISFIABLE\n").status == "unsat"
    assert parse_solver_output("o 3\nv 1 0\n").status == "unknown"
    assert parse_solver_output("s SATISFIABLE\no 7\nv 1 0\n").status == "sat"


def test_plan_roundtrip():
    plan = [(True, False), (False, False)]
    assert loads_plan(dumps_plan(plan)) == plan
    for bad in ("{}", "[[2]]", "[[0.5]]", "[1]"):
        with pytest.raises(StructuralError):
            loads_plan(bad)


def test_atlas_roundtrip():
    problem, bnn = random_instance(3, 3, 2, (4, 3), 2)
    art = encode(problem, bnn)
    doc = json.loads(json.dumps(atlas_to_dict(art)))
    assert atlas_from_dict(doc) == art.atlas
    assert doc["soft_total"] == art.formula.soft_total


@pytest.mark.parametrize("fmt", ["wcnf2021", "wcnf2022"])
def test_block_clauses_write_like_lists(fmt):
    import numpy as np

    from bnnplan.cnf import WcnfFormula

    f = WcnfFormula()
    for _ in range(12):
        f.new_var()
    f.add_hard([1, -2])
    f.add_hard_block(np.array([[3, 0, 0], [-10, 11, 0], [4, -5, 12], [10, 0, 0]]))
    f.add_hard([-1])
    f.add_soft(3, [2])
    text = dumps_wcnf(f, fmt)
    body = [l for l in text.splitlines() if not l.startswith(("p", "c"))]
    prefix = "4 " if fmt == "wcnf2021" else "h "
    assert body[:6] == [prefix + c for c in ("1 -2 0", "3 0", "-10 11 0", "4 -5 12 0", "10 0", "-1 0")]
    assert read_wcnf(text).hard == f.hard == [[1, -2], [3], [-10, 11], [4, -5, 12], [10], [-1]]
