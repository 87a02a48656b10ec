"""Instance manifests, WCNF files, solver output and plan files."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Optional, Sequence, Union

import jsonschema

from .bnn import BatchNormParams, Bnn, BnnLayer, compute_bias
from .cnf import WcnfFormula
from .encoder import EncodingArtifact, VarAtlas
from .errors import ManifestError, ParameterError, StructuralError
from .model import Binarization, LinearConstraint, PlanningProblem, RewardSpec, validate_problem

FORMAT = "bnnplan-instance"
VERSION = "1.0"
GENERATOR = "bnnplan 0.1.0"
WCNF_FORMATS = ("wcnf2021", "wcnf2022")


@dataclass(frozen=True)
class InstanceManifest:
    problem: PlanningProblem
    bnn: Bnn
    meta: dict = field(default_factory=dict, compare=True, hash=False)


# --- manifests -------------------------------------------------------------------


def _schema() -> dict:
    text = resources.files("bnnplan").joinpath("schemas/instance.v1.json").read_text()
    return json.loads(text)


_VALIDATOR = None


def _validator():
    global _VALIDATOR
    if _VALIDATOR is None:
        _VALIDATOR = jsonschema.Draft202012Validator(_schema())
    return _VALIDATOR


def json_path(parts: Sequence[Union[str, int]]) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out


def manifest_to_dict(m: InstanceManifest) -> dict:
    p, bnn = m.problem, m.bnn
    rows = lambda terms: [[i, c] for i, c in terms]  # noqa: E731
    problem = {
        "state_bits": list(p.state_names),
        "action_bits": list(p.action_names),
        "binarizations": [{"name": b.name, "start": b.start, "m1": b.m1, "m2": b.m2} for b in p.binarizations],
        "global_rows": [{"state": rows(r.state), "action": rows(r.action), "bound": r.bound} for r in p.global_rows],
        "goal_rows": [{"state": rows(r.state), "bound": r.bound} for r in p.goal_rows],
        "reward": {"state": list(p.reward.state), "action": list(p.reward.action), "scale_pow10": p.reward.scale_pow10},
        "initial": [int(bool(v)) for v in p.initial],
        "horizon": p.horizon,
    }
    layers = []
    for layer in bnn.layers:
        entry = {"weights": [list(row) for row in layer.weights], "bias": list(layer.bias)}
        if layer.batchnorm is not None:
            entry["batchnorm"] = [
                {"mu": b.mu, "sigma2": b.sigma2, "eps": b.eps, "gamma": b.gamma, "beta": b.beta} for b in layer.batchnorm
            ]
        layers.append(entry)
    net = {
        "widths": list(bnn.widths),
        "layers": layers,
        "input_map": [[k, i] for k, i in bnn.input_map],
        "output_map": list(bnn.output_map),
        "uncovered_state_bits": bnn.uncovered,
    }
    meta = {"generator": GENERATOR}
    meta.update(m.meta)
    return {"format": FORMAT, "version": VERSION, "problem": problem, "bnn": net, "meta": meta}


def dumps_manifest(m: InstanceManifest) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace, trailing newline."""
    return json.dumps(manifest_to_dict(m), sort_keys=True, separators=(",", ":")) + "\n"


def write_manifest(m: InstanceManifest, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_manifest(m))


def manifest_from_dict(doc: dict) -> InstanceManifest:
    if isinstance(doc, dict) and isinstance(doc.get("version"), str):
        major = doc["version"].split(".")[0]
        if major.isdigit() and int(major) > int(VERSION.split(".")[0]):
            raise ManifestError("version", f"manifest version {doc['version']} is newer than supported {VERSION}")
    errors = sorted(_validator().iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise ManifestError(json_path(list(e.absolute_path)), e.message)

    pd, bd = doc["problem"], doc["bnn"]
    constraints = [
        LinearConstraint(tuple(map(tuple, r["state"])), tuple(map(tuple, r["action"])), r["bound"], "global")
        for r in pd["global_rows"]
    ] + [LinearConstraint(tuple(map(tuple, r["state"])), (), r["bound"], "goal") for r in pd["goal_rows"]]
    rw = pd["reward"]
    problem = PlanningProblem(
        state_names=tuple(pd["state_bits"]),
        action_names=tuple(pd["action_bits"]),
        initial=tuple(bool(v) for v in pd["initial"]),
        horizon=pd["horizon"],
        constraints=tuple(constraints),
        reward=RewardSpec(tuple(rw["state"]), tuple(rw["action"]), rw["scale_pow10"]),
        binarizations=tuple(Binarization(b["name"], b["start"], b["m1"], b["m2"]) for b in pd["binarizations"]),
    )
    issues = validate_problem(problem)
    if issues:
        raise ManifestError("problem", "; ".join(issues))

    widths = bd["widths"]
    if len(widths) != len(bd["layers"]) + 1:
        raise ManifestError("bnn.widths", f"{len(widths)} widths for {len(bd['layers'])} weight layers")
    if widths[0] != len(bd["input_map"]):
        raise ManifestError("bnn.input_map", f"{len(bd['input_map'])} entries, widths[0] is {widths[0]}")
    layers = []
    for k, ld in enumerate(bd["layers"]):
        where = f"bnn.layers[{k}]"
        fan_in, width = widths[k], widths[k + 1]
        if len(ld["weights"]) != fan_in:
            raise ManifestError(f"{where}.weights", f"expected {fan_in} rows, got {len(ld['weights'])}")
        for i, row in enumerate(ld["weights"]):
            if len(row) != width:
                raise ManifestError(f"{where}.weights[{i}]", f"expected {width} entries, got {len(row)}")
        bn = None
        if "batchnorm" in ld:
            if len(ld["batchnorm"]) != width:
                raise ManifestError(f"{where}.batchnorm", f"expected {width} entries")
            bn = tuple(BatchNormParams(**b) for b in ld["batchnorm"])
            try:
                derived = [compute_bias(b) for b in bn]
            except ParameterError as exc:
                raise ManifestError(f"{where}.batchnorm", str(exc)) from None
        if "bias" in ld:
            if len(ld["bias"]) != width:
                raise ManifestError(f"{where}.bias", f"expected {width} entries, got {len(ld['bias'])}")
            bias = tuple(ld["bias"])
            if bn is not None:
                for j, (given, want) in enumerate(zip(bias, derived)):
                    if given != want:
                        raise ManifestError(f"{where}.bias[{j}]", f"{given} disagrees with batch-norm bias {want}")
        else:
            bias = tuple(derived)
        layers.append(BnnLayer(tuple(tuple(r) for r in ld["weights"]), bias, bn))
    bnn = Bnn(tuple(layers), tuple((k, i) for k, i in bd["input_map"]), tuple(bd["output_map"]), bd["uncovered_state_bits"])
    issues = bnn.problems(problem)
    if issues:
        raise ManifestError("bnn", "; ".join(issues))
    meta = {k: v for k, v in doc["meta"].items() if k != "generator"}
    return InstanceManifest(problem, bnn, meta)


def loads_manifest(text: str) -> InstanceManifest:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError("", f"not JSON: {exc}") from None
    return manifest_from_dict(doc)


def read_manifest(path: str) -> InstanceManifest:
    with open(path) as fh:
        return loads_manifest(fh.read())


# --- WCNF ------------------------------------------------------------------------


def _atlas_comments(a: EncodingArtifact) -> list[str]:
    atlas = a.atlas
    lines = [f"c horizon {atlas.horizon}"]
    if atlas.xs and atlas.xs[0]:
        lines.append(f"c x vars {atlas.xs[0][0]}..{atlas.xs[-1][-1]} (step-major, {len(atlas.xs[0])} per step)")
    if atlas.ys and atlas.ys[0]:
        lines.append(f"c y vars {atlas.ys[0][0]}..{atlas.ys[-1][-1]} (step-major, {len(atlas.ys[0])} per step)")
    if atlas.zs:
        widths = ":".join(str(len(layer)) for layer in atlas.zs[0])
        lines.append(f"c z vars {atlas.zs[0][0][0]}..{atlas.zs[-1][-1][-1]} (step-major, layers {widths})")
    lines.append(f"c objective_offset {a.objective_offset}")
    lines.append(f"c scale_pow10 {a.scale_pow10}")
    lines.append("c reward = (sum of soft weights - cost + objective_offset) / 10^scale_pow10")
    return lines


def write_wcnf(source: Union[EncodingArtifact, WcnfFormula], sink: IO[str], fmt: str = "wcnf2021") -> None:
    """Stream a formula in the 2021 (``p wcnf`` header, top-weighted hards) or 2022 (``h``) dialect."""
    if fmt not in WCNF_FORMATS:
        raise ValueError(f"unknown WCNF format {fmt!r}")
    f = source.formula if isinstance(source, EncodingArtifact) else source
    if isinstance(source, EncodingArtifact):
        for line in _atlas_comments(source):
            sink.write(line + "\n")
    if fmt == "wcnf2021":
        top = f.top
        sink.write(f"p wcnf {f.num_vars} {f.num_clauses} {top}\n")
        prefix = f"{top} "
    else:
        prefix = "h "
    for chunk in f.hard_chunks:
        if isinstance(chunk, list):
            for c in chunk:
                sink.write(prefix + " ".join(map(str, c)) + " 0\n")
        else:
            _write_block(sink, prefix, chunk)
    for w, c in f.soft:
        sink.write(" ".join([str(w)] + [str(l) for l in c]) + " 0\n")


def _write_block(sink: IO[str], prefix: str, block, rows_per_write: int = 65536) -> None:
    """Rows of a 0-padded clause block, one clause per line."""
    width = block.shape[1]
    line = prefix + " ".join(["%d"] * width) + " 0\n"
    for start in range(0, len(block), rows_per_write):
        part = block[start : start + rows_per_write]
        text = (line * len(part)) % tuple(part.ravel().tolist())
        # literals are never 0, so a run of " 0" before the newline is padding
        for k in range(width - 1, 0, -1):
            text = text.replace(" 0" * k + " 0\n", " 0\n")
        sink.write(text)


def dumps_wcnf(source, fmt: str = "wcnf2021") -> str:
    import io as _io

    buf = _io.StringIO()
    write_wcnf(source, buf, fmt)
    return buf.getvalue()


@dataclass
class WcnfFile:
    fmt: str
    num_vars: int
    hard: list
    soft: list
    top: Optional[int] = None
    declared_clauses: Optional[int] = None


def read_wcnf(text: str) -> WcnfFile:
    """Strict reader for both dialects; rejects malformed lines."""
    header = None
    hard, soft = [], []
    max_var = 0
    for n, line in enumerate(text.splitlines(), start=1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            if header is not None or len(tok) != 5 or tok[1] != "wcnf":
                raise StructuralError(f"line {n}: bad header {line!r}")
            try:
                header = tuple(int(t) for t in tok[2:])
            except ValueError:
                raise StructuralError(f"line {n}: bad header {line!r}") from None
            continue
        if tok[-1] != "0":
            raise StructuralError(f"line {n}: clause not terminated by 0")
        try:
            lits = [int(t) for t in tok[1:-1]]
        except ValueError:
            raise StructuralError(f"line {n}: bad literal in {line!r}") from None
        if any(l == 0 for l in lits):
            raise StructuralError(f"line {n}: literal 0 inside a clause")
        max_var = max([max_var] + [abs(l) for l in lits])
        if tok[0] == "h":
            if header is not None:
                raise StructuralError(f"line {n}: 'h' line in a headed file")
            hard.append(lits)
            continue
        try:
            w = int(tok[0])
        except ValueError:
            raise StructuralError(f"line {n}: bad weight {tok[0]!r}") from None
        if header is not None and w >= header[2]:
            hard.append(lits)
        elif w >= 1:
            soft.append((w, lits))
        else:
            raise StructuralError(f"line {n}: weight {w} < 1")
    if header is None:
        return WcnfFile("wcnf2022", max_var, hard, soft)
    num_vars, num_clauses, top = header
    if max_var > num_vars:
        raise StructuralError(f"variable {max_var} exceeds header count {num_vars}")
    if len(hard) + len(soft) != num_clauses:
        raise StructuralError(f"header declares {num_clauses} clauses, found {len(hard) + len(soft)}")
    return WcnfFile("wcnf2021", num_vars, hard, soft, top, num_clauses)


def atlas_to_dict(a: EncodingArtifact) -> dict:
    atlas = a.atlas
    return {
        "horizon": atlas.horizon,
        "num_vars": a.formula.num_vars,
        "objective_offset": a.objective_offset,
        "scale_pow10": a.scale_pow10,
        "soft_total": a.formula.soft_total,
        "x": [list(r) for r in atlas.xs],
        "y": [list(r) for r in atlas.ys],
        "z": [[list(layer) for layer in step] for step in atlas.zs],
    }


def atlas_from_dict(doc: dict) -> VarAtlas:
    return VarAtlas(
        doc["horizon"],
        tuple(tuple(r) for r in doc["x"]),
        tuple(tuple(r) for r in doc["y"]),
        tuple(tuple(tuple(layer) for layer in step) for step in doc["z"]),
    )


# --- solver output ---------------------------------------------------------------

_STATUS = {
    "OPTIMUM FOUND": "optimum",
    "OPTIMUM": "optimum",
    "SATISFIABLE": "sat",
    "UNSATISFIABLE": "unsat",
    "UNKNOWN": "unknown",
}


@dataclass(frozen=True)
class SolverOutput:
    status: str
    model: tuple[int, ...]
    cost: Optional[int]


def parse_solver_output(text: str) -> SolverOutput:
    status = None
    cost = None
    v_lines = []
    for line in text.splitlines():
        if line.startswith("s "):
            status = _STATUS.get(line[2:].strip().upper(), "unknown")
        elif line.startswith("o "):
            try:
                cost = int(line[2:].split()[0])
            except (ValueError, IndexError):
                pass
        elif line.startswith("v ") or line == "v":
            v_lines.append(line[1:].split())
    if status is None:
        return SolverOutput("unknown", (), None)
    model: list[int] = []
    bitstring = (
        len(v_lines) == 1
        and len(v_lines[0]) == 1
        and re.fullmatch(r"[01]+", v_lines[0][0]) is not None
        and v_lines[0][0] != "0"
    )
    if bitstring:
        model = [i if ch == "1" else -i for i, ch in enumerate(v_lines[0][0], start=1)]
    else:
        for tok in (t for line in v_lines for t in line):
            lit = int(tok)
            if lit != 0:
                model.append(lit)
    return SolverOutput(status, tuple(model), cost)


# --- plans -----------------------------------------------------------------------


def dumps_plan(plan: Sequence[Sequence[bool]]) -> str:
    return "[\n" + ",\n".join("  " + json.dumps([int(bool(b)) for b in step]) for step in plan) + "\n]\n"


def loads_plan(text: str) -> list[tuple[bool, ...]]:
    doc = json.loads(text)
    if not isinstance(doc, list) or not all(isinstance(s, list) for s in doc):
        raise StructuralError("a plan is a JSON list of per-step action-bit lists")
    out = []
    for t, step in enumerate(doc, start=1):
        if any(b not in (0, 1) or isinstance(b, float) for b in step):
            raise StructuralError(f"step {t}: action bits must be 0 or 1")
        out.append(tuple(bool(b) for b in step))
    return out
