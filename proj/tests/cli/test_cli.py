import csv
import json
import math
import os
import subprocess
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

CLI = os.environ.get("TLBT_CLI", "tlbt")
SCHEMAS = Path(__file__).resolve().parents[2] / "schemas"


def registry():
    reg = Registry()
    for p in SCHEMAS.glob("*.schema.json"):
        reg = reg.with_resource(p.name, Resource.from_contents(json.loads(p.read_text())))
    return reg


REGISTRY = registry()


def validate(path, schema):
    doc = json.loads(Path(path).read_text())
    s = json.loads((SCHEMAS / schema).read_text())
    Draft202012Validator(s, registry=REGISTRY).validate(doc)
    return doc


def run(*args, check=0):
    p = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    assert p.returncode == check, p.stdout + p.stderr
    return p


def read_mtx(path):
    lines = [l for l in Path(path).read_text().splitlines() if not l.startswith("%")]
    rows, cols = map(int, lines[0].split()[:2])
    vals = [float(x) for x in lines[1:]]
    return rows, cols, vals


@pytest.fixture
def scalar(tmp_path):
    run("synth", "--synth", "scalar", "--n", 1, "--m", 1, "--p", 1, "--out", tmp_path / "sys")
    validate(tmp_path / "sys" / "system.json", "system.schema.json")
    return tmp_path / "sys" / "system.json"


def test_scalar_infinite_gramian(scalar, tmp_path):
    out = tmp_path / "g"
    run("gramian", "--system", scalar, "--mode", "bt", "--out", out)
    doc = validate(out / "gramian.json", "gramian.schema.json")
    for r in doc["results"]:
        assert r["rank"] == 1
        assert r["mu"] <= 1e-8
    _, _, z = read_mtx(out / "bt_P.mtx")
    assert abs(z[0] ** 2 - 0.5) < 1e-10


def test_scalar_timelimited_factor(scalar, tmp_path):
    out = tmp_path / "g"
    run("gramian", "--system", scalar, "--mode", "tlbt", "--te", 1, "--out", out)
    validate(out / "gramian.json", "gramian.schema.json")
    _, _, z = read_mtx(out / "tlbt_P.mtx")
    assert abs(abs(z[0]) - math.sqrt(0.5 * (1 - math.exp(-2)))) < 1e-6
    with open(out / "tlbt_P_trace.csv") as f:
        header = next(csv.reader(f))
    assert header == ["k", "shift_re", "shift_im", "dim", "expm_change", "mu"]
    validate(out / "timings.json", "timings.schema.json")


def test_missing_file_exit_2(tmp_path):
    p = run("gramian", "--system", tmp_path / "none.json", "--te", 1, check=2)
    assert "not found" in p.stderr


def test_config_errors_exit_2(tmp_path):
    run("gramian", "--bogus", check=2)
    run("reduce", "--synth", "scalar", "--n", 1, "--mode", "nope", "--order", 1, "--out", tmp_path, check=2)
    run("compare", "--synth", "weakly_damped", "--n", 20, "--te", 2, "--mode", "", "--order", 2,
        "--out", tmp_path, check=2)
    run("gramian", "--synth", "weakly_damped", "--n", 20, "--te", -1, "--out", tmp_path, check=2)
    run("simulate", "--synth", "scalar", "--n", 1, "--dt", 0, "--out", tmp_path, check=2)
    run("reduce", "--synth", "weakly_damped", "--n", 20, "--te", 2, "--out", tmp_path, check=2)
    run("synth", "--preset", "bips", "--out", tmp_path, check=2)


def test_solver_failures_exit_3(tmp_path):
    run("gramian", "--synth", "weakly_damped", "--n", 60, "--te", 3, "--max-dim", 4, "--out", tmp_path, check=3)
    p = run("reduce", "--synth", "weakly_damped", "--n", 20, "--te", 2, "--order", 50, "--out", tmp_path, check=3)
    assert "RankDeficient" in p.stderr


def test_reduce_exports(tmp_path):
    out = tmp_path / "r"
    run("reduce", "--synth", "random_stable", "--n", 30, "--seed", 4, "--mode", "bt,tlbt,mtlbt", "--te", 1,
        "--order", 2, "--out", out)
    doc = validate(out / "reduce.json", "reduce.schema.json")
    stable = {m["mode"]: m["stable"] for m in doc["models"]}
    assert stable["bt"] == 1 and stable["mtlbt"] == 1
    for m in doc["models"]:
        meta = validate(out / m["name"] / "metadata.json", "rom_metadata.schema.json")
        assert meta["r"] == 2
        assert read_mtx(out / m["name"] / "A.mtx")[:2] == (2, 2)


def test_simulate_against_rom(tmp_path):
    run("reduce", "--synth", "heat_like", "--n", 40, "--te", 0.5, "--order", 6, "--out", tmp_path / "r")
    out = tmp_path / "s"
    run("simulate", "--synth", "heat_like", "--n", 40, "--te", 0.5, "--input", "step", "--rom",
        tmp_path / "r" / "tlbt_r6", "--out", out)
    doc = validate(out / "simulate.json", "simulate.schema.json")
    assert doc["E_T"] < 0.1
    with open(out / "trajectory.csv") as f:
        assert next(csv.reader(f)) == ["t", "y1", "y2", "norm"]
    with open(out / "errors.csv") as f:
        assert next(csv.reader(f)) == ["t", "E"]


def test_input_file(tmp_path):
    table = tmp_path / "u.csv"
    table.write_text("t,u1\n0,1\n10,1\n")
    run("simulate", "--synth", "scalar", "--n", 1, "--m", 1, "--p", 1, "--input", "file", "--input-file", table,
        "--dt", 0.01, "--tf", 5, "--out", tmp_path / "a")
    run("simulate", "--synth", "scalar", "--n", 1, "--m", 1, "--p", 1, "--input", "step", "--dt", 0.01, "--tf", 5,
        "--out", tmp_path / "b")
    assert (tmp_path / "a" / "trajectory.csv").read_bytes() == (tmp_path / "b" / "trajectory.csv").read_bytes()
    run("simulate", "--synth", "scalar", "--n", 1, "--input", "file", "--out", tmp_path / "c", check=2)


def test_hsv(tmp_path):
    run("hsv", "--synth", "heat_like", "--n", 30, "--mode", "bt,tlbt", "--te", 0.5, "--out", tmp_path)
    doc = validate(tmp_path / "hsv.json", "hsv.schema.json")
    for r in doc["results"]:
        v = r["values"]
        assert all(a >= b for a, b in zip(v, v[1:]))


def test_compare_deterministic(tmp_path):
    args = ["compare", "--synth", "weakly_damped", "--n", 60, "--seed", 3, "--mode", "bt,tlbt,mtlbt",
            "--order", "6,10"]
    run(*args, "--out", tmp_path / "a")
    run(*args, "--out", tmp_path / "b")
    doc = validate(tmp_path / "a" / "compare.json", "compare.schema.json")
    assert doc["t_e_source"] == "half_decay"
    assert len(doc["rows"]) == 6
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in files:
        if name == "timings.json":
            continue
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name
    with open(tmp_path / "a" / "E_T_vs_r.csv") as f:
        assert next(csv.reader(f)) == ["mode", "r", "E_T", "stable"]
