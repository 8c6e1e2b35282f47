import hashlib
import json
import os
import subprocess
import sys

import numpy as np
import pytest

import capbmo.fixtures
from capbmo.cli import main
from capbmo.grid import CubeFamilyPolicy, CubeSpec, build_grid
from capbmo.serialization import (
    atomic_write_text,
    canonical_json,
    load_fixture,
    load_function,
    load_grid,
    load_set,
    parse_cube,
    parse_policy,
    report_document,
)
from capbmo.verify import survival_curve
from capbmo.serialization import curves_to_csv
from capbmo.content import ContentParams
from capbmo.grid import step_function


# ---------------------------------------------------------------- loaders


def test_load_grid_roundtrip_and_errors():
    g = load_grid({"n": 2, "depth": 3, "root_side": 4.0})
    assert g == build_grid(2, 3, 4.0)
    g2 = load_grid({"n": 1, "depth": 2, "root_side": 2.0, "origin": [-1.0]})
    assert g2.origin == (-1.0,)
    with pytest.raises(ValueError, match="missing field"):
        load_grid({"n": 2, "depth": 3})


def test_load_function_flat_and_nested():
    g = build_grid(2, 1, 1.0)
    flat = load_function({"values": [1.0, 2.0, 3.0, 4.0]}, g)
    nested = load_function({"values": [[1.0, 2.0], [3.0, 4.0]]}, g)
    assert flat.values == pytest.approx(nested.values)
    with pytest.raises(ValueError, match="values"):
        load_function({"values": [1.0, 2.0]}, g)


def test_load_set_both_forms():
    g = build_grid(2, 1, 1.0)
    by_cells = load_set({"cells": [[0, 1], [1, 1]]}, g)
    by_ind = load_set({"indicator": [0, 1, 0, 1]}, g)
    assert np.array_equal(by_cells.membership, by_ind.membership)
    with pytest.raises(ValueError):
        load_set({"indicator": [1, 0]}, g)
    with pytest.raises(ValueError, match="cells.*indicator|indicator.*cells"):
        load_set({}, g)


def test_load_fixture_and_resolvers(tmp_path):
    path = tmp_path / "fx.json"
    path.write_text(
        json.dumps(
            {
                "grid": {"n": 1, "depth": 1, "root_side": 2.0},
                "functions": {"f": {"values": [2.0, 0.0]}},
                "weights": {"w": {"values": [1.0, 1.0]}},
                "parameters": {"delta": 1.0},
                "expectations": {"bmo": 1.0},
            }
        )
    )
    fx = load_fixture(str(path))
    assert fx.grid == build_grid(1, 1, 2.0)
    assert fx.function("f").values == pytest.approx([2.0, 0.0])
    assert fx.weight("w").values == pytest.approx([1.0, 1.0])
    assert fx.parameters == {"delta": 1.0}
    assert fx.expectations == {"bmo": 1.0}
    with pytest.raises(KeyError, match="no function named 'g'"):
        fx.function("g")
    with pytest.raises(KeyError, match="available: w"):
        fx.weight("v")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"functions": {}}))
    with pytest.raises(ValueError, match="no grid"):
        load_fixture(str(bad))


def test_parse_cube():
    g = build_grid(2, 2, 4.0)
    assert parse_cube("root", g) == CubeSpec((0, 0), 4)
    assert parse_cube("1,2:2", g) == CubeSpec((1, 2), 2)
    with pytest.raises(ValueError, match="bad cube spec"):
        parse_cube("xyz", g)
    with pytest.raises(ValueError):
        parse_cube("3,3:2", g)  # sticks out of the grid


def test_parse_policy():
    assert parse_policy("dyadic") == CubeFamilyPolicy("dyadic")
    assert parse_policy("lattice", seed=7) == CubeFamilyPolicy("lattice", rng_seed=7)
    sampled = parse_policy("sampled:25", seed=3)
    assert sampled == CubeFamilyPolicy("sampled", sample_count=25, rng_seed=3)
    with pytest.raises(ValueError):
        parse_policy("grid")
    with pytest.raises(ValueError):
        parse_policy("sampled:many")


# ------------------------------------------------------- report emission


def test_atomic_write_overwrites_and_leaves_no_temps(tmp_path):
    target = tmp_path / "out.json"
    atomic_write_text(str(target), "first")
    atomic_write_text(str(target), "second")
    assert target.read_text() == "second"
    leftovers = [p for p in os.listdir(tmp_path) if p.endswith(".part")]
    assert leftovers == []


def test_canonical_json_is_order_independent():
    a = canonical_json({"b": 1, "a": [2.0, float("inf")]})
    b = canonical_json({"a": [2.0, float("inf")], "b": 1})
    assert a == b
    assert '"inf"' in a


def test_report_document_hash_and_timestamp():
    body = {"x": 1.5, "list": [1, 2]}
    doc1 = json.loads(report_document(body))
    doc2 = json.loads(report_document(body))
    assert doc1["body"] == doc2["body"]
    assert doc1["body_sha256"] == doc2["body_sha256"]
    want = hashlib.sha256(canonical_json(body).encode()).hexdigest()
    assert doc1["body_sha256"] == want
    assert "generated_at" in doc1
    bare = report_document(body, include_timestamp=False)
    assert bare == report_document(body, include_timestamp=False)
    assert "generated_at" not in json.loads(bare)


def test_curves_to_csv_shape():
    g = build_grid(1, 1, 2.0)
    f = step_function(g, np.array([2.0, 0.0]))
    curve = survival_curve(f, 0.0, CubeSpec((0,), 2), None, ContentParams(delta=1.0))
    text = curves_to_csv([curve])
    lines = text.strip().splitlines()
    assert lines[0] == "cube_id,t,survival,normalizer"
    assert len(lines) == 1 + len(curve.t_samples)
    cube_id, t, s, norm = lines[1].split(",")
    assert float(norm) == curve.normalizer


# ----------------------------------------------------------------- CLI


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    grid = write_json(tmp_path / "grid.json", {"n": 1, "depth": 2, "root_side": 4.0})
    fn = write_json(tmp_path / "f.json", {"values": [8.0, 0.0, 0.0, 0.0]})
    wt = write_json(tmp_path / "w.json", {"values": [1.0, 1.0, 1.0, 1.0]})
    st = write_json(tmp_path / "set.json", {"cells": [[0]]})
    return {"grid": grid, "fn": fn, "wt": wt, "set": st, "dir": tmp_path}


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_content(files, capsys):
    code, out, _ = run_cli(
        capsys, ["content", "--grid", files["grid"], "--set", files["set"], "--delta", "1.0"]
    )
    assert code == 0
    assert json.loads(out)["content"] == 1.0


def test_cli_choquet_plain_and_weighted(files, capsys):
    code, out, _ = run_cli(capsys, ["choquet", "--grid", files["grid"], "--fn", files["fn"]])
    assert code == 0
    body = json.loads(out)
    assert body["integral"] == pytest.approx(8.0)
    assert body["weighted"] is False
    code, out, _ = run_cli(
        capsys,
        ["choquet", "--grid", files["grid"], "--fn", files["fn"], "--wt", files["wt"]],
    )
    assert code == 0
    assert json.loads(out)["weighted"] is True


def test_cli_avg_and_seminorm(files, capsys):
    code, out, _ = run_cli(
        capsys, ["avg", "--grid", files["grid"], "--fn", files["fn"], "--cube", "root"]
    )
    assert code == 0
    assert json.loads(out)["average"] == pytest.approx(2.0)
    for kind in ("bmo", "bmo-signed", "blo"):
        code, out, _ = run_cli(
            capsys,
            ["seminorm", "--grid", files["grid"], "--fn", files["fn"], "--kind", kind],
        )
        assert code == 0
        assert json.loads(out)["value"] > 0
    code, out, _ = run_cli(
        capsys,
        [
            "seminorm", "--grid", files["grid"], "--fn", files["fn"],
            "--kind", "weighted", "--wt", files["wt"], "--q", "2.0",
        ],
    )
    assert code == 0
    code, _, err = run_cli(
        capsys, ["seminorm", "--grid", files["grid"], "--fn", files["fn"], "--kind", "weighted"]
    )
    assert code == 2
    assert "--wt" in err


def test_cli_weight_and_czd(files, capsys):
    code, out, _ = run_cli(
        capsys, ["weight", "--grid", files["grid"], "--wt", files["fn"], "--p", "2.0"]
    )
    assert code == 2  # fn has zeros: not a valid weight
    code, out, _ = run_cli(
        capsys, ["weight", "--grid", files["grid"], "--wt", files["wt"], "--p", "1.0"]
    )
    assert code == 0
    assert json.loads(out)["constant"] == pytest.approx(1.0)
    code, out, _ = run_cli(
        capsys,
        [
            "czd", "--grid", files["grid"], "--fn", files["fn"], "--wt", files["wt"],
            "--threshold", "3.0",
        ],
    )
    assert code == 0
    body = json.loads(out)
    assert len(body["selected"]) == 1
    assert body["parent_ratios"] == [pytest.approx(2.0)]
    assert body["verification"]["passed"] is True
    code, _, err = run_cli(
        capsys,
        [
            "czd", "--grid", files["grid"], "--fn", files["fn"], "--wt", files["wt"],
            "--threshold", "0.1",
        ],
    )
    assert code == 2
    assert "root average" in err


def test_cli_verify_single_and_multi(files, capsys, tmp_path, monkeypatch):
    fx = write_json(
        tmp_path / "fx.json",
        {
            "grid": {"n": 1, "depth": 2, "root_side": 4.0},
            "functions": {"f": {"values": [8.0, 0.0, 1.0, 3.0]}},
            "weights": {"w": {"values": [1.0, 2.0, 1.0, 0.5]}},
            "parameters": {"delta": 1.0, "seed": 11},
        },
    )
    out_path = tmp_path / "report.json"
    curves_path = tmp_path / "curves.csv"
    code, out, _ = run_cli(
        capsys,
        ["verify", "jn-bmo", "--fixture", fx, "--out", str(out_path), "--curves", str(curves_path)],
    )
    assert code == 0
    assert "john-nirenberg" in out
    doc = json.loads(out_path.read_text())
    assert doc["body"]["passed"] is True
    assert doc["body"]["seed"] == 11
    assert curves_path.read_text().startswith("cube_id,t,survival,normalizer")

    monkeypatch.setenv("CAPBMO_THREADS", "1")
    code, out, _ = run_cli(
        capsys, ["verify", "equiv", "--fixture", fx, "--fixture", fx, "--out", str(out_path)]
    )
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert isinstance(doc["body"], list) and len(doc["body"]) == 2


def test_cli_verify_failure_exit_code(files, capsys, tmp_path, monkeypatch):
    fx = write_json(
        tmp_path / "fx.json",
        {
            "grid": {"n": 1, "depth": 1, "root_side": 2.0},
            "parameters": {"delta": 1.0, "n": 1, "depth_range": [3, 4]},
        },
    )
    monkeypatch.setattr(
        capbmo.fixtures,
        "INCLUSION_THRESHOLDS",
        dict(capbmo.fixtures.INCLUSION_THRESHOLDS, bmo_pos_max=1e-9),
    )
    code, out, _ = run_cli(capsys, ["verify", "inclusions", "--fixture", fx])
    assert code == 1
    assert "FAIL" in out or "passed=False" in out or "false" in out.lower()


def test_cli_verify_error_paths(capsys, tmp_path):
    code, _, err = run_cli(capsys, ["verify", "jn-bmo", "--fixture", "missing.json"])
    assert code == 2
    assert "missing" in err
    mangled = tmp_path / "mangled.json"
    mangled.write_text('{"grid": ')
    code, _, err = run_cli(capsys, ["verify", "jn-bmo", "--fixture", str(mangled)])
    assert code == 2
    assert "line" in err and "column" in err


def test_cli_reproduce(capsys, tmp_path):
    code, out, _ = run_cli(capsys, ["reproduce"])
    assert code == 0
    assert "MISMATCH" not in out
    code, out, _ = run_cli(capsys, ["reproduce", "remark-average", "--delta", "1"])
    assert code == 0
    assert "-0.875" in out  # the delta = 1 signed average is -7/8
    out_path = tmp_path / "rep.json"
    code, out, _ = run_cli(capsys, ["reproduce", "gamma-interval", "--out", str(out_path)])
    assert code == 0
    rows = json.loads(out_path.read_text())["body"]["rows"]
    assert all(r["ok"] for r in rows)
    assert {r["quantity"] for r in rows} == {
        "plateau lower end", "plateau upper end", "minimum value",
    }
    code, _, _ = run_cli(capsys, ["reproduce", "everything"])
    assert code == 2


def test_cli_help_and_usage_errors(capsys, files):
    assert run_cli(capsys, ["--help"])[0] == 0
    for sub in ("content", "choquet", "avg", "seminorm", "weight", "czd", "verify", "reproduce"):
        assert run_cli(capsys, [sub, "--help"])[0] == 0
    assert run_cli(capsys, ["content", "--grid", files["grid"], "--bogus"])[0] == 2
    assert run_cli(capsys, ["nonsense"])[0] == 2


def test_cli_reports_are_byte_identical_across_runs(files, capsys, tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    argv = ["seminorm", "--grid", files["grid"], "--fn", files["fn"], "--kind", "bmo"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    capsys.readouterr()
    d1, d2 = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert d1["body"] == d2["body"]
    assert d1["body_sha256"] == d2["body_sha256"]
    assert canonical_json(d1["body"]) == canonical_json(d2["body"])


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "capbmo.cli", "reproduce", "remark-average"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "remark-average" in proc.stdout
