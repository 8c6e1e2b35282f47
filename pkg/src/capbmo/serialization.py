"""JSON fixture loading and deterministic report emission.

JSON is the source of truth for artifacts; CSV is derived plotting data.
Report bodies are canonical (sorted keys, fixed separators) so identical
inputs produce byte-identical files; the timestamp lives outside the
hashed body.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .grid import CubeFamilyPolicy, CubeSpec, DyadicSet, Grid, StepFunction, build_grid, set_from_cells
from .reports import to_jsonable

__all__ = [
    "Fixture",
    "load_grid",
    "load_function",
    "load_set",
    "load_fixture",
    "parse_cube",
    "parse_policy",
    "atomic_write_text",
    "report_document",
    "curves_to_csv",
]


@dataclass(frozen=True)
class Fixture:
    grid: Grid
    functions: dict[str, StepFunction] = field(default_factory=dict)
    weights: dict[str, StepFunction] = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    expectations: dict = field(default_factory=dict)

    def function(self, name: str) -> StepFunction:
        return _resolve(self.functions, name, "function")

    def weight(self, name: str) -> StepFunction:
        return _resolve(self.weights, name, "weight")


def _resolve(table: dict, name: str, kind: str) -> StepFunction:
    if name not in table:
        known = ", ".join(sorted(table)) or "none"
        raise KeyError(f"fixture has no {kind} named {name!r} (available: {known})")
    return table[name]


def load_grid(obj: dict) -> Grid:
    try:
        return build_grid(
            int(obj["n"]),
            int(obj["depth"]),
            float(obj["root_side"]),
            origin=tuple(float(x) for x in obj.get("origin", (0.0,) * int(obj["n"]))),
        )
    except KeyError as e:
        raise ValueError(f"grid file is missing field {e}") from e


def load_function(obj: dict, grid: Grid) -> StepFunction:
    values = np.asarray(obj["values"], dtype=float)
    if values.shape == grid.shape:
        values = values.ravel()
    if values.shape != (grid.num_cells,):
        raise ValueError(
            f"function has {values.size} values; grid needs {grid.num_cells}"
        )
    return StepFunction(grid, values)


def load_set(obj: dict, grid: Grid) -> DyadicSet:
    if "cells" in obj:
        return set_from_cells(grid, [tuple(int(c) for c in cell) for cell in obj["cells"]])
    if "indicator" in obj:
        vals = np.asarray(obj["indicator"], dtype=float).ravel()
        if vals.shape != (grid.num_cells,):
            raise ValueError("indicator length does not match the grid")
        return DyadicSet(grid, vals != 0)
    raise ValueError("set file needs either 'cells' or 'indicator'")


def load_fixture(path: str) -> Fixture:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if "grid" not in obj:
        raise ValueError(f"fixture {path} has no grid")
    grid = load_grid(obj["grid"])
    functions = {
        name: load_function(spec, grid) for name, spec in obj.get("functions", {}).items()
    }
    weights = {
        name: load_function(spec, grid) for name, spec in obj.get("weights", {}).items()
    }
    return Fixture(
        grid=grid,
        functions=functions,
        weights=weights,
        parameters=dict(obj.get("parameters", {})),
        expectations=dict(obj.get("expectations", {})),
    )


def parse_cube(text: str, grid: Grid) -> CubeSpec:
    """Cube strings: 'root' or 'i,j:side' in cell coordinates."""
    if text == "root":
        return CubeSpec.root(grid)
    try:
        corner_part, side_part = text.rsplit(":", 1)
        corner = tuple(int(c) for c in corner_part.split(","))
        cube = CubeSpec(corner, int(side_part))
    except (ValueError, IndexError) as e:
        raise ValueError(f"bad cube spec {text!r}; expected 'i,j:side' or 'root'") from e
    cube.validate(grid)
    return cube


def parse_policy(text: str, seed: int = 0) -> CubeFamilyPolicy:
    """Family strings: 'dyadic', 'lattice', or 'sampled:N'."""
    if text in ("dyadic", "lattice"):
        return CubeFamilyPolicy(kind=text, rng_seed=seed)
    if text.startswith("sampled:"):
        count = int(text.split(":", 1)[1])
        return CubeFamilyPolicy(kind="sampled", sample_count=count, rng_seed=seed)
    raise ValueError(f"unknown cube family {text!r}")


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def canonical_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def report_document(body, include_timestamp: bool = True) -> str:
    """Canonical report JSON: the body is deterministic and hashed; the
    timestamp sits outside it."""
    body_text = canonical_json(body)
    doc = {
        "body": json.loads(body_text),
        "body_sha256": hashlib.sha256(body_text.encode()).hexdigest(),
    }
    if include_timestamp:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def curves_to_csv(curves) -> str:
    lines = ["cube_id,t,survival,normalizer"]
    for curve in curves:
        cube_id = curve.cube.cube_id()
        for t, s in zip(curve.t_samples, curve.survival):
            lines.append(f"{cube_id},{t!r},{s!r},{curve.normalizer!r}")
    return "\n".join(lines) + "\n"
