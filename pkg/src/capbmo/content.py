"""Exact dyadic Hausdorff content and weighted content.

The content of a cell set E is the minimum of sum(side(Q_i)**delta) over
covers of E by dyadic subcubes of the root, computed by the tree
recursion c(Q) = min(side(Q)**delta, sum of child costs) with empty
subtrees at cost 0. Restricting covers to subcubes of the root loses
nothing: a dyadic cube strictly containing the root costs at least
root_side**delta, which the root cover already achieves. The same nesting
argument lets every computation run inside the minimal dyadic cube
containing the occupied cells (any dyadic cube meeting the set either
lies inside that cube or contains it and costs at least as much), which
is what the frame machinery below exploits.

This module also hosts the masked layer-cake integrator that the Choquet
engine wraps: all batched tree reductions funnel through here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import CubeSpec, DyadicSet, Grid, StepFunction

__all__ = ["ContentParams", "dyadic_content", "weighted_content", "cube_content"]

# Threshold rows are reduced in chunks to bound workspace memory.
_CHUNK_ROWS = 256


@dataclass(frozen=True)
class ContentParams:
    """Dimension parameter delta of the content, 0 < delta <= n."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        object.__setattr__(self, "delta", float(self.delta))

    def validate(self, grid: Grid) -> None:
        if self.delta > grid.n:
            raise ValueError(f"delta={self.delta} exceeds the dimension {grid.n}")


@dataclass(frozen=True)
class _Frame:
    """A dyadic subtree: aligned corner plus subtree depth (side 2**depth cells)."""

    corner: tuple[int, ...]
    depth: int

    @property
    def side_cells(self) -> int:
        return 1 << self.depth

    def slices(self) -> tuple[slice, ...]:
        side = self.side_cells
        return tuple(slice(c, c + side) for c in self.corner)


def _root_frame(grid: Grid) -> _Frame:
    return _Frame((0,) * grid.n, grid.depth)


def _aligned_frame(grid: Grid, lo: np.ndarray, hi: np.ndarray) -> _Frame:
    """Minimal dyadic cube containing cell range [lo, hi] per axis."""
    for j in range(grid.depth + 1):
        if np.all((lo >> j) == (hi >> j)):
            corner = tuple(int(c) for c in ((lo >> j) << j))
            return _Frame(corner, j)
    return _root_frame(grid)


def frame_for_cube(grid: Grid, cube: CubeSpec) -> _Frame:
    cube.validate(grid)
    lo = np.array(cube.corner, dtype=np.int64)
    return _aligned_frame(grid, lo, lo + cube.side_cells - 1)


def _frame_for_mask(grid: Grid, membership: np.ndarray) -> _Frame:
    idx = np.flatnonzero(membership)
    multi = np.unravel_index(idx, grid.shape)
    lo = np.array([int(m.min()) for m in multi], dtype=np.int64)
    hi = np.array([int(m.max()) for m in multi], dtype=np.int64)
    return _aligned_frame(grid, lo, hi)


def _extract(grid: Grid, frame: _Frame, flat: np.ndarray) -> np.ndarray:
    if frame.depth == grid.depth:
        return flat
    return np.ascontiguousarray(flat.reshape(grid.shape)[frame.slices()]).ravel()


def level_caps(grid: Grid, sub_depth: int, delta: float) -> np.ndarray:
    """caps[k] = (side length of a level-k cube of the subtree)**delta.

    Sides are exact powers of two times the cell side, so identical sets
    evaluated in different frames see bit-identical cap values.
    """
    sides = np.ldexp(grid.cell_side, sub_depth - np.arange(sub_depth + 1))
    return np.power(sides, delta)


def content_of_occupancy_rows(
    occ: np.ndarray, ndim: int, sub_depth: int, caps: np.ndarray
) -> np.ndarray:
    """Minimal cover cost per occupancy row (rows, 2**(ndim*sub_depth))."""
    rows = occ.shape[0]
    out = np.empty(rows, dtype=np.float64)
    for start in range(0, rows, _CHUNK_ROWS):
        block = occ[start : start + _CHUNK_ROWS].astype(np.float64)
        block *= caps[sub_depth]
        out[start : start + block.shape[0]] = kernels.reduce_tree(
            block, ndim, sub_depth, caps
        )
    return out


def masked_integral_many(
    grid: Grid,
    jobs: list[tuple[np.ndarray, np.ndarray]],
    params: ContentParams,
    frame: _Frame | None = None,
) -> np.ndarray:
    """Layer-cake Choquet integrals for several (values, mask) jobs at once.

    Each job integrates its non-negative values over its mask against the
    dyadic content. Jobs share one frame (computed from the union of
    masks when not given), so their threshold rows batch into the same
    tree reduction.
    """
    params.validate(grid)
    if frame is None:
        union = np.zeros(grid.num_cells, dtype=bool)
        for _, mask in jobs:
            union |= mask
        if not union.any():
            return np.zeros(len(jobs))
        frame = _frame_for_mask(grid, union)
    caps = level_caps(grid, frame.depth, params.delta)

    blocks = []
    spans = []
    diffs = []
    for values, mask in jobs:
        sub_vals = _extract(grid, frame, values)
        sub_mask = _extract(grid, frame, mask)
        inside = sub_vals[sub_mask]
        thresholds = np.unique(inside[inside > 0]) if inside.size else np.empty(0)
        spans.append(len(thresholds))
        if len(thresholds):
            diffs.append(np.diff(thresholds, prepend=0.0))
            blocks.append((sub_vals >= thresholds[:, None]) & sub_mask)
    out = np.zeros(len(jobs), dtype=np.float64)
    if not blocks:
        return out
    occ = np.concatenate(blocks, axis=0)
    contents = content_of_occupancy_rows(occ, grid.n, frame.depth, caps)
    pos = 0
    k = 0
    for j, span in enumerate(spans):
        if span:
            out[j] = math.fsum(diffs[k] * contents[pos : pos + span])
            pos += span
            k += 1
    return out


def masked_integral(
    grid: Grid,
    values: np.ndarray,
    mask: np.ndarray,
    params: ContentParams,
    frame: _Frame | None = None,
) -> float:
    """Choquet integral of non-negative values over the masked cells."""
    if not mask.any():
        return 0.0
    return float(masked_integral_many(grid, [(values, mask)], params, frame)[0])


def dyadic_content(grid: Grid, E: DyadicSet, params: ContentParams) -> float:
    """Minimal dyadic-cover cost of E; exact up to rounding of the powers."""
    params.validate(grid)
    if E.grid != grid:
        raise ValueError("set was built on a different grid")
    if E.is_empty():
        return 0.0
    frame = _frame_for_mask(grid, E.membership)
    occ = _extract(grid, frame, E.membership)
    caps = level_caps(grid, frame.depth, params.delta)
    return float(content_of_occupancy_rows(occ[None, :], grid.n, frame.depth, caps)[0])


def weighted_content(
    grid: Grid, w: StepFunction, E: DyadicSet, params: ContentParams
) -> float:
    """w(E): the Choquet integral of w * 1_E, monotone in both E and w."""
    if w.grid != grid or E.grid != grid:
        raise ValueError("weight or set was built on a different grid")
    if np.any(w.values < 0):
        raise ValueError("weight must be non-negative everywhere")
    params.validate(grid)
    if E.is_empty():
        return 0.0
    return masked_integral(grid, w.values, E.membership, params)


def cube_content(grid: Grid, cube: CubeSpec, params: ContentParams) -> float:
    """Content of a full cube of cells (not necessarily dyadic)."""
    params.validate(grid)
    cube.validate(grid)
    frame = frame_for_cube(grid, cube)
    mask = np.zeros(grid.shape, dtype=bool)
    mask[cube.slices()] = True
    occ = _extract(grid, frame, mask.ravel())
    caps = level_caps(grid, frame.depth, params.delta)
    return float(content_of_occupancy_rows(occ[None, :], grid.n, frame.depth, caps)[0])
