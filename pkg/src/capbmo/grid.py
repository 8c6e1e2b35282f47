"""Dyadic grids, cell sets, step functions, cubes and cube families.

The root cube [origin, origin + root_side)^n is split into 2**depth
half-open cells per axis. Cells are addressed by integer multi-indices
(one index per axis, row-major flattening) and every function or set in
this package is constant on cells. Working with half-open cells keeps
index arithmetic exact; geometry that is stated for left-open cubes
elsewhere maps onto this convention by the reflection x -> root_side - x,
under which contents and integrals are invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "DyadicSet",
    "StepFunction",
    "CubeSpec",
    "CubeFamilyPolicy",
    "build_grid",
    "set_from_cells",
    "enumerate_cubes",
    "level_set",
    "step_function",
    "step_function_from_callable",
]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid:
    """Uniform dyadic mesh of 2**depth half-open cells per axis."""

    n: int
    depth: int
    root_side: float
    origin: tuple[float, ...]

    def __post_init__(self):
        if not 1 <= self.n <= 3:
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.n}")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if not self.root_side > 0:
            raise ValueError("root_side must be positive")
        origin = tuple(float(x) for x in self.origin)
        if len(origin) != self.n:
            raise ValueError("origin must have one coordinate per axis")
        object.__setattr__(self, "root_side", float(self.root_side))
        object.__setattr__(self, "origin", origin)

    @property
    def cells_per_axis(self) -> int:
        return 1 << self.depth

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cells_per_axis,) * self.n

    @property
    def num_cells(self) -> int:
        return self.cells_per_axis**self.n

    @property
    def cell_side(self) -> float:
        return self.root_side / self.cells_per_axis

    def cell_centers(self) -> np.ndarray:
        """Coordinates of all cell centers, shape (num_cells, n), row-major."""
        axes = [
            self.origin[a] + (np.arange(self.cells_per_axis) + 0.5) * self.cell_side
            for a in range(self.n)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def flat_index(self, cell: tuple[int, ...]) -> int:
        if len(cell) != self.n:
            raise ValueError("cell index must have one entry per axis")
        idx = 0
        for c in cell:
            c = int(c)
            if not 0 <= c < self.cells_per_axis:
                raise IndexError(f"cell index {cell} out of range")
            idx = idx * self.cells_per_axis + c
        return idx


@dataclass(frozen=True)
class DyadicSet:
    """A union of grid cells, stored as a flat boolean membership array."""

    grid: Grid
    membership: np.ndarray = field(repr=False)

    def __post_init__(self):
        mem = np.asarray(self.membership, dtype=bool).ravel()
        if mem.size != self.grid.num_cells:
            raise ValueError("membership length must equal the cell count")
        object.__setattr__(self, "membership", _frozen(mem))

    @property
    def mask(self) -> np.ndarray:
        return self.membership.reshape(self.grid.shape)

    def is_empty(self) -> bool:
        return not bool(self.membership.any())

    def union(self, other: "DyadicSet") -> "DyadicSet":
        self._check_same_grid(other)
        return DyadicSet(self.grid, self.membership | other.membership)

    def intersect(self, other: "DyadicSet") -> "DyadicSet":
        self._check_same_grid(other)
        return DyadicSet(self.grid, self.membership & other.membership)

    def complement(self) -> "DyadicSet":
        return DyadicSet(self.grid, ~self.membership)

    def _check_same_grid(self, other: "DyadicSet") -> None:
        if other.grid != self.grid:
            raise ValueError("sets live on different grids")


@dataclass(frozen=True)
class StepFunction:
    """A function constant on grid cells, one finite value per cell."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if vals.size != self.grid.num_cells:
            raise ValueError("values length must equal the cell count")
        if not np.isfinite(vals).all():
            raise ValueError("all step function values must be finite")
        object.__setattr__(self, "values", _frozen(vals))

    def with_values(self, values) -> "StepFunction":
        return StepFunction(self.grid, values)


@dataclass(frozen=True)
class CubeSpec:
    """An axis-aligned cube of whole cells: corner indices plus a side."""

    corner: tuple[int, ...]
    side_cells: int

    def __post_init__(self):
        object.__setattr__(self, "corner", tuple(int(c) for c in self.corner))
        object.__setattr__(self, "side_cells", int(self.side_cells))
        if self.side_cells < 1:
            raise ValueError("side_cells must be positive")
        if any(c < 0 for c in self.corner):
            raise ValueError("corner indices must be non-negative")

    def validate(self, grid: Grid) -> None:
        if len(self.corner) != grid.n:
            raise ValueError("cube corner dimension does not match the grid")
        hi = grid.cells_per_axis
        if any(c + self.side_cells > hi for c in self.corner):
            raise ValueError(f"cube {self} does not fit inside the grid")

    def is_dyadic(self) -> bool:
        s = self.side_cells
        if s & (s - 1):
            return False
        return all(c % s == 0 for c in self.corner)

    def side_length(self, grid: Grid) -> float:
        return self.side_cells * grid.cell_side

    def slices(self) -> tuple[slice, ...]:
        return tuple(slice(c, c + self.side_cells) for c in self.corner)

    def contains_cell(self, cell: tuple[int, ...]) -> bool:
        return all(
            c <= x < c + self.side_cells for c, x in zip(self.corner, cell)
        )

    def cube_id(self) -> str:
        return ",".join(str(c) for c in self.corner) + f":{self.side_cells}"

    @staticmethod
    def root(grid: Grid) -> "CubeSpec":
        return CubeSpec((0,) * grid.n, grid.cells_per_axis)


@dataclass(frozen=True)
class CubeFamilyPolicy:
    """How to discretize "all cubes": dyadic, full lattice, or sampled."""

    kind: str = "dyadic"
    sample_count: int = 0
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in ("dyadic", "lattice", "sampled"):
            raise ValueError(f"unknown cube family kind {self.kind!r}")
        if self.kind == "sampled" and self.sample_count < 1:
            raise ValueError("sampled policy needs a positive sample_count")


def build_grid(n: int, depth: int, root_side: float = 1.0, origin=None) -> Grid:
    """Construct a grid; origin defaults to the zero vector."""
    if origin is None:
        origin = (0.0,) * n
    return Grid(n=n, depth=depth, root_side=root_side, origin=tuple(origin))


def step_function(grid: Grid, values) -> StepFunction:
    return StepFunction(grid, values)


def step_function_from_callable(grid: Grid, fn) -> StepFunction:
    """Sample fn at cell centers. fn maps an (m, n) coordinate array to m values."""
    return StepFunction(grid, np.asarray(fn(grid.cell_centers()), dtype=np.float64))


def set_from_cells(grid: Grid, cells) -> DyadicSet:
    """Set with membership exactly on the listed cells; duplicates collapse."""
    membership = np.zeros(grid.num_cells, dtype=bool)
    for cell in cells:
        if np.isscalar(cell):
            cell = (cell,)
        membership[grid.flat_index(tuple(cell))] = True
    return DyadicSet(grid, membership)


def full_set(grid: Grid) -> DyadicSet:
    return DyadicSet(grid, np.ones(grid.num_cells, dtype=bool))


def empty_set(grid: Grid) -> DyadicSet:
    return DyadicSet(grid, np.zeros(grid.num_cells, dtype=bool))


def cube_set(grid: Grid, cube: CubeSpec) -> DyadicSet:
    cube.validate(grid)
    mask = np.zeros(grid.shape, dtype=bool)
    mask[cube.slices()] = True
    return DyadicSet(grid, mask.ravel())


def dyadic_cubes(grid: Grid):
    """All dyadic subcubes of the root, coarsest level first."""
    out = []
    for level in range(grid.depth + 1):
        side = grid.cells_per_axis >> level
        positions = range(0, grid.cells_per_axis, side)
        for corner in itertools.product(positions, repeat=grid.n):
            out.append(CubeSpec(corner, side))
    return out


def lattice_cubes(grid: Grid):
    """Every cube of whole cells: any corner, any side that fits."""
    N = grid.cells_per_axis
    out = []
    for side in range(1, N + 1):
        for corner in itertools.product(range(N - side + 1), repeat=grid.n):
            out.append(CubeSpec(corner, side))
    return out


def enumerate_cubes(grid: Grid, policy: CubeFamilyPolicy):
    """Cube family for the policy; deterministic for a fixed seed."""
    if policy.kind == "dyadic":
        return dyadic_cubes(grid)
    if policy.kind == "lattice":
        return lattice_cubes(grid)
    base = dyadic_cubes(grid)
    N = grid.cells_per_axis
    # Uniform draw over the lattice family without materializing it:
    # pick a side with probability proportional to its corner count.
    counts = np.array([(N - s + 1) ** grid.n for s in range(1, N + 1)], dtype=np.int64)
    total = int(counts.sum())
    rng = np.random.default_rng(policy.rng_seed)
    draws = rng.integers(0, total, size=policy.sample_count)
    cum = np.cumsum(counts)
    extras = []
    for d in draws:
        side = int(np.searchsorted(cum, d, side="right")) + 1
        offset = int(d - (cum[side - 2] if side > 1 else 0))
        per_axis = N - side + 1
        corner = []
        for _ in range(grid.n):
            corner.append(offset % per_axis)
            offset //= per_axis
        extras.append(CubeSpec(tuple(reversed(corner)), side))
    return base + extras


def level_set(f: StepFunction, comparator: str, threshold: float) -> DyadicSet:
    """Cells whose value satisfies the comparison; exact, no tolerance."""
    ops = {
        ">": np.greater,
        ">=": np.greater_equal,
        "<": np.less,
        "<=": np.less_equal,
        "≥": np.greater_equal,
        "≤": np.less_equal,
    }
    if comparator not in ops:
        raise ValueError(f"unknown comparator {comparator!r}")
    return DyadicSet(f.grid, ops[comparator](f.values, threshold))
