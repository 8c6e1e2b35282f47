"""Kernel selection and the batched tree reduction.

The reduction computes, for T occupancy rows at once, the minimal cost of
covering each row's occupied cells by dyadic subcubes of the (sub)tree
root: cost(node) = min(side(node)^delta, sum of child costs), with empty
subtrees at cost 0.

A compiled Cython implementation is preferred; a NumPy twin with the same
accumulation order is used when the extension is unavailable or when
CAPBMO_FORCE_FALLBACK=1 is set.
"""

import os

import numpy as np

from . import _numpy as _numpy_impl

USING_COMPILED = False
_impl = _numpy_impl
if os.environ.get("CAPBMO_FORCE_FALLBACK") != "1":
    try:
        from . import _tree as _compiled_impl

        _impl = _compiled_impl
        USING_COMPILED = True
    except ImportError:
        pass


def kernel_name():
    return "compiled" if USING_COMPILED else "numpy"


def reduce_tree(leaf_costs, ndim, depth, level_caps, impl=None):
    """Collapse leaf costs to per-row root cover costs.

    leaf_costs: float64 array (rows, 2**(ndim*depth)), C-contiguous,
        already capped at level_caps[depth] (leaf cost is 0 or the cap).
    level_caps: level_caps[k] = (side length of a level-k cube)**delta,
        k = 0 at the (sub)tree root.

    Returns a float64 array of shape (rows,). Consumes leaf_costs as
    scratch space conceptually but does not mutate it.
    """
    combine = (impl or _impl).combine_level
    if leaf_costs.ndim != 2 or leaf_costs.shape[1] != (1 << depth) ** ndim:
        raise ValueError(
            f"leaf_costs must be (rows, {(1 << depth) ** ndim}) for depth {depth}"
        )
    if len(level_caps) != depth + 1:
        raise ValueError("level_caps must have depth + 1 entries")
    rows = leaf_costs.shape[0]
    current = leaf_costs
    side = 1 << depth
    for level in range(depth, 0, -1):
        half = side // 2
        parent = np.empty((rows, half**ndim), dtype=np.float64)
        combine(current, parent, ndim, side, float(level_caps[level - 1]))
        current = parent
        side = half
    return current[:, 0].copy() if current is leaf_costs else current[:, 0]
