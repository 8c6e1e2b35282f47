"""NumPy fallback for the tree merge step.

Mirrors the compiled kernel exactly: children are added in lexicographic
offset order with left-associated binary adds, so results match the
compiled path bit for bit.
"""

import itertools

import numpy as np


def combine_level(child, parent, ndim, child_side, cap):
    rows = child.shape[0]
    half = child_side // 2
    view = child.reshape((rows,) + (child_side,) * ndim)
    acc = None
    for offsets in itertools.product((0, 1), repeat=ndim):
        sl = (slice(None),) + tuple(slice(o, None, 2) for o in offsets)
        part = view[sl]
        acc = part.copy() if acc is None else acc + part
    np.minimum(acc, cap, out=acc)
    parent[...] = acc.reshape(rows, half**ndim)
