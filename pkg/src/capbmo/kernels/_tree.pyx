# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled merge step for minimal dyadic-cover costs.

One call collapses one tree level: each parent cost is the sum of its
2**ndim child costs, capped at the parent cube's own cover cost. A zero
cost marks an empty subtree, and min(cap, 0) = 0 keeps it empty, so no
separate occupancy array is needed.

Children are accumulated in lexicographic offset order; the NumPy
fallback adds in the same order, which keeps the two paths bit-identical.
"""


def combine_level(double[:, ::1] child, double[:, ::1] parent,
                  int ndim, int child_side, double cap):
    cdef Py_ssize_t rows = child.shape[0]
    cdef Py_ssize_t half = child_side // 2
    cdef Py_ssize_t t, i, j, k, base, b1, b2
    cdef Py_ssize_t side = child_side
    cdef Py_ssize_t side2 = child_side * child_side
    cdef double s
    if ndim == 1:
        for t in range(rows):
            for i in range(half):
                base = 2 * i
                s = child[t, base] + child[t, base + 1]
                parent[t, i] = s if s < cap else cap
    elif ndim == 2:
        for t in range(rows):
            for i in range(half):
                for j in range(half):
                    base = (2 * i) * side + 2 * j
                    b1 = base + side
                    s = (child[t, base] + child[t, base + 1]
                         + child[t, b1] + child[t, b1 + 1])
                    parent[t, i * half + j] = s if s < cap else cap
    elif ndim == 3:
        for t in range(rows):
            for i in range(half):
                for j in range(half):
                    for k in range(half):
                        base = (2 * i) * side2 + (2 * j) * side + 2 * k
                        b1 = base + side
                        b2 = base + side2
                        s = (child[t, base] + child[t, base + 1]
                             + child[t, b1] + child[t, b1 + 1]
                             + child[t, b2] + child[t, b2 + 1]
                             + child[t, b2 + side] + child[t, b2 + side + 1])
                        parent[t, (i * half + j) * half + k] = s if s < cap else cap
    else:
        raise ValueError("compiled kernel supports ndim in {1, 2, 3}")
