"""Oscillation seminorms and the per-cube objective F(c).

F(c) is the weighted Choquet average of |f - c|**q over a cube. For
q >= 1 the Minkowski property makes F**(1/q) convex in c, so the global
minimum and the minimizer plateau are found by ternary search plus
bisection. For q = 1 on cubes with few distinct (value, weight) pairs,
F is piecewise linear with breakpoints at the cell values and at the
weighted crossing points, and the minimum is computed exactly from the
breakpoint lattice instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .content import ContentParams, frame_for_cube, masked_integral_many
from .grid import CubeFamilyPolicy, CubeSpec, Grid, StepFunction, enumerate_cubes

__all__ = [
    "GammaInterval",
    "SeminormReport",
    "oscillation_objective",
    "gamma_interval",
    "bmo_seminorm",
    "blo_seminorm",
    "weighted_bmo_seminorm",
]

# q = 1 cubes with at most this many distinct (value, weight) pairs take
# the exact piecewise-linear path; larger cubes use ternary search.
_EXACT_PAIR_LIMIT = 40
_MAX_SEARCH_ITER = 200


@dataclass(frozen=True)
class GammaInterval:
    """Minimizer plateau of F: [lo, hi] brackets {c: F(c) <= min_value + tol}."""

    lo: float
    hi: float
    min_value: float
    tol: float
    used_fallback: bool = False


@dataclass(frozen=True)
class SeminormReport:
    value: float
    worst_cube: CubeSpec | None
    per_cube_centers: dict = field(repr=False)
    policy: CubeFamilyPolicy | None = None


class _CubeObjective:
    """Evaluator for F(c) on one cube, batching and caching evaluations."""

    def __init__(self, f: StepFunction, w: StepFunction | None, q: float,
                 Q: CubeSpec, params: ContentParams):
        grid = f.grid
        Q.validate(grid)
        mask = np.zeros(grid.shape, dtype=bool)
        mask[Q.slices()] = True
        self.grid = grid
        self.mask = mask.ravel()
        self.frame = frame_for_cube(grid, Q)
        self.params = params
        self.q = float(q)
        self.fv = f.values
        self.wv = None if w is None else w.values
        weight_vals = np.ones(grid.num_cells) if w is None else w.values
        self.normalizer = float(
            masked_integral_many(grid, [(weight_vals, self.mask)], params, self.frame)[0]
        )
        self.cache: dict[float, float] = {}

    def inside_values(self) -> np.ndarray:
        return self.fv[self.mask]

    def inside_weights(self) -> np.ndarray:
        if self.wv is None:
            return np.ones(int(self.mask.sum()))
        return self.wv[self.mask]

    def _integrand(self, c: float) -> np.ndarray:
        base = np.abs(self.fv - c)
        if self.q != 1.0:
            base = base**self.q
        if self.wv is not None:
            base = base * self.wv
        return base

    def many(self, cs) -> np.ndarray:
        fresh = [float(c) for c in cs if float(c) not in self.cache]
        if fresh:
            jobs = [(self._integrand(c), self.mask) for c in fresh]
            vals = masked_integral_many(self.grid, jobs, self.params, self.frame)
            for c, v in zip(fresh, vals):
                self.cache[c] = float(v) / self.normalizer
        return np.array([self.cache[float(c)] for c in cs])

    def __call__(self, c: float) -> float:
        return float(self.many([c])[0])


def oscillation_objective(
    f: StepFunction,
    w: StepFunction,
    q: float,
    Q: CubeSpec,
    params: ContentParams,
    c: float,
) -> float:
    """F(c) = (1/w(Q)) * integral over Q of |f - c|**q * w d(content)."""
    if q <= 0:
        raise ValueError("q must be positive")
    if w is not None and np.any(w.values <= 0):
        raise ValueError("weight must be strictly positive")
    return _CubeObjective(f, w, q, Q, params)(c)


def _ternary_plateau(obj: _CubeObjective, tol: float) -> GammaInterval:
    vals = obj.inside_values()
    a = float(vals.min()) - 1.0
    b = float(vals.max()) + 1.0
    # F**(1/q) is convex, so F is unimodal and flat only at its minimum;
    # the equal-values branch may therefore keep just the middle third.
    it = 0
    while b - a > tol and it < _MAX_SEARCH_ITER:
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        f1, f2 = obj.many([m1, m2])
        if f1 < f2:
            b = m2
        elif f1 > f2:
            a = m1
        else:
            a, b = m1, m2
        it += 1
    c_star = 0.5 * (a + b)
    obj.many([c_star])
    min_value = min(obj.cache.values())
    thr = min_value + tol
    lo = _plateau_edge(obj, c_star, thr, tol, -1.0)
    hi = _plateau_edge(obj, c_star, thr, tol, +1.0)
    return GammaInterval(lo=lo, hi=hi, min_value=min_value, tol=tol)


def _plateau_edge(obj: _CubeObjective, c_in: float, thr: float,
                  tol: float, direction: float) -> float:
    step = max(1.0, abs(c_in))
    out = None
    for _ in range(80):
        cand = c_in + direction * step
        if obj(cand) > thr:
            out = cand
            break
        step *= 2.0
    if out is None:
        return c_in + direction * step
    inn = c_in
    it = 0
    while abs(inn - out) > tol and it < _MAX_SEARCH_ITER:
        mid = 0.5 * (inn + out)
        if obj(mid) <= thr:
            inn = mid
        else:
            out = mid
        it += 1
    return inn


def _linear_breakpoints(vals: np.ndarray, wts: np.ndarray) -> np.ndarray:
    """Candidate breakpoints of c -> integral |f - c| w: the cell values plus
    every c where two weighted distances w_i|v_i - c|, w_j|v_j - c| cross."""
    pairs = np.unique(np.column_stack([vals, wts]), axis=0)
    v = pairs[:, 0]
    w = pairs[:, 1]
    i, j = np.triu_indices(len(pairs), k=1)
    cands = [v]
    same = np.abs(w[i] - w[j]) > 0
    if same.any():
        cands.append((w[i] * v[i] - w[j] * v[j])[same] / (w[i] - w[j])[same])
    cands.append((w[i] * v[i] + w[j] * v[j]) / (w[i] + w[j]))
    out = np.unique(np.concatenate(cands))
    return out[np.isfinite(out)]


def _exact_linear_gamma(obj: _CubeObjective, tol: float) -> GammaInterval:
    breaks = _linear_breakpoints(obj.inside_values(), obj.inside_weights())
    cands = np.concatenate([[breaks[0] - 1.0], breaks, [breaks[-1] + 1.0]])
    F = obj.many(cands)
    min_value = float(F.min())
    thr = min_value + tol
    ok = F <= thr
    first = int(np.argmax(ok))
    last = len(F) - 1 - int(np.argmax(ok[::-1]))
    lo = _linear_cross(cands, F, first, thr, left=True)
    hi = _linear_cross(cands, F, last, thr, left=False)
    return GammaInterval(lo=lo, hi=hi, min_value=min_value, tol=tol)


def _linear_cross(cands, F, idx, thr, left: bool) -> float:
    if left:
        if idx == 0:
            slope = (F[1] - F[0]) / (cands[1] - cands[0])
            if slope >= 0:
                return float(cands[0])
            return float(cands[0] + (thr - F[0]) / slope)
        a, b = idx - 1, idx
    else:
        if idx == len(F) - 1:
            slope = (F[-1] - F[-2]) / (cands[-1] - cands[-2])
            if slope <= 0:
                return float(cands[-1])
            return float(cands[-1] + (thr - F[-1]) / slope)
        a, b = idx + 1, idx
    # F[a] > thr >= F[b]; the segment between them is linear.
    frac = (thr - F[a]) / (F[b] - F[a])
    return float(cands[a] + frac * (cands[b] - cands[a]))


def _dense_gamma(obj: _CubeObjective, tol: float) -> GammaInterval:
    """Fallback for q < 1 (no convexity): grid over values and midpoints."""
    vals = np.unique(obj.inside_values())
    cands = vals
    if len(vals) > 1:
        cands = np.unique(np.concatenate([vals, 0.5 * (vals[1:] + vals[:-1])]))
    F = obj.many(cands)
    min_value = float(F.min())
    keep = F <= min_value + tol
    return GammaInterval(
        lo=float(cands[keep].min()),
        hi=float(cands[keep].max()),
        min_value=min_value,
        tol=tol,
        used_fallback=True,
    )


def gamma_interval(
    f: StepFunction,
    w: StepFunction | None,
    q: float,
    Q: CubeSpec,
    params: ContentParams,
    tol: float = 1e-9,
) -> GammaInterval:
    """Global minimum of F and the plateau {F <= min + tol} around it."""
    if q <= 0:
        raise ValueError("q must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if w is not None and np.any(w.values <= 0):
        raise ValueError("weight must be strictly positive")
    obj = _CubeObjective(f, w, q, Q, params)
    vals = obj.inside_values()
    if vals.max() == vals.min():
        a = float(vals[0])
        half = tol ** (1.0 / q)
        return GammaInterval(lo=a - half, hi=a + half, min_value=0.0, tol=tol)
    if q < 1:
        return _dense_gamma(obj, tol)
    if q == 1:
        pairs = np.unique(np.column_stack([vals, obj.inside_weights()]), axis=0)
        if len(pairs) <= _EXACT_PAIR_LIMIT:
            return _exact_linear_gamma(obj, tol)
    return _ternary_plateau(obj, tol)


def _family(f: StepFunction, policy: CubeFamilyPolicy):
    return enumerate_cubes(f.grid, policy)


def _report(contribs, centers, policy) -> SeminormReport:
    best = None
    best_val = 0.0
    for cube, val in contribs:
        if best is None or val > best_val:
            best, best_val = cube, val
    return SeminormReport(
        value=best_val, worst_cube=best, per_cube_centers=centers, policy=policy
    )


def bmo_seminorm(
    f: StepFunction,
    params: ContentParams,
    policy: CubeFamilyPolicy = CubeFamilyPolicy(),
    centering: str = "inf_c",
) -> SeminormReport:
    """Supremum over the cube family of the mean oscillation of f.

    centering "inf_c" minimizes the average over the center; "f_Q_delta"
    centers at the signed average of f on the cube.
    """
    from .choquet import signed_average

    if centering not in ("inf_c", "f_Q_delta"):
        raise ValueError(f"unknown centering {centering!r}")
    contribs = []
    centers = {}
    for Q in _family(f, policy):
        if centering == "inf_c":
            gi = gamma_interval(f, None, 1.0, Q, params)
            center = 0.5 * (gi.lo + gi.hi)
            value = gi.min_value
        else:
            center = signed_average(f, Q, params).value
            obj = _CubeObjective(f, None, 1.0, Q, params)
            value = obj(center)
        contribs.append((Q, value))
        centers[Q] = center
    return _report(contribs, centers, policy)


def blo_seminorm(
    f: StepFunction,
    params: ContentParams,
    policy: CubeFamilyPolicy = CubeFamilyPolicy(),
    q: float = 1.0,
) -> SeminormReport:
    """Supremum of the q-mean of f - esinf_Q f; centers are the esinfs."""
    if q <= 0:
        raise ValueError("q must be positive")
    contribs = []
    centers = {}
    for Q in _family(f, policy):
        inside = f.values[_cube_flat_mask(f.grid, Q)]
        center = float(inside.min())
        obj = _CubeObjective(f, None, q, Q, params)
        contribs.append((Q, obj(center) ** (1.0 / q)))
        centers[Q] = center
    return _report(contribs, centers, policy)


def weighted_bmo_seminorm(
    f: StepFunction,
    w: StepFunction,
    q: float,
    params: ContentParams,
    policy: CubeFamilyPolicy = CubeFamilyPolicy(),
) -> SeminormReport:
    """sup over cubes of (inf_c F(c))**(1/q) for the weighted objective."""
    if np.any(w.values <= 0):
        raise ValueError("weight must be strictly positive")
    contribs = []
    centers = {}
    for Q in _family(f, policy):
        gi = gamma_interval(f, w, q, Q, params)
        contribs.append((Q, gi.min_value ** (1.0 / q)))
        centers[Q] = 0.5 * (gi.lo + gi.hi)
    return _report(contribs, centers, policy)


def _cube_flat_mask(grid: Grid, Q: CubeSpec) -> np.ndarray:
    Q.validate(grid)
    mask = np.zeros(grid.shape, dtype=bool)
    mask[Q.slices()] = True
    return mask.ravel()
