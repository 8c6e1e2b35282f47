"""Compare the compiled reduction kernel against the NumPy fallback.

Runs the same three workloads in two subprocesses, one per backend
(the backend is chosen at import time, so each needs a fresh process),
and prints a table with per-call times and the speedup.

    python3 benchmarks/bench_kernels.py
"""

import argparse
import json
import os
import subprocess
import sys
import time


def build_workloads():
    import numpy as np

    from capbmo import ContentParams, build_grid, step_function, bmo_seminorm
    from capbmo.content import masked_integral_many
    from capbmo.fixtures import log_abs_function

    rng = np.random.default_rng(7)
    params = ContentParams(delta=1.0)

    g = build_grid(2, 5, 1.0)
    masks = rng.random((256, g.num_cells)) < 0.5
    values = rng.exponential(size=g.num_cells)
    jobs = [(values, m) for m in masks]

    def content_batch():
        masked_integral_many(g, jobs, params)

    g_small = build_grid(2, 3, 1.0)
    small_jobs = [
        (rng.exponential(size=g_small.num_cells), rng.random(g_small.num_cells) < 0.5)
        for _ in range(64)
    ]

    def many_small_batches():
        for v, m in small_jobs:
            masked_integral_many(g_small, [(v, m)], params)

    f = log_abs_function(2, 4)

    def seminorm():
        bmo_seminorm(f, params)

    return [
        ("content batch, 256 jobs on 32x32", content_batch, 5),
        ("64 single jobs on 8x8", many_small_batches, 5),
        ("mean-oscillation seminorm, 16x16", seminorm, 3),
    ]


def run_worker():
    import capbmo

    rows = []
    for name, fn, repeats in build_workloads():
        fn()  # warm up
        best = min(_timed(fn) for _ in range(repeats))
        rows.append({"name": name, "seconds": best})
    print(json.dumps({"backend": capbmo.kernel_name(), "rows": rows}))


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def run_comparison():
    here = os.path.abspath(__file__)
    results = []
    for force in ("0", "1"):
        env = dict(os.environ, CAPBMO_FORCE_FALLBACK=force)
        out = subprocess.run(
            [sys.executable, here, "--worker"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))
    first, second = results
    print(f"{'workload':<38} {first['backend']:>12} {second['backend']:>12} {'speedup':>9}")
    for a, b in zip(first["rows"], second["rows"]):
        ratio = b["seconds"] / a["seconds"]
        print(
            f"{a['name']:<38} {a['seconds'] * 1e3:>10.2f}ms {b['seconds'] * 1e3:>10.2f}ms {ratio:>8.1f}x"
        )


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        run_worker()
    else:
        run_comparison()
