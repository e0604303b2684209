"""Compiled vs interpreted timings for the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel is timed through numba (when available) and through its plain
Python body (``.py_func``); elimination is also timed with the vectorised
numpy variant used when ``GBFORGE_BACKEND=numpy``.
"""

import argparse
import time

import numpy as np

from gbforge import kernels
from gbforge._accel import USE_NUMBA
from gbforge.distance import code_graph, logical_masks
from gbforge.gbcode import fam_even, gb_triple


def best_of(fn, repeat):
    fn()  # warm-up (compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    code, _ = fam_even(4)  # [[64,2,8]]
    nbr, eid = code_graph(code)
    # all-zero masks make every cycle trivial, so the search is exhaustive
    masks = np.zeros_like(logical_masks(code))
    dist0 = kernels.bfs_distances(nbr, 0)
    out = np.zeros(10, np.int64)
    yield "cycle_search len 10, n=32", lambda k: k(nbr, eid, masks, dist0, 10, 10**9, -1, out), kernels.cycle_search

    g = gb_triple(1, 10, 99)
    nbr99, _ = code_graph(g)
    yield "connected_without n=99", lambda k: k(nbr99, 0, 5), kernels.connected_without

    rows = np.ascontiguousarray(g.hx.data)
    yield "rref 99x198", lambda k: k(rows, 198), kernels._rref_loops


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"numba active: {USE_NUMBA}")
    print(f"{'kernel':<28}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for name, call, kern in cases():
        fast = best_of(lambda: call(kern), args.repeat)
        slow = best_of(lambda: call(kern.py_func), args.repeat)
        print(f"{name:<28}{fast * 1e3:>10.2f}ms{slow * 1e3:>10.2f}ms{slow / fast:>9.1f}x")
    g = gb_triple(1, 10, 99)
    rows = np.ascontiguousarray(g.hx.data)
    t = best_of(lambda: kernels._rref_numpy(rows, 198), args.repeat)
    print(f"{'rref 99x198 (numpy twin)':<28}{t * 1e3:>10.2f}ms")


if __name__ == "__main__":
    main()
