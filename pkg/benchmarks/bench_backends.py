"""Compare the compiled kernels against the pure-Python fallbacks.

Run:  python benchmarks/bench_backends.py [--quick]

Covers the two hot loops: exhaustive reduced-word enumeration (the word
problem scan) and percolation crossing trials on a tree ball.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from freelike import _purekernels

try:
    from freelike import _speedups
except ImportError:
    _speedups = None


def time_scan(impl, rank: int, max_len: int) -> tuple[float, int]:
    t0 = time.perf_counter()
    total = 0
    for first in range(2 * rank):
        count, _ = impl.scan_reduced_subtree(rank, max_len, 10**9, first)
        total += count
    return time.perf_counter() - t0, total


def tree_ball_edges(radius: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Edge arrays of the 4-regular tree ball without group machinery."""
    from freelike.cayley import build_ball
    from freelike.oracle import GroupOracle
    from freelike.percolation import from_ball
    from freelike.words import Word

    ball = build_ball(GroupOracle.free(2), [Word([1], 2), Word([2], 2)], radius)
    g = from_ball(ball)
    return g._eu, g._ev, g.n


def time_crossing(impl, eu, ev, n, trials: int, p: float) -> tuple[float, int]:
    mask = np.zeros(n, dtype=np.uint8)
    mask[n - 1] = 1
    t0 = time.perf_counter()
    hits = 0
    for trial in range(trials):
        u = np.random.Generator(np.random.Philox(key=[7, trial])).random(len(eu))
        if impl.crossing_from_uniforms(eu, ev, u, p, n, 0, mask):
            hits += 1
    return time.perf_counter() - t0, hits


def row(label: str, pure_t: float, fast_t: float | None) -> None:
    if fast_t is None:
        print(f"{label:<44} pure {pure_t:8.3f}s   compiled —")
    else:
        print(
            f"{label:<44} pure {pure_t:8.3f}s   compiled {fast_t:8.3f}s "
            f"  ({pure_t / fast_t:6.1f}x)"
        )


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    scan_len = 11 if args.quick else 13
    radius = 5 if args.quick else 6
    trials = 200 if args.quick else 1000

    print(f"compiled extension available: {_speedups is not None}\n")

    pure_t, pure_n = time_scan(_purekernels, 2, scan_len)
    fast = None
    if _speedups is not None:
        fast, fast_n = time_scan(_speedups, 2, scan_len)
        assert pure_n == fast_n
    row(f"word scan rank 2, length <= {scan_len} ({pure_n} words)", pure_t, fast)

    eu, ev, n = tree_ball_edges(radius)
    pure_t, pure_hits = time_crossing(_purekernels, eu, ev, n, trials, 0.38)
    fast = None
    if _speedups is not None:
        fast, fast_hits = time_crossing(_speedups, eu, ev, n, trials, 0.38)
        assert pure_hits == fast_hits
    row(
        f"percolation, tree ball r={radius} ({len(eu)} edges, {trials} trials)",
        pure_t,
        fast,
    )


if __name__ == "__main__":
    main()
