"""Benchmark the split-candidate screen: numpy backend vs numba backend.

Usage: python3 benchmarks/bench_screen.py [--repeat N]

Each row times one screen over every nonzero split sequence for a fixed
(θ, θ*) pair, which is exactly one inner step of the finite-field search.
Also times a full search end to end with each backend.
"""

from __future__ import annotations

import argparse
import itertools
import time

import numpy as np

from leonard_lab import _kernels
from leonard_lab.leonard import search_parameter_arrays
from leonard_lab.scalar import FieldSpec

CASES = [
    # (p, d) with the number of candidates (p-1)^d
    (13, 3),
    (31, 3),
    (13, 4),
    (23, 4),
]


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_screen(p, d, repeat):
    # arithmetic progression (beta = 2), so the screen has hits to agree on
    theta = theta_star = np.array([(d - 2 * i) % p for i in range(d + 1)], dtype=np.int64)
    phis = np.array(list(itertools.product(range(1, p), repeat=d)), dtype=np.int64)

    mask_np = _kernels.screen_split_candidates(theta, theta_star, phis, p, backend="numpy")
    mask_nb = _kernels.screen_split_candidates(theta, theta_star, phis, p, backend="numba")  # also JIT warmup
    assert np.array_equal(mask_np, mask_nb), "backends disagree"

    t_np = _best_of(lambda: _kernels.screen_split_candidates(theta, theta_star, phis, p, backend="numpy"), repeat)
    t_nb = _best_of(lambda: _kernels.screen_split_candidates(theta, theta_star, phis, p, backend="numba"), repeat)
    return len(phis), int(mask_np.sum()), t_np, t_nb


def bench_search(d, p, limit, repeat):
    field = FieldSpec.prime(p)
    out = {}
    for backend in ("numpy", "numba"):
        search_parameter_arrays(d, field, limit, backend=backend)
        out[backend] = _best_of(lambda: search_parameter_arrays(d, field, limit, backend=backend), repeat)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1

    print(f"{'p':>4} {'d':>2} {'candidates':>11} {'hits':>6} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for p, d in CASES:
        n, hits, t_np, t_nb = bench_screen(p, d, args.repeat)
        print(f"{p:>4} {d:>2} {n:>11} {hits:>6} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>7.2f}x")

    print()
    print("full search (first 20 arrays):")
    for d, p in [(3, 13), (4, 13)]:
        times = bench_search(d, p, 20, max(1, args.repeat // 2))
        print(f"  d={d} GF({p}): numpy {times['numpy']:.3f}s  numba {times['numba']:.3f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
