"""Time the compiled kernels against their pure-python/numpy fallbacks.

Runs each hot kernel through the numba dispatcher and through the original
Python function (``.py_func``) on the same inputs and prints a comparison
table.  With ENTSPAN_NO_NUMBA=1 both rows collapse to the fallback, which is
also a way to measure what the env flag costs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from entspan import _kernels
from entspan.construct import construct_min_rank_subspace, random_subspace
from entspan.verify import _complex_stack


def _time(fn, *args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_gfp(repeat):
    basis = construct_min_rank_subspace(3, 4, 2)  # dimension 6
    p = 7  # (7**6 - 1) / 6 = 19608 projective points
    stack = np.array([[int(v) % p for v in m.entries] for m in basis.matrices], dtype=np.int64)
    fast = lambda: _kernels.gfp_min_rank_scan(stack.copy(), p, 3, 4)
    slow = lambda: _kernels.pure_python(_kernels.gfp_min_rank_scan)(stack.copy(), p, 3, 4)
    fast()  # compile outside the timed region
    t_fast, res_fast = _time(fast, repeat=repeat)
    t_slow, res_slow = _time(slow, repeat=repeat)
    assert res_fast[0] == res_slow[0] and res_fast[2] == res_slow[2]
    return "gfp_min_rank_scan (19608 pts, 3x4 mod 7)", t_fast, t_slow


def bench_sigma(repeat):
    basis = random_subspace(3, 3, 5, seed=0)
    A = _complex_stack(basis)
    P = np.linalg.pinv(A)
    rng = np.random.default_rng(1)
    x0 = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    args = (A, P, 2, 2000, x0, 3, 3)
    fast = lambda: _kernels.sigma_descent(*args)
    slow = lambda: _kernels.pure_python(_kernels.sigma_descent)(*args)
    fast()
    t_fast, res_fast = _time(fast, repeat=repeat)
    t_slow, res_slow = _time(slow, repeat=repeat)
    assert abs(res_fast[0] - res_slow[0]) < 1e-9
    return "sigma_descent (2000 iters, 3x3, dim 5)", t_fast, t_slow


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions, best is kept")
    args = parser.parse_args()

    mode = "numba" if _kernels.USING_NUMBA else "numpy fallback (numba disabled)"
    print(f"dispatch path: {mode}")
    print(f"{'kernel':<42} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for bench in (bench_gfp, bench_sigma):
        name, t_fast, t_slow = bench(args.repeat)
        speedup = t_slow / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<42} {t_fast * 1e3:>8.1f}ms {t_slow * 1e3:>8.1f}ms {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
