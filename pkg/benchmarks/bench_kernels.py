"""Compare the compiled norm kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from esaembed import _kernels_py
from esaembed.diamond import embed_all
from esaembed.laakso import embed_all_laakso

try:
    from esaembed import _kernels as _compiled
except ImportError:
    _compiled = None

CASES = [("diamond", 2, 3, embed_all), ("diamond", 3, 2, embed_all), ("laakso", 2, 2, embed_all_laakso)]


def best_of(fn, X, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(X)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the numpy fallback is available")
    print(f"{'instance':<16}{'rows x cols':>16}{'numpy s':>12}{'cython s':>12}{'speedup':>10}")
    for family, n, k, build in CASES:
        X = np.ascontiguousarray(build(n, k).matrix, dtype=np.int8)
        t_py, ref = best_of(_kernels_py.pairwise_norms, X, args.repeat)
        shape = f"{X.shape[0]}x{X.shape[1]}"
        if _compiled is None:
            print(f"{family}_{n}_{k:<8}{shape:>16}{t_py:>12.3f}{'-':>12}{'-':>10}")
            continue
        t_c, got = best_of(_compiled.pairwise_norms, X, args.repeat)
        assert all((a == b).all() for a, b in zip(ref, got)), "backends disagree"
        print(f"{family}_{n}_{k:<8}{shape:>16}{t_py:>12.3f}{t_c:>12.3f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
