"""Compare the compiled kernels against the NumPy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from quadsqueeze._kernels import _pykernels

try:
    from quadsqueeze._kernels import _ckernels
except ImportError:
    _ckernels = None

rng = np.random.default_rng(0)
U = np.linspace(-8, 8, 4001)
COEFFS = rng.normal(size=301) + 1j * rng.normal(size=301)

CASES = {
    "hermite_poly(m=40, 4001 pts)": lambda k: k.hermite_poly(40, U),
    "hermite_function(m=300, 4001 pts)": lambda k: k.hermite_function(300, U),
    "hermite_functions(m<=60, 4001 pts)": lambda k: k.hermite_functions(60, U),
    "hermite_series(N=300, 4001 pts)": lambda k: k.hermite_series(COEFFS, U),
    "squeeze_series(N=300)": lambda k: k.squeeze_series(1.2 - 0.7j, 0.6 + 0.3j, 300),
}


def best_time(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':38s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s} "
          f"{'max |diff|':>11s}")
    for name, call in CASES.items():
        tp = best_time(lambda: call(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:38s} {tp * 1e3:12.3f}")
            continue
        tc = best_time(lambda: call(_ckernels), args.repeat)
        diff = np.max(np.abs(np.asarray(call(_pykernels)) - np.asarray(call(_ckernels))))
        print(f"{name:38s} {tp * 1e3:12.3f} {tc * 1e3:14.3f} {tp / tc:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
