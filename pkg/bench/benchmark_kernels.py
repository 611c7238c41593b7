#!/usr/bin/env python3
"""Compare the compiled form-census kernel against the pure-Python twin.

The census is the hot loop behind the class-number oracle (the f <= 500
acceptance sweep calls it ~1000 times on discriminants up to 1e6).

Usage: python3 bench/benchmark_kernels.py [max_conductor]
"""

import sys
import time

from cmlocus import _purecore

try:
    from cmlocus import _fastcore
except ImportError:
    _fastcore = None


def sweep(census, fmax):
    t0 = time.perf_counter()
    acc = 0
    for dk in (-3, -4):
        for f in range(1, fmax + 1):
            h, amb = census(f * f * dk)
            acc += h + amb
    return time.perf_counter() - t0, acc


def main():
    fmax = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    t_pure, check_pure = sweep(_purecore.form_census, fmax)
    print(f"pure python : {t_pure:8.3f}s  (checksum {check_pure})")
    if _fastcore is None:
        print("compiled    : extension not built on this install")
        return
    t_fast, check_fast = sweep(_fastcore.form_census, fmax)
    print(f"compiled    : {t_fast:8.3f}s  (checksum {check_fast})")
    if check_pure != check_fast:
        raise SystemExit("kernel disagreement!")
    print(f"speedup     : {t_pure / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
