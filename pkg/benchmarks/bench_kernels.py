"""Bessel-kernel benchmark: compiled extension vs NumPy fallback.

The backward-recurrence kernels are the inner loop of every transport scan
(each grid point needs two full Bessel-coefficient arrays), so this is the
hot path the compiled extension exists for.  Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from drivenlattice.kernels import _fallback
from drivenlattice.model import solve_diophantine
from drivenlattice.specialfn import gen_bessel_2d_slice

try:
    from drivenlattice.kernels import _native
except ImportError:
    _native = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def row(label, compiled, fallback):
    if compiled is None:
        print(f"{label:38s} {'-':>12s} {fallback * 1e6:10.1f} us")
    else:
        print(
            f"{label:38s} {compiled * 1e6:10.1f} us {fallback * 1e6:10.1f} us"
            f"   x{fallback / compiled:,.1f}"
        )


def main():
    print(f"{'kernel':38s} {'compiled':>12s} {'numpy':>10s}")
    cases = [
        ("jn_array(nmax=80, x=37.3)", lambda m: m.jn_array(80, 37.3), 2000),
        ("jn_array(nmax=300, x=180.0)", lambda m: m.jn_array(300, 180.0), 1000),
    ]
    xs = np.linspace(-20, 20, 4001)
    cases.append(
        ("jn_array_batch(nmax=40, 4001 pts)", lambda m: m.jn_array_batch(40, xs), 20)
    )
    for label, fn, repeat in cases:
        compiled = timeit(lambda: fn(_native), repeat) if _native else None
        fallback = timeit(lambda: fn(_fallback), repeat)
        row(label, compiled, fallback)

    # end to end: one row of a transport-coefficient surface scan
    rc = solve_diophantine(1, 2, 1)
    us = np.linspace(-10, 10, 201)

    def scan():
        for v in np.linspace(-10, 10, 51):
            gen_bessel_2d_slice(rc, us, float(v))

    import drivenlattice.kernels as kernels

    t = timeit(scan, 3)
    print(f"\ngamma surface 201x51 via active backend ({kernels.backend()}): {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
