"""Benchmark the pure-Python and compiled orbit kernels on identical work.

Run:  python3 benchmarks/bench_kernel.py [--samples N] [--seed S]
"""
import argparse
import random
import time

import numpy as np

from betalab import golden_base, tribonacci_base
from betalab._kernel import compiled_available, make_kernel


def bench_orbits(kernel, inputs, max_steps=200_000):
    from betalab.errors import StateBudgetError
    t0 = time.perf_counter()
    for nums, den in inputs:
        try:
            kernel.orbit(nums, den, max_steps)
        except StateBudgetError:
            pass
    return time.perf_counter() - t0


def bench_streams(kernel, rows, sn, sd, K, n0, n_out):
    t0 = time.perf_counter()
    for row in rows:
        kernel.stream_values(row, sn, sd, K, n0, n_out)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()
    if not compiled_available():
        print("compiled kernel not built; nothing to compare")
        return

    rng = random.Random(args.seed)
    for name, base in (("golden-d2", golden_base(2)),
                       ("tribonacci-d2", tribonacci_base(2))):
        pure = make_kernel(base, backend="pure")
        comp = make_kernel(base, backend="compiled")
        m = base.degree

        inputs = []
        while len(inputs) < args.samples:
            den = rng.randrange(2, 5000)
            nums = tuple(rng.randrange(0, den) if i == 0 else rng.randrange(-2, 3)
                         for i in range(m))
            from betalab import FieldElement
            from fractions import Fraction
            el = FieldElement(base, tuple(Fraction(n, den) for n in nums))
            if el.sign() >= 0 and (el - base.one()).sign() < 0:
                inputs.append((nums, den))

        tp = bench_orbits(pure, inputs)
        tc = bench_orbits(comp, inputs)
        print(f"{name}  orbit x{args.samples}:  pure {tp:.3f}s  "
              f"compiled {tc:.3f}s  speedup {tp / tc:.1f}x")

        K = 3
        sn, sd = base.scale.numerator_vector()
        rows = []
        for _ in range(args.samples):
            row = []
            for _ in range(12):
                row += [rng.randrange(0, base.d) for _ in range(rng.randrange(1, 6))]
                row += [0] * rng.randrange(2 * K, 4 * K)
            row += [0] * (6 * K)
            rows.append(row)
        crows = [np.asarray(r, dtype=np.int64) for r in rows]
        tp = bench_streams(pure, rows, sn, sd, K, 8, 48)
        tc = bench_streams(comp, crows, sn, sd, K, 8, 48)
        print(f"{name}  stream x{args.samples}: pure {tp:.3f}s  "
              f"compiled {tc:.3f}s  speedup {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
