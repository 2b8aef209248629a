#!/usr/bin/env python3
"""Times the compiled kernels against the NumPy fallback.

Workloads mirror the two hot loops: candidate-population fitness evaluation
(the search inner loop) and batched decoding (the Monte Carlo inner loop).

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from sigecc import kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads(rng):
    jobs = []

    # fitness over a rate-4/7 population (the default GA setting)
    m, n, pop_size = 16, 7, 200
    pop47 = rng.integers(0, 2, size=(pop_size, m, n), dtype=np.uint8)
    vals = np.arange(m, dtype=np.float64)
    table47 = (vals[:, None] - vals[None, :]) ** 2
    lut47 = np.exp(-np.arange(n + 1) / 2.0)
    jobs.append(
        (
            "fitness_many 200x(16x7)",
            lambda impl: impl.fitness_many(pop47, table47, lut47, 1e6),
        )
    )

    # fitness over a rate-8/12 population (large-m stress)
    m, n, pop_size = 256, 12, 32
    pop128 = rng.integers(0, 2, size=(pop_size, m, n), dtype=np.uint8)
    vals = np.arange(m, dtype=np.float64)
    table128 = (vals[:, None] - vals[None, :]) ** 2
    lut128 = np.exp(-np.arange(n + 1) / 2.0)
    jobs.append(
        (
            "fitness_many 32x(256x12)",
            lambda impl: impl.fitness_many(pop128, table128, lut128, 1e9),
        )
    )

    # batched decoding at rate 4/7, 100k received words
    m, n, batch = 16, 7, 100_000
    words = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    while len({w.tobytes() for w in words}) < m:
        words = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    mod = 1.0 - 2.0 * words.astype(np.float64)
    received = mod[rng.integers(m, size=batch)] + rng.normal(0, 1.0, (batch, n))
    jobs.append(("hard_decode_many 100k", lambda impl: impl.hard_decode_many(received, words)))
    jobs.append(("soft_decode_many 100k", lambda impl: impl.soft_decode_many(received, mod)))
    jobs.append(
        (
            "bayes_decode_many 100k",
            lambda impl: impl.bayes_decode_many(received, mod, table47, 1.0),
        )
    )
    return jobs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (selected: {kernels.backend_name()})")
    header = f"{'workload':28s} " + " ".join(f"{b:>12s}" for b in backends)
    if "compiled" in backends:
        header += f" {'speedup':>9s}"
    print(header)

    for name, job in workloads(rng):
        times = {}
        for backend in backends:
            impl = kernels.get_impl(backend)
            times[backend] = _time(lambda: job(impl), args.repeat)
        line = f"{name:28s} " + " ".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if "compiled" in backends:
            line += f" {times['python'] / times['compiled']:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
