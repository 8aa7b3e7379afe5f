"""Compare the compiled and numpy Monte Carlo kernels.

    python benchmarks/bench_kernels.py --samples 1000000 --repeats 3
"""

import argparse
import time

import numpy as np

from epwbell import _backend
from epwbell.numerics import stream_key


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    key = stream_key(1, 0)
    t1 = np.array([1.5, 4.5])
    t2 = np.array([1.5, 4.5])
    kernels = {"python": _backend.python_kernel}
    if _backend.compiled_kernel is not None:
        kernels["compiled"] = _backend.compiled_kernel
    else:
        print("compiled kernel not built; timing the numpy kernel only")

    timings = {}
    counts = {}
    for name, kern in kernels.items():
        t_counts, counts[name] = best_of(
            lambda: kern.sign_counts(key, args.samples, 1.0, -1.0, 0.1, t1, t2), args.repeats)
        t_sample, _ = best_of(
            lambda: kern.sample_block(key, 0, args.samples, 1.0, -1.0, 0.1), args.repeats)
        timings[name] = (t_counts, t_sample)
        rate = args.samples / t_counts / 1e6
        print(f"{name:9s} sign_counts {t_counts * 1e3:8.1f} ms ({rate:6.1f} M samples/s)   "
              f"sample_block {t_sample * 1e3:8.1f} ms")

    if len(kernels) == 2:
        same = all(np.array_equal(a, b) for a, b in zip(counts["python"], counts["compiled"]))
        speed = timings["python"][0] / timings["compiled"][0]
        print(f"speedup (sign_counts): {speed:.1f}x, identical counts: {same}")


if __name__ == "__main__":
    main()
