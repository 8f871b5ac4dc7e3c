"""Time the compiled kernels against the pure-Python reference.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from tailspec import _kernels
from tailspec.graph import TailAttachment, attach_tails, chain_truncation, gen


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    n = 2000
    d = rng.uniform(-1, 1, n)
    e2 = rng.uniform(0.5, 1.5, n - 1)
    yield "tridiag_eigvals n=2000 (top 20)", lambda k: k.tridiag_eigvals(d, e2, n - 20, n, -5.0, 5.0)

    T = attach_tails(gen("wheel", n=12), [TailAttachment(13, rays=3), TailAttachment(1)])
    ct = chain_truncation(T, 400)
    args = (
        np.ascontiguousarray(ct.base, dtype=float),
        np.ascontiguousarray(ct.chain_vertex, dtype=np.int_),
        np.ascontiguousarray(ct.chain_ptr, dtype=np.int_),
        np.ascontiguousarray(ct.chain_d, dtype=float),
        np.ascontiguousarray(ct.chain_e2, dtype=float),
    )
    dim = ct.dimension
    yield f"arrow_eigvals dim={dim} (top 10)", lambda k: k.arrow_eigvals(*args, dim - 10, dim, -20.0, 20.0)

    a = rng.normal(size=(60, 60))
    a = a + a.T
    yield "jacobi_eigvals 60x60", lambda k: k.jacobi_eigvals(a)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    py, cy = _kernels.python_backend, _kernels.compiled_backend
    if cy is None:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'kernel':40s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in cases():
        tp = best_of(lambda: fn(py), args.repeat)
        if cy is None:
            print(f"{name:40s} {tp:11.4f}")
            continue
        tc = best_of(lambda: fn(cy), args.repeat)
        print(f"{name:40s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
