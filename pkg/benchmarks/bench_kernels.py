"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--nx N]
"""
import argparse
import time

import numpy as np

from charburg import InitialCondition, RootConfig, SourceFamily
from charburg import _backend

CASES = {
    "linear/piecewise t=0.2": (SourceFamily.linear(-2.0), InitialCondition.plateau_piecewise(), 0.2),
    "quadratic/sine t=0.15": (SourceFamily.quadratic(-2.0), InitialCondition.sine(), 0.15),
    "exponential/step t=0.26": (SourceFamily.exponential(-1.0), InitialCondition.smoothed_step(), 0.26),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--nx", type=int, default=4001)
    args = ap.parse_args()

    py, ck = _backend.python_kernels, _backend.compiled_kernels
    if ck is None:
        print("compiled kernels are not built; only the fallback is available")
    xs = np.linspace(0.0, 1.0, args.nx)
    cfg = RootConfig()
    print(f"{'case':28s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, (f, ic, t) in CASES.items():
        rows = [("solve " + name, lambda k: k.solve_points(f, ic, xs, t, cfg)),
                ("rk4 " + name.split()[0], lambda k: k.rk4_characteristic(f, 0.3, 1.0, t, 1e-6))]
        for label, run in rows:
            tp = best_of(lambda: run(py), args.repeat)
            if ck is None:
                print(f"{label:28s} {tp:11.4f} {'-':>11s} {'-':>8s}")
                continue
            tc = best_of(lambda: run(ck), args.repeat)
            print(f"{label:28s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
