"""Time the compiled and pure-Python sampling kernels on the same points.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from dahlres import kernels
from dahlres.backward_error import evaluate
from dahlres.methods import resolve_string

METHODS = ["theta:0", "rk:rkf5", "tau:4", "pade:16,16"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    mu = rng.uniform(-20, 20, args.points) + 1j * rng.uniform(-20, 20, args.points)
    backends = sorted(kernels.BACKENDS)
    print(f"default backend: {kernels.BACKEND}; {args.points} points, best of {args.repeat}")
    print(f"{'method':<12}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'max|diff|':>12}")
    for name in METHODS:
        r = resolve_string(name).r
        times, outs = {}, {}
        for b in backends:
            outs[b] = evaluate(r, mu, backend=b)
            times[b] = min(timeit.repeat(lambda: evaluate(r, mu, backend=b), number=1, repeat=args.repeat))
        line = f"{name:<12}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
        if "cython" in times:
            ok = np.isfinite(outs["python"].abs_delta)
            diff = np.abs(outs["python"].delta[ok] - outs["cython"].delta[ok]).max()
            line += f"{times['python'] / times['cython']:>9.2f}x{diff:>12.2e}"
        print(line)


if __name__ == "__main__":
    main()
