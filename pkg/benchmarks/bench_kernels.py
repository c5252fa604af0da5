"""Numba vs numpy for the monomial-set kernels, plus one end-to-end run.

    python3 benchmarks/bench_kernels.py [--repeat 50] [--sizes 8 32 128 512]

JIT compilation is triggered before timing.  The end-to-end section runs the
Example 1 problem in a subprocess per backend so the env flag takes effect.
"""

import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from cisys import _kernels

ROOT = Path(__file__).resolve().parents[1]


def random_set(rng, k, n, maxdeg=6):
    U = np.unique(rng.integers(0, maxdeg + 1, size=(k * 2, n)), axis=0)[:k]
    return np.ascontiguousarray(U, dtype=np.int64)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_kernels(sizes, n, repeat, seed=0):
    if _kernels.numba_kernels is None:
        print("numba unavailable (or disabled); only numpy is timed")
    _kernels.warmup()
    if _kernels.numba_kernels is not None:
        nb = _kernels.numba_kernels
        U0 = random_set(np.random.default_rng(0), 4, n)
        nb["nm_matrix"](U0, np.arange(len(U0), dtype=np.int64), np.arange(n, dtype=np.int64))
    rng = np.random.default_rng(seed)
    print(f"{'kernel':<26}{'|U|':>6}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for k in sizes:
        U = random_set(rng, k, n)
        rank = np.arange(len(U), dtype=np.int64)
        rho = np.arange(n, dtype=np.int64)
        t = U[len(U) // 2] + 1
        nm_np = _kernels.numpy_kernels["nm_matrix"](U, rank, rho)
        cases = {
            "nm_matrix": lambda K: K["nm_matrix"](U, rank, rho),
            "involutive_divisor_mask": lambda K: K["involutive_divisor_mask"](U, nm_np, t),
            "divisor_mask": lambda K: K["divisor_mask"](U, t),
        }
        for name, call in cases.items():
            t_np = best_of(lambda: call(_kernels.numpy_kernels), repeat)
            if _kernels.numba_kernels is not None:
                a = call(_kernels.numpy_kernels)
                b = call(_kernels.numba_kernels)
                assert np.array_equal(a, b), f"{name}: backends disagree"
                t_nb = best_of(lambda: call(_kernels.numba_kernels), repeat)
                print(f"{name:<26}{len(U):>6}{t_np * 1e6:>12.1f}{t_nb * 1e6:>12.1f}{t_np / t_nb:>10.2f}")
            else:
                print(f"{name:<26}{len(U):>6}{t_np * 1e6:>12.1f}{'-':>12}{'-':>10}")


def bench_end_to_end(problem):
    print(f"\nend to end: cisys verify {problem.name}")
    for flag in ("0", "1"):
        env = dict(os.environ, CISYS_DISABLE_NUMBA=flag)
        code = (
            "import time, sys; from cisys import _kernels; _kernels.warmup();"
            "from cisys.cli import main; import io, contextlib;"
            "t = time.perf_counter();"
            f"buf = io.StringIO();\nwith contextlib.redirect_stdout(buf): main(['verify', {str(problem)!r}]);\n"
            "print(_kernels.BACKEND, round(time.perf_counter() - t, 3))"
        )
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
        print("  " + (out.stdout.strip() or out.stderr.strip()), "s")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=50)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 128, 512])
    ap.add_argument("--nvars", type=int, default=4)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    print(f"active backend: {_kernels.BACKEND}")
    bench_kernels(args.sizes, args.nvars, args.repeat)
    if not args.skip_e2e:
        bench_end_to_end(ROOT / "problems" / "example1.txt")


if __name__ == "__main__":
    main()
