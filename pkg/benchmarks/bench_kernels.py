"""Compare the numba and pure-numpy paths of the hot kernels.

Kernel timings call both implementations directly in one process.  The
end-to-end timings run a workload in subprocesses with and without
LINSYZ_DISABLE_NUMBA so the module-level switch is exercised as users see it.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sizes 50 100 --repeat 2 --no-e2e
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from linsyz import _kernels as K

P = 32003

E2E_WORKLOADS = {
    "koszul betti, double curve d=4": (
        "from linsyz.curves import ferrand_double_ideal\n"
        "from linsyz.resolve import koszul_betti\n"
        "g = ferrand_double_ideal(4)\n"
        "koszul_betti(g, [(l, l + 1) for l in range(1, 8)])\n"
    ),
    "plethysm oracle S^5(S^3) dim 3": (
        "from linsyz.plethysm import sym_sym_oracle\n"
        "sym_sym_oracle(5, 3, 3)\n"
    ),
}


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(sizes, repeat, rng):
    if K.numba is None:
        print("numba not installed; only the numpy path is timed")
    jit = K.numba.njit(cache=True)(K.rref_loops_python) if K.numba is not None else None
    rows = []
    for n in sizes:
        a = rng.integers(0, P, size=(n, n + n // 2), dtype=np.int64)
        t_np = best_of(lambda: K.rref_numpy(a.copy(), np.int64(P)), repeat)
        t_jit = None
        if jit is not None:
            jit(a.copy(), np.int64(P))  # compile outside the timing
            t_jit = best_of(lambda: jit(a.copy(), np.int64(P)), repeat)
        rows.append((f"rref {n}x{n + n // 2}", t_np, t_jit))
    return rows


def bench_multiset(cases, repeat):
    jit = K.numba.njit(cache=True)(K.multiset_counts_loops_python) if K.numba is not None else None
    rows = []
    for n_weights, t in cases:
        offsets = np.arange(n_weights, dtype=np.int64) * 3
        length = int(offsets.max()) * t + 1
        t_np = best_of(lambda: K.multiset_counts_numpy(offsets, t, length), repeat)
        t_jit = None
        if jit is not None:
            jit(offsets, t, length)
            t_jit = best_of(lambda: jit(offsets, t, length), repeat)
        rows.append((f"multiset {n_weights} weights, t={t}", t_np, t_jit))
    return rows


def bench_e2e(repeat):
    rows = []
    for name, code in E2E_WORKLOADS.items():
        times = {}
        for flag in ("1", "0"):
            env = dict(os.environ, LINSYZ_DISABLE_NUMBA=flag)
            # first run warms the numba cache; timings include interpreter start-up
            subprocess.run([sys.executable, "-c", code], env=env, check=True)
            times[flag] = best_of(lambda: subprocess.run([sys.executable, "-c", code], env=env, check=True), repeat)
        rows.append((f"e2e {name}", times["1"], times["0"]))
    return rows


def report(rows) -> str:
    lines = [f"{'case':<42} {'numpy s':>10} {'numba s':>10} {'speedup':>8}"]
    for name, t_np, t_jit in rows:
        if t_jit is None:
            lines.append(f"{name:<42} {t_np:>10.4f} {'-':>10} {'-':>8}")
        else:
            lines.append(f"{name:<42} {t_np:>10.4f} {t_jit:>10.4f} {t_np / t_jit:>7.1f}x")
    return "\n".join(lines)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--multiset", type=int, nargs="+", default=[10, 20, 28],
                    help="numbers of weights for the multiset kernel")
    ap.add_argument("--t", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-e2e", action="store_true", help="skip the subprocess end-to-end timings")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    rows = bench_rref(args.sizes, args.repeat, rng)
    rows += bench_multiset([(n, args.t) for n in args.multiset], args.repeat)
    if not args.no_e2e:
        rows += bench_e2e(max(1, args.repeat - 1))
    print(report(rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
