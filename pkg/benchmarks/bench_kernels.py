"""Compare the compiled and pure-Python CHSH kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from quditcorr import kernels
from quditcorr.bell import CHSH_PAIRS, chsh_sign_matrix, optimize_chsh
from quditcorr.io import bell_matrix
from quditcorr.linalg import random_density


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--restarts", type=int, default=32)
    args = ap.parse_args(argv)

    backends = ["python"] + (["cython"] if kernels.compiled_available() else [])
    rng = np.random.default_rng(0)
    rho = random_density(4, rng)
    X = rng.uniform(-np.pi, np.pi, (args.batch, 12))
    pairs, sign = np.array(CHSH_PAIRS), chsh_sign_matrix()

    rows = []
    for name in backends:
        mod = kernels.get_backend(name)
        t_batch = best_of(lambda: mod.chsh_batch(rho, X, pairs, sign), args.repeat)
        t_opt = best_of(lambda: optimize_chsh(bell_matrix(), restarts=args.restarts, backend=name), max(1, args.repeat // 2))
        best = optimize_chsh(bell_matrix(), restarts=args.restarts, backend=name).best_B
        rows.append((name, t_batch, t_opt, best))

    print(f"{'backend':<8} {'chsh_batch':>12} {'optimize':>10} {'best_B':>14}")
    print(f"{'':<8} {f'({args.batch} pts)':>12} {f'({args.restarts} rs)':>10}")
    for name, tb, to, best in rows:
        print(f"{name:<8} {tb * 1e3:>10.1f}ms {to:>9.3f}s {best:>14.10f}")
    if len(rows) == 2:
        print(f"speedup: batch x{rows[0][1] / rows[1][1]:.1f}, optimizer x{rows[0][2] / rows[1][2]:.1f}")


if __name__ == "__main__":
    main()
