"""Compare the numba and numpy modular RREF kernels.

    python benchmarks/bench_kernels.py [--sizes 50,100,200] [--repeat 3] [--end-to-end]

Kernel timings run both implementations in this process on the same random
matrices and check that they agree. ``--end-to-end`` also times the full
operator-space computation for the six-dimensional example table in two
subprocesses, one with ``LYAT_DISABLE_NUMBA=1``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from lyat.kernels import HAS_NUMBA, rref_mod_numba, rref_mod_numpy
from lyat.linalg import PRIMES

END_TO_END = """
import time
from lyat.io import load_algebra
from lyat.derivations import KINDS, operator_space
from lyat.kernels import backend
times = []
for _ in range(2):
    # a fresh object each round so the space cache does not hit
    A = load_algebra("ly_2_10.alg")
    t0 = time.perf_counter()
    dims = {k: operator_space(A, k).dim for k in KINDS}
    times.append(f"{time.perf_counter() - t0:.3f}")
print(backend(), "first/second run s:", "/".join(times), dims)
"""


def best_of(fn, a, p, repeat):
    times = []
    out = None
    for _ in range(repeat):
        work = a.copy()
        t0 = time.perf_counter()
        out = fn(work, p)
        times.append(time.perf_counter() - t0)
        result = work
    return min(times), out, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1

    p = PRIMES[0]
    rng = np.random.default_rng(args.seed)
    # compile outside the timed region
    rref_mod_numba(rng.integers(0, p, size=(4, 4)).astype(np.int64), p)
    print(f"{'rows x cols':>14} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        # wide, rank-deficient systems like the stacked derivation conditions
        a = (rng.integers(0, p, size=(n, n // 2)) @ rng.integers(0, 3, size=(n // 2, 2 * n))) % p
        a = np.ascontiguousarray(a, dtype=np.int64)
        tn, (rn, pn), wn = best_of(rref_mod_numba, a, p, args.repeat)
        tp, (rp, pp), wp = best_of(rref_mod_numpy, a, p, args.repeat)
        if rn != rp or not np.array_equal(pn, pp) or not np.array_equal(wn, wp):
            print(f"kernels disagree at size {n}")
            return 2
        print(f"{f'{n} x {2 * n}':>14} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f}")

    if args.end_to_end:
        for flag in ("0", "1"):
            env = dict(os.environ, LYAT_DISABLE_NUMBA=flag)
            out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True)
            print("end to end:", out.stdout.strip() or out.stderr.strip())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
