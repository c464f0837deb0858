"""Compare the compiled and pure-Python sign-vector kernels.

Times ``upset_sums`` (the duality kernel) and ``leq_matrix`` (face-poset
comparability) on the cells of random arrangements, checks that both
backends agree, and prints one row per size.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]
"""

from __future__ import annotations

import argparse
import random
import time

from eulercalc import kernels
from eulercalc.generate import random_arrangement

SIZES = ((2, 6), (2, 12), (3, 6), (3, 9), (4, 8))


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        raise SystemExit("compiled kernels are not available; build with `pip install -e . --no-build-isolation`")
    rng = random.Random(args.seed)
    print(f"{'n':>2} {'forms':>5} {'cells':>6} | {'upset py':>9} {'upset c':>9} {'x':>6} | "
          f"{'leq py':>9} {'leq c':>9} {'x':>6}")
    for n, m in SIZES:
        arr = random_arrangement(rng, n, m)
        signs = [c.signs for c in arr.cells]
        weights = [rng.randint(-5, 5) * (-1) ** c.dim for c in arr.cells]
        up_py = kernels.upset_sums(signs, signs, weights, backend="python")
        up_c = kernels.upset_sums(signs, signs, weights, backend="cython")
        if up_py != up_c:
            raise SystemExit(f"backends disagree on upset_sums for n={n}, m={m}")
        if kernels.leq_matrix(signs, signs, "python") != kernels.leq_matrix(signs, signs, "cython"):
            raise SystemExit(f"backends disagree on leq_matrix for n={n}, m={m}")
        t_up_py = _best(lambda: kernels.upset_sums(signs, signs, weights, backend="python"), args.repeat)
        t_up_c = _best(lambda: kernels.upset_sums(signs, signs, weights, backend="cython"), args.repeat)
        t_leq_py = _best(lambda: kernels.leq_matrix(signs, signs, "python"), args.repeat)
        t_leq_c = _best(lambda: kernels.leq_matrix(signs, signs, "cython"), args.repeat)
        print(f"{n:>2} {len(arr.keys):>5} {len(signs):>6} | {t_up_py:>9.4f} {t_up_c:>9.4f} {t_up_py / t_up_c:>6.1f} | "
              f"{t_leq_py:>9.4f} {t_leq_c:>9.4f} {t_leq_py / t_leq_c:>6.1f}")


if __name__ == "__main__":
    main()
