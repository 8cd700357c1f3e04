"""Times the compiled dominance kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 200,500,1000,2000]
"""

import argparse
import timeit

import numpy as np

from prefsearch.kernels import _fallback

try:
    from prefsearch.kernels import _core
except ImportError:
    _core = None


def bench(fn, costs, repeat=5, number=3):
    return min(timeit.repeat(lambda: fn(costs), number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="200,500,1000,2000")
    parser.add_argument("--prefs", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"pairwise Pareto masks, m={args.prefs} preferences")
    print(f"{'n':>6}  {'fallback (numpy)':>18}  {'compiled':>12}  {'speedup':>8}")
    rng = np.random.default_rng(0)
    for n in sizes:
        costs = rng.uniform(0, 1, size=(args.prefs, n))
        costs[:, : n // 10] = costs[:, 0:1]  # inject ties to exercise both masks
        t_py = bench(_fallback.pareto_masks, costs)
        if _core is not None:
            d1, e1 = _fallback.pareto_masks(costs)
            d2, e2 = _core.pareto_masks(costs)
            assert (d1 == d2).all() and (e1 == e2).all(), "kernels disagree"
            t_c = bench(_core.pareto_masks, costs)
            print(f"{n:>6}  {t_py * 1e3:>15.2f} ms  {t_c * 1e3:>9.2f} ms  {t_py / t_c:>7.1f}x")
        else:
            print(f"{n:>6}  {t_py * 1e3:>15.2f} ms  {'(not built)':>12}  {'-':>8}")


if __name__ == "__main__":
    main()
