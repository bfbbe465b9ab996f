"""Time the numba kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--parts 2,3,2] [--repeat 5]

Each kernel is called once per backend before timing, so numba compilation
is excluded. Outputs are compared for equality before anything is reported.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from qlaguerre import _kernels
from qlaguerre.marked import Composition, homogeneous_mask, marked_arrays
from qlaguerre.matchings import matchings_array, permutations_array


def _inputs(c: Composition, matching_n: int) -> dict[str, tuple]:
    perms, marks = marked_arrays(c)
    bdiff = _kernels.get_kernels("numpy").marked_bdiff(perms, marks)
    homog = homogeneous_mask(c, perms)
    return {
        "perm_stats": (permutations_array(c.N, limit=c.N),),
        "matching_stats": (matchings_array(matching_n),),
        "marked_bdiff": (perms, marks),
        "marked_stats": (perms, marks),
        "convertible_all": (perms, marks, bdiff),
        "phi_batch": (perms, marks, homog, bdiff),
        "prop41_ok": (perms, marks, bdiff),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--parts", default="2,3,2", help="composition for the marked kernels")
    ap.add_argument("--matching-n", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = _kernels.available_backends()
    c = Composition.parse(args.parts)
    inputs = _inputs(c, args.matching_n)
    rows = len(inputs["marked_stats"][0])
    print(f"composition {c} ({rows} marked rows), matchings n={args.matching_n}")
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + "     speedup")

    for name, call_args in inputs.items():
        fns = {b: getattr(_kernels.get_kernels(b), name) for b in backends}
        results = {b: f(*call_args) for b, f in fns.items()}
        ref = results["numpy"]
        if not all(_same(ref, r) for r in results.values()):
            raise SystemExit(f"{name}: backends disagree")
        best = {
            b: min(timeit.repeat(lambda f=f: f(*call_args), number=1, repeat=args.repeat))
            for b, f in fns.items()
        }
        line = f"{name:<16}" + "".join(f"{best[b] * 1e3:>10.2f}ms" for b in backends)
        if "numba" in best:
            line += f"  {best['numpy'] / best['numba']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
