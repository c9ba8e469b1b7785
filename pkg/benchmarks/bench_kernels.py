"""Time the compiled search kernel against the pure-Python fallback.

Decodes the same batch of syndromes (drawn at p = 0.1 on each family's full
incidence matrix) with both backends, checks the outputs agree, and prints one
CSV row per family.

    python3 benchmarks/bench_kernels.py --L 4 --shots 2000
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from stripsym import _search_py
from stripsym.families import ALL_FAMILIES, build
from stripsym.gf2 import pack_bits
from stripsym.model import incidence_matrix
from stripsym.sim import fmt

try:
    from stripsym import _search
except ImportError:
    _search = None


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, default=4)
    ap.add_argument("--shots", type=int, default=2000)
    ap.add_argument("--p", type=float, default=0.1)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _search is None:
        print("compiled kernel not built; run pip install -e . first", file=sys.stderr)
        return 1

    rng = np.random.default_rng(args.seed)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(("family", "L", "n_fault", "shots", "cython_s", "python_s", "speedup"))
    for fam in ALL_FAMILIES:
        H = incidence_matrix(build(fam, args.L).model).to_dense()
        E = (rng.random((args.shots, H.shape[1])) < args.p).astype(np.uint8)
        S = (E @ H.T % 2).astype(np.uint8)
        cols, syn = pack_bits(H.T), pack_bits(S)
        a = _search.ml_search_batch(cols, syn)
        b = _search_py.ml_search_batch(cols, syn)
        if not (np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])):
            print(f"{fam}: backends disagree", file=sys.stderr)
            return 1
        tc = best_of(lambda: _search.ml_search_batch(cols, syn), args.repeats)
        tp = best_of(lambda: _search_py.ml_search_batch(cols, syn), args.repeats)
        out.writerow((str(fam), args.L, H.shape[1], args.shots, fmt(tc), fmt(tp), fmt(tp / tc if tc else float("inf"))))
    return 0


if __name__ == "__main__":
    sys.exit(main())
