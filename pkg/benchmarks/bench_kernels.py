"""Compare the compiled kernels with the pure-Python fallback.

Run ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each workload is
timed on both backends and the outputs are checked for equality.
"""

import argparse
import random
import sys
import time

from multirigid import _pykernels
from multirigid.ngon import polygon
from multirigid.rigidity import ParameterConfig
from multirigid.fan import Realization, make_matrix

try:
    from multirigid import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    poly = polygon(10, 2)
    rng = random.Random(0)
    R = Realization(make_matrix(2, 9, ParameterConfig.standard(9)), 2)
    facets = R.graph.facets[:400]
    bases = [[R.rays[i] for i in f] for f in facets]
    others = [R.rays[rng.randrange(len(R.rays))] for _ in facets]
    big = [[[rng.randint(-10**30, 10**30) for _ in range(8)] for _ in range(8)] for _ in range(200)]
    masks = [sum(1 << i for i in f) for f in facets]
    p9 = R.graph.poly
    cols = [[(r, rng.randint(-3, 3)) for r in sorted(rng.sample(range(40), 8))] for _ in range(3000)]
    u = [rng.randint(-5, 5) for _ in range(40)]
    skip = [False] * len(cols)

    def make(k):
        return {
            "enumerate (2,10) facets": lambda: sum(1 for _ in k.enumerate_facets(poly.cross, 2, poly.dim, None)),
            "det of 400 facet bases (2,9)": lambda: [k.det(b) for b in bases],
            "det of 200 8x8 100-bit matrices": lambda: [k.det(b) for b in big],
            "solve 400 flip systems (2,9)": lambda: [k.solve(b, v) for b, v in zip(bases, others)],
            "flip partners (2,9)": lambda: [k.flip_partner(m, e, p9.cross, 2) for m, f in zip(masks, facets) for e in f],
            "pricing over 3000 columns": lambda: [k.best_positive(u, cols, skip) for _ in range(20)],
        }

    return make


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare", file=sys.stderr)
        return 1
    make = workloads()
    py, cy = make(_pykernels), make(_ckernels)
    print(f"{'workload':36s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name in py:
        tp, op = _time(py[name], args.repeat)
        tc, oc = _time(cy[name], args.repeat)
        if op != oc:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:36s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
