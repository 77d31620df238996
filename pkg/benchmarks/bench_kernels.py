"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Both backends are imported directly, so one run times both regardless of
AMASS_PURE_PYTHON.  Every case also checks that the two agree.
"""

import argparse
import time

import numpy as np

from amass import _pykernels

try:
    from amass import _ckernels
except ImportError:
    _ckernels = None

I4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
H2 = [[0, 1], [1, 0]]


def cases(quick):
    out = [
        ("count_orthogonal I4 mod 3", "count_orthogonal", (I4, 3, 3)),
        ("count_orthogonal I4 mod 4", "count_orthogonal", (I4, 4, 4)),
        ("count_orthogonal H2 mod 8", "count_orthogonal", (H2, 8, 4)),
        ("sym4_charpoly_hist p=3", "sym4_charpoly_hist", (3, [1, 1, 1, 1])),
        ("sym4_charpoly_hist p=5", "sym4_charpoly_hist", (5, [1, 1, 1, 1])),
    ]
    if not quick:
        out += [
            ("count_orthogonal I4 mod 5", "count_orthogonal", (I4, 5, 5)),
            ("sym4_charpoly_hist p=7", "sym4_charpoly_hist", (7, [1, 1, 1, 1])),
        ]
    return out


def best_of(fn, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, result


def same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return tuple(a) == tuple(b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)

    if _ckernels is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':32s} {'python':>10s} {'cython':>10s} {'speedup':>8s}  agree")
    rows = []
    for label, name, fargs in cases(args.quick):
        tp, rp = best_of(getattr(_pykernels, name), fargs, args.repeat)
        if _ckernels is None:
            print(f"{label:32s} {tp:10.4f} {'-':>10s} {'-':>8s}  -")
            continue
        tc, rc = best_of(getattr(_ckernels, name), fargs, args.repeat)
        ok = same(rp, rc)
        rows.append(ok)
        print(f"{label:32s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}  {'yes' if ok else 'NO'}")
    return 0 if all(rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
