"""Compare the compiled and pure-Python enumeration kernels.

    python benchmarks/bench_kernel.py [--repeat 3] [--max-half-edges 14]

Both kernels must return identical count dictionaries; the script exits
nonzero otherwise.  The pure-Python kernel is skipped above ``--py-limit``
half-edges because it is orders of magnitude slower.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from typing import Callable, Dict, List, Sequence, Tuple

from maprec import _kernel_py

try:
    from maprec import _kernel
except ImportError:  # pragma: no cover
    _kernel = None

CASES: List[Tuple[Tuple[int, ...], int]] = [
    ((4, 4, 4), 1),
    ((2, 2, 4, 4), 2),
    ((6, 4, 4), 1),
    ((8, 4, 4), 1),
    ((4, 4, 4, 4), 2),
    ((2, 4, 4, 4), 1),
    ((6, 6, 4), 2),
    ((4, 4, 4, 4, 4), 1),
    ((8, 8, 4), 2),
]


def _time(fn: Callable[[], Dict], repeat: int) -> Tuple[float, Dict]:
    runs, out = [], {}
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - t)
    return statistics.median(runs), out


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-half-edges", type=int, default=16)
    ap.add_argument("--py-limit", type=int, default=12)
    args = ap.parse_args(argv)
    if _kernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'faces':<18}{'H':>4}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    ok = True
    for faces, nb in CASES:
        H = sum(faces)
        if H > args.max_half_edges:
            continue
        tc, rc = _time(lambda: _kernel.count_maps(faces, nb), args.repeat)
        if H <= args.py_limit:
            tp, rp = _time(lambda: _kernel_py.count_maps(faces, nb), args.repeat)
            same = rc == rp
            ok &= same
            speed = f"{tp / tc:9.1f}x" if tc > 0 else "      inf"
            print(f"{str(faces):<18}{H:>4}{tc:>12.4f}{tp:>12.4f}{speed}{'' if same else '  MISMATCH'}")
        else:
            print(f"{str(faces):<18}{H:>4}{tc:>12.4f}{'-':>12}{'-':>10}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
