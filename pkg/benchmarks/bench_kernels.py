"""Compare the compiled and NumPy search kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--max-cost K]

Times ``expand_fingerprints`` on a realistic frontier and the full
``build_cost_atlas`` with each backend, and checks both give identical
fingerprints and byte-identical atlases.
"""

import argparse
import statistics
import time

import numpy as np

from revseq import _backend
from revseq.synth import build_cost_atlas, enumerate_primitives, primitive_table


def _timed(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def _frontier(width, n, seed=0):
    # random products of primitives: same kind of matrices the search sees
    table = primitive_table(enumerate_primitives(width), width)
    k = _backend.get("numpy")
    rng = np.random.default_rng(seed)
    mats = np.broadcast_to(np.eye(1 << width, dtype=complex), (n, 1 << width, 1 << width)).copy()
    for _ in range(4):
        mats = k.apply_selected(mats, table, np.arange(n), rng.integers(0, len(table), n))
    return mats, table


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--frontier", type=int, default=4000, help="matrices per expand call")
    ap.add_argument("--max-cost", type=int, default=5)
    args = ap.parse_args(argv)

    backends = ["numpy"]
    try:
        _backend.get("cython")
        backends.append("cython")
    except ImportError:
        print("compiled kernels not built; timing the NumPy path only")

    mats, table = _frontier(3, args.frontier)
    results = {}
    print(f"expand_fingerprints: {args.frontier} x {len(table)} products (width 3)")
    for name in backends:
        k = _backend.get(name)
        dt, out = _timed(lambda: k.expand_fingerprints(mats, table), args.repeat)
        results[name] = out
        print(f"  {name:<7} {dt * 1e3:9.1f} ms")
    if len(results) == 2:
        same = all(np.array_equal(a, b) for a, b in zip(results["numpy"], results["cython"]))
        print(f"  identical output: {same}")

    print(f"build_cost_atlas(3, {args.max_cost})")
    texts = {}
    for name in backends:
        dt, atlas = _timed(lambda: build_cost_atlas(3, args.max_cost, backend=name), 1)
        texts[name] = atlas.to_text()
        print(f"  {name:<7} {dt:9.2f} s   {len(atlas)} permutations")
    if len(texts) == 2:
        print(f"  byte-identical atlas: {texts['numpy'] == texts['cython']}")


if __name__ == "__main__":
    main()
