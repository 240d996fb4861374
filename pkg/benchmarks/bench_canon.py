"""Time the compiled canonical-labeling kernel against the pure-Python one.

    python3 benchmarks/bench_canon.py [--reps 5] [--seed 1]

Both backends are called directly on the same inputs, so the numbers do not
depend on SUNCAT_BACKEND.  Outputs are compared as a sanity check.
"""

import argparse
import random
import sys
import time

from suncat.canon import _pure
from suncat.families import random_sunshine
from suncat.graph import Graph

try:
    from suncat.canon import _kernel
except ImportError:
    _kernel = None


def gnp(rng, n, p=0.5):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def workloads(rng):
    for n in (10, 20, 40, 60):
        yield f"gnp n={n}", [gnp(rng, n) for _ in range(20)]
    for c in (8, 16, 30):
        yield f"sunshine c={c}", [random_sunshine(rng, c, c) for _ in range(20)]
    for n in (12, 32, 64):
        yield f"cycle n={n}", [cycle(n)]


def run(mod, graphs, reps):
    best = float("inf")
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = [mod.canonical_labeling(g.n, list(g.masks), [0] * g.n)[0] for g in graphs]
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _kernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` with Cython available")
        return 1
    rng = random.Random(args.seed)
    print(f"{'workload':<18}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, graphs in workloads(rng):
        tp, lp = run(_pure, graphs, args.reps)
        tc, lc = run(_kernel, graphs, args.reps)
        if [list(x) for x in lp] != [list(x) for x in lc]:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<18}{tp * 1e3:>12.2f}{tc * 1e3:>12.2f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
