"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py --copies 10 --repeat 5
"""

import argparse
import random
import statistics
import time

from justcheck import _kernels_py, kernels
from justcheck.ccs import explore, parse
from justcheck.clts import CLTS

try:
    from justcheck import _kernels as compiled
except ImportError:
    compiled = None


def flat(c: CLTS):
    ts = c.transitions
    labels = {}
    return (len(c.states), [t.source for t in ts], [t.target for t in ts],
            [labels.setdefault(t.label, len(labels)) for t in ts], [c.masks[t.id] for t in ts])


def interleaving(copies: int) -> CLTS:
    env, main = parse("C = up.down.C\nmain = " + " | ".join(["C"] * copies))
    return explore(main, env, max_states=1 << (copies + 1))


def random_graph(rng, n, m):
    src = [rng.randrange(n) for _ in range(m)]
    tgt = [rng.randrange(n) for _ in range(m)]
    label = [rng.randrange(4) for _ in range(m)]
    mask = [1 << rng.randrange(8) for _ in range(m)]
    return n, src, tgt, label, mask


def timed(fn, repeat):
    runs = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - start)
    return statistics.median(runs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--copies", type=int, default=10, help="parallel copies of a two-state cycle")
    ap.add_argument("--states", type=int, default=20000, help="random graph size")
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    c = interleaving(args.copies)
    inputs = [(f"interleaving x{args.copies}", flat(c)),
              ("random", random_graph(random.Random(args.seed), args.states, args.states * args.degree))]
    impls = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    print(f"{'input':22} {'n':>7} {'m':>8} {'kernel':14} " + " ".join(f"{name:>10}" for name, _ in impls)
          + ("   speedup" if compiled else ""))
    for label, (n, src, tgt, lab, mask) in inputs:
        alive, ealive = [1] * n, [1] * len(src)
        jobs = {
            "scc": lambda impl: kernels.scc_labels(n, src, tgt, alive, ealive, impl=impl),
            "noninterference": lambda impl: kernels.noninterference_violations(n, src, tgt, lab, mask, impl=impl),
        }
        for kname, job in jobs.items():
            times = [timed(lambda: job(impl), args.repeat) for _, impl in impls]
            row = f"{label:22} {n:7} {len(src):8} {kname:14} " + " ".join(f"{t * 1000:8.1f}ms" for t in times)
            if compiled:
                row += f"   {times[0] / times[1]:6.1f}x"
            print(row)
    if not compiled:
        print("compiled extension not built; only the pure kernels were timed")


if __name__ == "__main__":
    main()
