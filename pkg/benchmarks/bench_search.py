"""Time the compiled search kernel against the pure-Python one.

Both kernels get identical precomputed bitsets and domains, so the numbers
compare the backtracking loops alone.

    python3 benchmarks/bench_search.py --repeat 5
"""

from __future__ import annotations

import argparse
import itertools
import random
import statistics
import time

from iforge import _search_py
from iforge.morphisms import MorphKind, _bitsets, _initial_domains, _with_loops
from iforge.structures import graph
from iforge.trees import TruncSpec, build_t


def kernel_args(a, b, kind):
    la, lb = sorted(a.domain), sorted(b.domain)
    sa, sb = _bitsets(a, la), _bitsets(b, lb)
    doms = _initial_domains(a, b, kind, la, lb, sa, sb)
    return (
        len(la), len(lb), sa[0], sa[1], _with_loops(sb[0], sb[2]), _with_loops(sb[1], sb[2]),
        kind.strong, kind.injective, kind.surjective, doms, -1,
    )


def cases():
    rng = random.Random(1)
    spec = TruncSpec(4, 3)
    p3 = build_t(graph(3, [(0, 1), (1, 2)]), spec).structure
    p3_other = build_t(graph(3, [(0, 2), (2, 1)]), spec).structure
    yield "iso T-codes (218 nodes)", p3, p3_other, MorphKind.ISOMORPHISM

    small = build_t(graph(2, [(0, 1)]), TruncSpec(2, 2)).structure
    big = build_t(graph(3, [(0, 1), (1, 2), (0, 2)]), TruncSpec(3, 3)).structure
    yield "embed T-code into T-code", small, big, MorphKind.EMBEDDING

    def random_graph(n, p):
        return graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])

    def bipartite(n, p):
        half = n // 2
        return graph(n, [(i, j) for i in range(half) for j in range(half, n) if rng.random() < p])

    def cycle(n):
        return graph(n, [(i, (i + 1) % n) for i in range(n)])

    k6 = graph(6, itertools.combinations(range(6), 2))
    yield "no K6 in G(40, 0.5)", k6, random_graph(40, 0.5), MorphKind.EMBEDDING
    yield "embed C10 into G(60, 0.08)", cycle(10), random_graph(60, 0.08), MorphKind.EMBEDDING
    # odd cycles have no homomorphism into a bipartite graph: full refutation
    yield "no weakhom C7 into bipartite(20)", cycle(7), bipartite(20, 0.4), MorphKind.WEAK_HOMOMORPHISM
    yield "no embedding C9 into G(14, 0.3)", cycle(9), random_graph(14, 0.3), MorphKind.EMBEDDING


def timed(fn, args, repeat):
    samples = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples), result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    try:
        from iforge._search_ext import search_kernel as compiled
    except ImportError:
        compiled = None
        print("compiled kernel not built; timing the Python kernel only")

    print(f"{'case':34} {'python':>10} {'cython':>10} {'speedup':>8} {'expansions':>11}")
    for name, a, b, kind in cases():
        kargs = kernel_args(a, b, kind)
        py_t, py_res = timed(_search_py.search_kernel, kargs, args.repeat)
        if compiled is None:
            print(f"{name:34} {py_t * 1e3:9.2f}ms {'-':>10} {'-':>8} {py_res[2]:>11}")
            continue
        cy_t, cy_res = timed(compiled, kargs, args.repeat)
        assert cy_res == py_res, f"kernels disagree on {name}"
        print(f"{name:34} {py_t * 1e3:9.2f}ms {cy_t * 1e3:9.2f}ms {py_t / cy_t:7.1f}x {py_res[2]:>11}")


if __name__ == "__main__":
    main()
