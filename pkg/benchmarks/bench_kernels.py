"""Benchmark the compiled closure kernel against the pure-Python fallback.

Two workloads:
  * raw closure calls on random instances (the kernel inner loop);
  * exhaustive min-budget scans (the brute-force oracle), which spend
    nearly all their time inside the kernel.

Run:  python3 benchmarks/bench_kernels.py [--edges N] [--vertices N]
"""

import argparse
import random
import time

from budgetfd import _closure_py

try:
    from budgetfd import _closure_c
except ImportError:
    _closure_c = None


def random_instance(rng, n_vertices, n_edges):
    full = (1 << n_vertices) - 1
    tails = [rng.randrange(full + 1) for _ in range(n_edges)]
    heads = [rng.randrange(full + 1) for _ in range(n_edges)]
    return tails, heads


def bench_raw_closure(kernel_cls, instances, queries):
    start = time.perf_counter()
    sink = 0
    for (tails, heads, n_vertices), asks in zip(instances, queries):
        kernel = kernel_cls(tails, heads, n_vertices)
        for edge_mask, start_mask in asks:
            sink ^= kernel.closure(edge_mask, start_mask)
    return time.perf_counter() - start, sink


def bench_bruteforce_scan(kernel_cls, instances):
    start = time.perf_counter()
    sink = 0
    for tails, heads, n_vertices in instances:
        kernel = kernel_cls(tails, heads, n_vertices)
        target = (1 << n_vertices) - 1
        for mask in range(1 << len(tails)):
            if kernel.closure(mask, 1) == target:
                sink += 1
    return time.perf_counter() - start, sink


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--vertices", type=int, default=6)
    parser.add_argument("--edges", type=int, default=12)
    parser.add_argument("--instances", type=int, default=60)
    parser.add_argument("--queries", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    raw_instances = []
    raw_queries = []
    for _ in range(args.instances):
        tails, heads = random_instance(rng, args.vertices, args.edges)
        raw_instances.append((tails, heads, args.vertices))
        full_v = (1 << args.vertices) - 1
        full_e = (1 << args.edges) - 1
        raw_queries.append(
            [(rng.randrange(full_e + 1), rng.randrange(full_v + 1))
             for _ in range(args.queries)]
        )

    kernels = [("pure", _closure_py.ClosureKernel)]
    if _closure_c is not None:
        kernels.append(("compiled", _closure_c.ClosureKernel))
    else:
        print("compiled kernel not built; benchmarking the pure kernel only")

    results = {}
    print(f"\nraw closure: {args.instances} graphs x {args.queries} queries "
          f"({args.vertices} vertices, {args.edges} edges)")
    checks = set()
    for name, cls in kernels:
        elapsed, sink = bench_raw_closure(cls, raw_instances, raw_queries)
        checks.add(sink)
        results[("raw", name)] = elapsed
        total = args.instances * args.queries
        print(f"  {name:9s} {elapsed:7.3f}s   {total / elapsed / 1e6:6.2f} M closures/s")
    assert len(checks) == 1, "kernels disagree"

    print(f"\nbrute-force scan: {args.instances} graphs x 2^{args.edges} edge subsets")
    checks = set()
    for name, cls in kernels:
        elapsed, sink = bench_bruteforce_scan(cls, raw_instances)
        checks.add(sink)
        results[("scan", name)] = elapsed
        print(f"  {name:9s} {elapsed:7.3f}s")
    assert len(checks) == 1, "kernels disagree"

    if _closure_c is not None:
        for workload in ("raw", "scan"):
            speedup = results[(workload, "pure")] / results[(workload, "compiled")]
            print(f"\n{workload}: compiled is {speedup:.1f}x faster")


if __name__ == "__main__":
    main()
