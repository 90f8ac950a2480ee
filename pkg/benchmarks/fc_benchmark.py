#!/usr/bin/env python3
"""Benchmark the compiled fixpoint kernel against the pure-Python fallback.

Workloads mirror the hot paths: single closures on a generated gadget
formula, the batched clause-derivability check behind equivalence testing,
and the exhaustive all-subsets comparison used by the equivalence oracle.

Usage: python3 benchmarks/fc_benchmark.py [--seed N] [--t N]
"""

import argparse
import time

from hornforge import build_cnf, build_phi_f, refine, solve_exact_cover
from hornforge import _fckernel_py
from hornforge.lcgen import random_instance
from hornforge.reduction import ROLE_V, ReductionParams

try:
    from hornforge import _fckernel

    KERNELS = [("cython", _fckernel.Formula), ("python", _fckernel_py.Formula)]
except ImportError:
    KERNELS = [("python", _fckernel_py.Formula)]


def compile_with(factory, cnf):
    return factory(
        len(cnf.registry),
        [tuple(sorted(c.body)) for c in cnf.clauses],
        [c.head for c in cnf.clauses],
    )


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20240801)
    parser.add_argument("--t", type=int, default=2)
    args = parser.parse_args()

    inst = refine(random_instance(args.seed, r_max=6, s_max=6, lam_max=3, lam_prime_max=3))
    params = ReductionParams.for_instance(inst, t=args.t)
    artifact = build_cnf(inst, params)
    phi = artifact.phi
    cover, _ = solve_exact_cover(inst)
    phi_f = build_phi_f(inst, params, cover)
    print(f"gadget formula: {phi.clause_count} clauses, {phi.literal_count} literals, "
          f"{len(phi.registry)} variables")

    v1 = artifact.varmap.id_of((ROLE_V, 1))
    targets = [(tuple(sorted(c.body)), c.head) for c in phi.clauses]

    results = {}
    for name, factory in KERNELS:
        f_phi = compile_with(factory, phi)
        f_phif = compile_with(factory, phi_f)
        closures = timeit(lambda: [f_phi.closure_list([v1]) for _ in range(200)])
        batch = timeit(lambda: f_phif.derives_all(targets))
        small = factory(
            10,
            [(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 6), (6, 7), (7, 8), (8, 9)],
            [2, 3, 4, 5, 6, 7, 8, 9, 0],
        )
        subsets = timeit(lambda: small.agree_on_all_subsets(small))
        results[name] = (closures, batch, subsets)
        print(f"{name:>7}: 200 closures {closures * 1e3:8.2f} ms | "
              f"equivalence batch {batch * 1e3:8.2f} ms | "
              f"2^10 subset sweep {subsets * 1e3:8.2f} ms")

    if len(results) == 2:
        cy, py = results["cython"], results["python"]
        print("speedup: " + " | ".join(
            f"{label} {p / c:5.1f}x" for label, c, p in
            zip(("closures", "batch", "subsets"), cy, py)))


if __name__ == "__main__":
    main()
