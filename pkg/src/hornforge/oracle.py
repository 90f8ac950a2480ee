"""Exact clause- and literal-minimum representations of tiny pure Horn
functions by branch-and-bound over the prime implicates.

Ground set: searching over prime implicates loses nothing, because prime
reduction never increases the clause or literal count of a representation,
so some minimum representation consists of prime implicates only.

A candidate subset S represents the input function iff every input clause
is forward-chaining-derivable from S (S consists of implicates, so the other
direction is automatic).  Every variable that is derivable from the other
variables must head at least one clause in any representation; those heads
partition the ground set, which gives both the branching structure (pick a
non-empty subset per required head) and the cardinality lower bound.

Determinism: heads are processed smallest-pool-first and subsets per head in
(size, index) order, so reported witnesses and node counts are reproducible.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import ResourceLimitError
from .horn import (
    Formula,
    PureHornCNF,
    enumerate_prime_implicates,
    minimize_heuristic,
)


@dataclass(frozen=True)
class OracleLimits:
    max_vars: int = 12
    max_pi: int = 5000
    max_nodes: int = 2_000_000


@dataclass
class MinimizationResult:
    tau: int
    lam: int
    witness_tau: PureHornCNF
    witness_lambda: PureHornCNF
    nodes_explored: int
    prime_implicate_count: int


def tau_lower_bound_heads(cnf: PureHornCNF) -> int:
    """Number of variables derivable from all the others; each must appear
    as a head in every representation, so this lower-bounds the clause
    count."""
    compiled = cnf.compiled()
    n = len(cnf.registry)
    count = 0
    for z in range(n):
        rest = [v for v in range(n) if v != z]
        if compiled.derives(rest, z):
            count += 1
    return count


class _Search:
    """Branch-and-bound over the prime implicates, grouped by head.

    Preprocessing commits the essential primes: a clause whose removal from
    the full ground set already breaks feasibility must appear in every
    representation.  On the gadget functions this pins the whole core
    skeleton, leaving only the label-side choices to the search.
    """

    def __init__(self, cnf: PureHornCNF, limits: OracleLimits):
        self.cnf = cnf
        self.limits = limits
        self.n = len(cnf.registry)
        self.targets = [(tuple(sorted(c.body)), c.head) for c in cnf.clauses]
        self.primes = enumerate_prime_implicates(cnf, max_vars=limits.max_vars)
        if len(self.primes) > limits.max_pi:
            raise ResourceLimitError(
                f"{len(self.primes)} prime implicates exceeds max_pi={limits.max_pi}",
                stats={"prime_implicates": len(self.primes)},
            )
        self.nodes = 0
        self.degs = [p.degree for p in self.primes]

        everything = tuple(range(len(self.primes)))
        self.essential = tuple(
            i for i in everything
            if not self.feasible(everything[:i] + everything[i + 1:])
        )
        essential_set = set(self.essential)

        pools: dict[int, list[int]] = {}
        for idx, p in enumerate(self.primes):
            pools.setdefault(p.head, []).append(idx)

        # support restriction: a clause that fires target (B -> z) in any
        # subset has its body inside the full-ground-set closure of B, so per
        # head the chosen subset must hit every target's candidate set
        full = Formula(self.n, [tuple(sorted(p.body)) for p in self.primes],
                       [p.head for p in self.primes])
        closure_cache: dict[tuple, frozenset] = {}
        requirements: dict[int, list] = {h: [] for h in pools}
        for body, head in self.targets:
            if body not in closure_cache:
                closure_cache[body] = frozenset(full.closure_list(body))
            reach = closure_cache[body]
            cands = frozenset(
                i for i in pools[head] if self.primes[i].body <= reach
            )
            requirements[head].append(cands)

        free = {
            h: [i for i in pool if i not in essential_set] for h, pool in pools.items()
        }
        # drop requirements already met by an essential clause
        open_reqs = {
            h: sorted(
                {req for req in requirements[h] if not req & essential_set},
                key=sorted,
            )
            for h in pools
        }
        self.head_order = sorted(
            (h for h in pools if free[h]),
            key=lambda h: (len(free[h]), h),
        )
        self.pools = [sorted(free[h], key=lambda i: (self.degs[i], i))
                      for h in self.head_order]
        self.reqs = [
            [req & frozenset(pool) for req in open_reqs[h]]
            for h, pool in zip(self.head_order, self.pools)
        ]
        self.must_pick = []
        self.min_cost = []
        for pool, reqs in zip(self.pools, self.reqs):
            size, cost = self._min_hitting(pool, reqs)
            self.must_pick.append(size)
            self.min_cost.append(cost)

        self.suffix_union: list[tuple] = []
        acc: tuple = ()
        for pool in reversed(self.pools):
            acc = tuple(pool) + acc
            self.suffix_union.append(acc)
        self.suffix_union.reverse()
        self.suffix_union.append(())

    def _min_hitting(self, pool, reqs):
        """(min subset size, min subset cost) over subsets of ``pool``
        hitting every requirement set; (0, 0) when nothing is required."""
        if not reqs:
            return 0, 0
        best = {"size": len(pool), "cost": sum(self.degs[i] for i in pool)}

        def rec(ri, chosen_size, chosen_cost, hit):
            if chosen_size >= best["size"] and chosen_cost >= best["cost"]:
                return
            if ri == len(reqs):
                best["size"] = min(best["size"], chosen_size)
                best["cost"] = min(best["cost"], chosen_cost)
                return
            req = reqs[ri]
            if req & hit:
                rec(ri + 1, chosen_size, chosen_cost, hit)
                return
            for i in sorted(req, key=lambda i: (self.degs[i], i)):
                rec(ri + 1, chosen_size + 1, chosen_cost + self.degs[i], hit | {i})

        rec(0, 0, 0, frozenset())
        return best["size"], best["cost"]

    @staticmethod
    def _hits_all(reqs, combo_set) -> bool:
        return all(req & combo_set for req in reqs)

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            raise ResourceLimitError(
                f"search exceeded max_nodes={self.limits.max_nodes}",
                stats={"nodes_explored": self.nodes},
            )

    def feasible(self, chosen) -> bool:
        f = Formula(
            self.n,
            [tuple(sorted(self.primes[i].body)) for i in chosen],
            [self.primes[i].head for i in chosen],
        )
        return f.derives_all(self.targets)

    def clause_lower_bound(self) -> int:
        return len(self.essential) + sum(self.must_pick)

    # -- clause count -----------------------------------------------------
    def find_of_size(self, k: int) -> Optional[tuple]:
        """First subset of exactly <= k primes representing the function,
        searched in deterministic order; None when k is too small."""
        must_suffix = [0] * (len(self.pools) + 1)
        for idx in range(len(self.pools) - 1, -1, -1):
            must_suffix[idx] = must_suffix[idx + 1] + self.must_pick[idx]

        def rec(idx, chosen):
            self._tick()
            if len(chosen) + must_suffix[idx] > k:
                return None
            if idx == len(self.pools):
                return chosen if self.feasible(chosen) else None
            if not self.feasible(chosen + self.suffix_union[idx]):
                return None
            pool = self.pools[idx]
            reqs = self.reqs[idx]
            max_take = k - len(chosen) - must_suffix[idx + 1]
            for size in range(self.must_pick[idx], min(len(pool), max_take) + 1):
                for combo in combinations(pool, size):
                    if not self._hits_all(reqs, frozenset(combo)):
                        continue
                    hit = rec(idx + 1, chosen + combo)
                    if hit is not None:
                        return hit
            return None

        return rec(0, self.essential)

    # -- literal count ----------------------------------------------------
    def min_literals(self, start_cost: int, start_witness: tuple):
        degs = self.degs
        npools = len(self.pools)
        cheapest_prefix = []
        for pool in self.pools:
            acc = [0]
            for i in pool:
                acc.append(acc[-1] + degs[i])
            cheapest_prefix.append(acc)
        min_cost_suffix = [0] * (npools + 1)
        for idx in range(npools - 1, -1, -1):
            min_cost_suffix[idx] = min_cost_suffix[idx + 1] + self.min_cost[idx]

        best = {"cost": start_cost, "witness": start_witness}
        base_cost = sum(degs[i] for i in self.essential)

        def rec(idx, chosen, cost):
            self._tick()
            if cost + min_cost_suffix[idx] >= best["cost"]:
                return
            if idx == npools:
                if self.feasible(chosen):
                    best["cost"] = cost
                    best["witness"] = chosen
                return
            if not self.feasible(chosen + self.suffix_union[idx]):
                return
            pool = self.pools[idx]
            reqs = self.reqs[idx]
            prefix = cheapest_prefix[idx]
            for size in range(self.must_pick[idx], len(pool) + 1):
                # spendable here while leaving the bare minimum for the rest
                budget = best["cost"] - 1 - cost - min_cost_suffix[idx + 1]
                if prefix[size] > budget:
                    break  # even the cheapest subset of this size is too dear
                if size == 0:
                    rec(idx + 1, chosen, cost)
                    continue
                for combo in combinations(pool, size):
                    add = sum(degs[i] for i in combo)
                    if add > budget:
                        continue
                    if not self._hits_all(reqs, frozenset(combo)):
                        continue
                    rec(idx + 1, chosen + combo, cost + add)

        rec(0, self.essential, base_cost)
        return best["cost"], best["witness"]


def minimize_exact(cnf: PureHornCNF, limits: Optional[OracleLimits] = None) -> MinimizationResult:
    limits = limits or OracleLimits()
    if len(cnf.registry) > limits.max_vars:
        raise ResourceLimitError(
            f"{len(cnf.registry)} variables exceeds max_vars={limits.max_vars}"
        )
    search = _Search(cnf, limits)
    prime_index = {p.key(): i for i, p in enumerate(search.primes)}

    warm = minimize_heuristic(cnf)
    warm_idx = tuple(sorted(prime_index[c.key()] for c in warm.clauses))

    lower = search.clause_lower_bound()
    tau_witness = warm_idx
    tau = len(warm_idx)
    for k in range(lower, len(warm_idx)):
        hit = search.find_of_size(k)
        if hit is not None:
            tau = k
            tau_witness = tuple(sorted(hit))
            break

    tau_cost = sum(search.primes[i].degree for i in tau_witness)
    warm_cost = sum(search.primes[i].degree for i in warm_idx)
    if warm_cost < tau_cost or (warm_cost == tau_cost and warm_idx < tau_witness):
        start_cost, start_witness = warm_cost, warm_idx
    else:
        start_cost, start_witness = tau_cost, tau_witness
    lam_cost, lam_witness = search.min_literals(start_cost + 1, start_witness)
    # min_literals was seeded with cost+1 so an equal-cost incumbent is kept;
    # the returned cost is the true optimum
    lam_cost = sum(search.primes[i].degree for i in lam_witness)

    def to_cnf(indices) -> PureHornCNF:
        ordered = sorted(indices, key=lambda i: (search.primes[i].head, tuple(sorted(search.primes[i].body))))
        out = PureHornCNF(cnf.registry, allow_unit=True)
        for i in ordered:
            out.add(search.primes[i])
        return out

    return MinimizationResult(
        tau=tau,
        lam=lam_cost,
        witness_tau=to_cnf(tau_witness),
        witness_lambda=to_cnf(sorted(lam_witness)),
        nodes_explored=search.nodes,
        prime_implicate_count=len(search.primes),
    )
