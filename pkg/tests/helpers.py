"""Independent test oracles.

Nothing here goes through the package's kernel or forward-chaining code:
implicates are decided by truth tables, closures by a naive scan-until-fixed
loop over frozensets, resolution by a local reimplementation on (body, head)
pairs.  These are the reference implementations the production paths are
checked against.
"""

from itertools import combinations

from hornforge.horn import PureHornClause, PureHornCNF
from hornforge.rng import SplitMix64


def cnf_of(spec: str, extra_vars: str = "") -> PureHornCNF:
    """Build a CNF from 'a&b->c; d->e' style text."""
    cnf = PureHornCNF()
    for name in extra_vars.split():
        cnf.registry.intern(name)
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        lhs, _, rhs = part.partition("->")
        body = [tok.strip() for tok in lhs.split("&") if tok.strip()]
        cnf.add_named(body, rhs.strip())
    return cnf


def clause_of(cnf: PureHornCNF, spec: str) -> PureHornClause:
    lhs, _, rhs = spec.partition("->")
    body = frozenset(cnf.registry.intern(tok.strip()) for tok in lhs.split("&") if tok.strip())
    return PureHornClause(body, cnf.registry.intern(rhs.strip()))


def _clause_pairs(cnf: PureHornCNF):
    return [(frozenset(c.body), c.head) for c in cnf.clauses]


def tt_satisfies(pairs, assignment: frozenset) -> bool:
    """Evaluate a pure Horn CNF on a set-of-true-variables assignment."""
    return all(not body <= assignment or head in assignment for body, head in pairs)


def tt_is_implicate(cnf: PureHornCNF, body, head) -> bool:
    """Truth-table implicate test: every satisfying assignment of the CNF
    satisfies the clause."""
    n = len(cnf.registry)
    pairs = _clause_pairs(cnf)
    body = frozenset(body)
    for mask in range(1 << n):
        assignment = frozenset(v for v in range(n) if (mask >> v) & 1)
        if not tt_satisfies(pairs, assignment):
            continue
        if body <= assignment and head not in assignment:
            return False
    return True


def naive_closure(cnf: PureHornCNF, query) -> frozenset:
    """Scan-until-fixed closure, no counters, no queues."""
    pairs = _clause_pairs(cnf)
    out = set(query)
    changed = True
    while changed:
        changed = False
        for body, head in pairs:
            if head not in out and body <= out:
                out.add(head)
                changed = True
    return frozenset(out)


def naive_equivalent(phi: PureHornCNF, psi: PureHornCNF) -> bool:
    """Definitional equivalence: equal closures on every variable subset.
    Assumes both CNFs index the same variables identically."""
    n = len(phi.registry)
    assert phi.registry.names == psi.registry.names
    for mask in range(1 << n):
        query = [v for v in range(n) if (mask >> v) & 1]
        if naive_closure(phi, query) != naive_closure(psi, query):
            return False
    return True


def brute_resolution_fixpoint(clauses) -> set:
    """Pairwise-resolve to a fixpoint on (frozen body, head) pairs."""

    def res(a, b):
        (body1, head1), (body2, head2) = a, b
        if head1 not in body2 or head2 in body1:
            return None
        body = body1 | (body2 - {head1})
        if head2 in body:
            return None
        return (frozenset(body), head2)

    out = {(frozenset(c.body), c.head) for c in clauses}
    while True:
        new = set()
        for a in out:
            for b in out:
                r = res(a, b)
                if r is not None and r not in out:
                    new.add(r)
        if not new:
            return out
        out |= new


def brute_prime_implicates(cnf: PureHornCNF) -> set:
    """All prime implicates by truth table plus explicit minimality check."""
    n = len(cnf.registry)
    implicates = set()
    for head in range(n):
        others = [v for v in range(n) if v != head]
        for size in range(0, n):
            for body in combinations(others, size):
                if tt_is_implicate(cnf, body, head):
                    implicates.add((frozenset(body), head))
    primes = set()
    for body, head in implicates:
        if not any(
            b < body and h == head for b, h in implicates
        ):
            primes.add((body, head))
    return primes


def exhaustive_min_clause_count(cnf: PureHornCNF) -> int:
    """Meta-oracle: smallest number of prime implicates representing the
    function, by unpruned enumeration of subsets.  Tiny inputs only."""
    primes = sorted(brute_prime_implicates(cnf), key=lambda p: (p[1], tuple(sorted(p[0]))))
    targets = _clause_pairs(cnf)

    def feasible(subset):
        sub = PureHornCNF(cnf.registry, allow_unit=True)
        for body, head in subset:
            sub.add(PureHornClause(body, head))
        return all(head in naive_closure(sub, body) for body, head in targets)

    for k in range(0, len(primes) + 1):
        for combo in combinations(primes, k):
            if feasible(combo):
                return k
    raise AssertionError("prime implicates cannot represent the input")


def random_small_cnf(seed: int, max_vars: int = 8, max_clauses: int = 10) -> PureHornCNF:
    """Seeded random pure Horn CNF for property tests."""
    rng = SplitMix64(seed)
    n = 2 + rng.below(max_vars - 1)
    cnf = PureHornCNF()
    for v in range(n):
        cnf.registry.intern(f"w{v}")
    n_clauses = 1 + rng.below(max_clauses)
    for _ in range(n_clauses):
        head = rng.below(n)
        others = [v for v in range(n) if v != head]
        size = 1 + rng.below(min(3, len(others)))
        rng.shuffle(others)
        body = frozenset(others[:size])
        clause = PureHornClause(body, head)
        if clause not in cnf:
            cnf.add(clause)
    return cnf
