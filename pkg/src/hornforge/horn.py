"""Pure Horn clauses and CNFs with the forward-chaining algorithm suite.

A pure Horn clause is stored in body/head form: a set of variable ids (the
subgoal) implying a single head variable.  All semantic questions about the
function a CNF represents are answered through forward chaining: two CNFs
over the same variables are equivalent exactly when every clause of each is
derivable from the other.

Values are immutable after construction (CNFs are built append-only and the
operations below never mutate their inputs), so they can be shared freely
across threads.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import InputError, ResourceLimitError
from .kernel import Formula


class VarRegistry:
    """Dense name<->id bijection, append-only."""

    def __init__(self, names: Iterable[str] = ()):
        self.names: list[str] = []
        self._index: dict[str, int] = {}
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        """Return the id for ``name``, registering it if new."""
        idx = self._index.get(name)
        if idx is None:
            if not name or any(ch.isspace() for ch in name) or "&" in name or "#" in name:
                raise InputError(f"bad variable name: {name!r}")
            idx = len(self.names)
            self.names.append(name)
            self._index[name] = idx
        return idx

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown variable name: {name!r}") from None

    def name_of(self, idx: int) -> str:
        return self.names[idx]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class PureHornClause:
    """body -> head.  The head never occurs in the body; an empty body is a
    unit clause, representable but rejected by default CNF validation."""

    body: frozenset
    head: int

    def __post_init__(self):
        object.__setattr__(self, "body", frozenset(self.body))
        if self.head in self.body:
            raise InputError("clause head occurs in its own body")

    @property
    def degree(self) -> int:
        return len(self.body) + 1

    def key(self) -> tuple:
        return (tuple(sorted(self.body)), self.head)

    def variables(self) -> frozenset:
        return self.body | {self.head}


@dataclass(frozen=True)
class FCTrace:
    """Result of one forward-chaining run: the closure plus the ordered list
    of (clause index, derived variable) trigger events."""

    closure: frozenset
    triggered: tuple


class PureHornCNF:
    """Ordered, duplicate-free conjunction of pure Horn clauses."""

    def __init__(self, registry: Optional[VarRegistry] = None, allow_unit: bool = False):
        self.registry = registry if registry is not None else VarRegistry()
        self.allow_unit = allow_unit
        self.clauses: list[PureHornClause] = []
        self._keys: set[tuple] = set()
        self._compiled: Optional[Formula] = None

    def add(self, clause: PureHornClause) -> None:
        n = len(self.registry)
        if clause.head >= n or any(v >= n or v < 0 for v in clause.body):
            raise InputError("clause uses an unregistered variable id")
        if not clause.body and not self.allow_unit:
            raise InputError("unit clause (empty body) rejected; pass allow_unit=True to permit")
        key = clause.key()
        if key in self._keys:
            raise InputError(f"duplicate clause: {self.format_clause(clause)}")
        self._keys.add(key)
        self.clauses.append(clause)
        self._compiled = None

    def add_named(self, body_names: Iterable[str], head_name: str) -> None:
        body = frozenset(self.registry.intern(b) for b in body_names)
        self.add(PureHornClause(body, self.registry.intern(head_name)))

    def __contains__(self, clause: PureHornClause) -> bool:
        return clause.key() in self._keys

    def __len__(self) -> int:
        return len(self.clauses)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    @property
    def literal_count(self) -> int:
        return sum(c.degree for c in self.clauses)

    def used_variable_ids(self) -> frozenset:
        out: set = set()
        for c in self.clauses:
            out |= c.body
            out.add(c.head)
        return frozenset(out)

    @property
    def used_variable_count(self) -> int:
        return len(self.used_variable_ids())

    def clause_keys(self) -> list[tuple]:
        return [c.key() for c in self.clauses]

    def compiled(self) -> Formula:
        if self._compiled is None:
            self._compiled = Formula(
                len(self.registry),
                [tuple(sorted(c.body)) for c in self.clauses],
                [c.head for c in self.clauses],
            )
        return self._compiled

    def replace_clauses(self, clauses: Iterable[PureHornClause]) -> "PureHornCNF":
        """New CNF over the same registry with the given clause sequence."""
        out = PureHornCNF(self.registry, allow_unit=self.allow_unit)
        for c in clauses:
            out.add(c)
        return out

    def format_clause(self, clause: PureHornClause) -> str:
        names = self.registry.names
        body = " & ".join(names[v] for v in sorted(clause.body))
        return f"{body} -> {names[clause.head]}" if body else f"-> {names[clause.head]}"


def _check_query(cnf: PureHornCNF, query: Iterable[int]) -> list[int]:
    n = len(cnf.registry)
    ids = sorted(set(query))
    for v in ids:
        if not (0 <= v < n):
            raise InputError(f"query variable id {v} not registered")
    return ids


def forward_chain(cnf: PureHornCNF, query: Iterable[int]) -> FCTrace:
    """Least fixpoint of ``query`` under the clause set, with trigger trace.

    The queue is seeded with the query in ascending id order and clauses fire
    in stored order as their bodies complete, so the trace is reproducible.
    The closure itself is order-independent.
    """
    ids = _check_query(cnf, query)
    inset = bytearray(len(cnf.registry))
    queue: list[int] = []
    for v in ids:
        inset[v] = 1
        queue.append(v)
    counts = [len(c.body) for c in cnf.clauses]
    occurs: dict[int, list[int]] = {}
    for ci, c in enumerate(cnf.clauses):
        for v in c.body:
            occurs.setdefault(v, []).append(ci)
    triggered: list[tuple] = []
    for ci, c in enumerate(cnf.clauses):
        if counts[ci] == 0 and not inset[c.head]:
            inset[c.head] = 1
            queue.append(c.head)
            triggered.append((ci, c.head))
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for ci in occurs.get(v, ()):
            counts[ci] -= 1
            if counts[ci] == 0:
                h = cnf.clauses[ci].head
                if not inset[h]:
                    inset[h] = 1
                    queue.append(h)
                    triggered.append((ci, h))
    return FCTrace(closure=frozenset(queue), triggered=tuple(triggered))


def closure_of(cnf: PureHornCNF, query: Iterable[int]) -> frozenset:
    """Closure set only; goes through the fast kernel."""
    ids = _check_query(cnf, query)
    return frozenset(cnf.compiled().closure_list(ids))


def is_implicate(cnf: PureHornCNF, clause: PureHornClause) -> bool:
    """A pure Horn clause is an implicate iff its head chains from its body."""
    n = len(cnf.registry)
    if clause.head >= n or any(v >= n for v in clause.body):
        raise InputError("clause uses an unregistered variable id")
    return cnf.compiled().derives(sorted(clause.body), clause.head)


def _remap_onto(phi: PureHornCNF, psi: PureHornCNF) -> list[tuple]:
    """psi's clauses as (body, head) id pairs in phi's registry."""
    if set(phi.registry.names) != set(psi.registry.names):
        raise InputError("variable sets differ; formulas are not comparable")
    remap = [phi.registry.id_of(name) for name in psi.registry.names]
    return [
        (sorted(remap[v] for v in c.body), remap[c.head]) for c in psi.clauses
    ]


def equivalent(phi: PureHornCNF, psi: PureHornCNF) -> bool:
    """Polynomial equivalence test: mutual clause derivability."""
    psi_in_phi = _remap_onto(phi, psi)
    phi_pairs = [(sorted(c.body), c.head) for c in phi.clauses]
    if sorted(map(tuple_key, psi_in_phi)) == sorted(map(tuple_key, phi_pairs)):
        return True
    return phi.compiled().derives_all(psi_in_phi) and Formula(
        len(phi.registry),
        [b for b, _ in psi_in_phi],
        [h for _, h in psi_in_phi],
    ).derives_all(phi_pairs)


def tuple_key(pair) -> tuple:
    body, head = pair
    return (tuple(body), head)


def equivalent_exhaustive(phi: PureHornCNF, psi: PureHornCNF, cutoff: int = 12) -> bool:
    """Compare closures over every variable subset (the definitional test).

    Exponential; guarded by ``cutoff``.  Used as the independent oracle for
    :func:`equivalent`.
    """
    psi_in_phi = _remap_onto(phi, psi)
    n = len(phi.registry)
    if n > cutoff:
        raise ResourceLimitError(
            f"{n} variables exceeds the exhaustive-equivalence cutoff {cutoff}"
        )
    other = Formula(n, [b for b, _ in psi_in_phi], [h for _, h in psi_in_phi])
    return phi.compiled().agree_on_all_subsets(other) == -1


def resolvent(c1: PureHornClause, c2: PureHornClause) -> Optional[PureHornClause]:
    """Resolvent of two pure Horn clauses, or None when not resolvable.

    Resolvable means c1's head occurs in c2's body and the pair has no other
    complemented variable (c2's head in c1's body would be a second pair).
    The result is body = c1.body | (c2.body - {c1.head}), head = c2.head.
    """
    if c1.head not in c2.body:
        return None
    if c2.head in c1.body:
        return None
    body = c1.body | (c2.body - {c1.head})
    if c2.head in body:
        return None
    return PureHornClause(body, c2.head)


def resolution_closure(clauses: Iterable[PureHornClause], cap: int = 100_000) -> list[PureHornClause]:
    """Smallest superset closed under pairwise resolution, in discovery order."""
    out: list[PureHornClause] = []
    keys: set[tuple] = set()
    for c in clauses:
        if c.key() not in keys:
            keys.add(c.key())
            out.append(c)
    i = 0
    while i < len(out):
        ci = out[i]
        for j in range(i + 1):
            for a, b in ((ci, out[j]), (out[j], ci)):
                r = resolvent(a, b)
                if r is not None and r.key() not in keys:
                    keys.add(r.key())
                    out.append(r)
                    if len(out) > cap:
                        raise ResourceLimitError(
                            f"resolution closure exceeded cap {cap}",
                            stats={"clauses": len(out)},
                        )
        i += 1
    return out


def prime_reduce_clause(cnf: PureHornCNF, clause: PureHornClause) -> PureHornClause:
    """Shrink an implicate to a prime implicate by greedy literal deletion.

    Scans the body in ascending id order and drops a literal whenever the
    shrunk clause remains an implicate; one pass suffices because dropping
    literals only shrinks forward-chaining closures.
    """
    if not is_implicate(cnf, clause):
        raise InputError("clause is not an implicate of the CNF")
    compiled = cnf.compiled()
    current = set(clause.body)
    for v in sorted(clause.body):
        trial = current - {v}
        if compiled.derives(sorted(trial), clause.head):
            current = trial
    return PureHornClause(frozenset(current), clause.head)


def irredundant_reduce(cnf: PureHornCNF) -> PureHornCNF:
    """Drop clauses derivable from the rest, scanning in stored order."""
    active = list(cnf.clauses)
    i = 0
    while i < len(active):
        c = active[i]
        rest = active[:i] + active[i + 1 :]
        f = Formula(len(cnf.registry), [tuple(sorted(x.body)) for x in rest], [x.head for x in rest])
        if f.derives(sorted(c.body), c.head):
            active.pop(i)
        else:
            i += 1
    return cnf.replace_clauses(active)


def minimize_heuristic(cnf: PureHornCNF) -> PureHornCNF:
    """Prime reduction of every clause followed by irredundancy; the
    polynomial-time pipeline used as warm start and comparison baseline."""
    reduced = []
    seen: set[tuple] = set()
    for c in cnf.clauses:
        p = prime_reduce_clause(cnf, c)
        if p.key() not in seen:
            seen.add(p.key())
            reduced.append(p)
    return irredundant_reduce(cnf.replace_clauses(reduced))


def enumerate_prime_implicates(cnf: PureHornCNF, max_vars: int = 14) -> list[PureHornClause]:
    """All prime implicates over the registered variables.

    Candidates are scanned per head by increasing body size, so the first
    implicate found on any chain of subsets is minimal and larger supersets
    are skipped outright.  Exponential; guarded by ``max_vars``.
    Implicates over variables outside the registry are never represented.
    """
    n = len(cnf.registry)
    if n > max_vars:
        raise ResourceLimitError(f"{n} variables exceeds max_vars={max_vars}")
    compiled = cnf.compiled()
    primes: list[PureHornClause] = []
    for head in range(n):
        others = [v for v in range(n) if v != head]
        found_masks: list[int] = []
        for size in range(0, n):
            for body in combinations(others, size):
                bmask = 0
                for v in body:
                    bmask |= 1 << v
                if any(fm & bmask == fm for fm in found_masks):
                    continue
                if compiled.derives(body, head):
                    found_masks.append(bmask)
                    primes.append(PureHornClause(frozenset(body), head))
    primes.sort(key=lambda c: (c.head, tuple(sorted(c.body))))
    return primes


def is_closed_under_fc(cnf: PureHornCNF, w: Iterable[int]) -> bool:
    wset = frozenset(w)
    return closure_of(cnf, wset) == wset


def exclusive_component(cnf: PureHornCNF, w: Iterable[int]) -> PureHornCNF:
    """Sub-CNF of clauses whose variables all lie in the FC-closed set ``w``."""
    wset = frozenset(w)
    if not is_closed_under_fc(cnf, wset):
        raise InputError("variable set is not closed under forward chaining")
    return cnf.replace_clauses(c for c in cnf.clauses if c.variables() <= wset)


def exclusivity_violations(
    cnf: PureHornCNF, w: Iterable[int], cap: int = 100_000, max_vars: int = 10
) -> list[tuple]:
    """Brute-force check of the exclusivity definition on small functions.

    Resolves every pair in the resolution closure of the prime implicates; a
    violation is a resolvent inside the component produced by a parent
    outside it.  Returns the violating triples (empty list = exclusive).
    """
    wset = frozenset(w)
    primes = enumerate_prime_implicates(cnf, max_vars=max_vars)
    closure = resolution_closure(primes, cap=cap)
    bad = []
    for a in closure:
        for b in closure:
            r = resolvent(a, b)
            if r is None or not r.variables() <= wset:
                continue
            if not a.variables() <= wset or not b.variables() <= wset:
                bad.append((a, b, r))
    return bad
