"""Instance generators: the claw toy example, the SAT-derived family, and
seeded random instances (general and bi-regular).

Every generator is a pure function of its arguments; random variants draw
exclusively from the splittable PRNG so outputs are reproducible anywhere.
"""

from itertools import product

from .errors import InputError
from .labelcover import LCInstance
from .rng import SplitMix64


def claw_instance() -> LCInstance:
    """Three x-vertices against one y-vertex, two labels per side.

    x1 admits l1 with either y-label, x2 only l1 with p2, x3 admits l2 with
    either; the optimal total-cover has cost 1 (all three via p2).
    """
    constraints = {
        ("x1", "y1"): {("l1", "p1"), ("l1", "p2")},
        ("x2", "y1"): {("l1", "p2")},
        ("x3", "y1"): {("l2", "p1"), ("l2", "p2")},
    }
    return LCInstance(
        x_names=("x1", "x2", "x3"),
        y_names=("y1",),
        x_labels=("l1", "l2"),
        y_labels=("p1", "p2"),
        edges=tuple(constraints),
        constraints=constraints,
    )


def sat_to_lc(clauses: list[list[int]]) -> LCInstance:
    """Uniform-width CNF satisfiability as a label-cover instance.

    One x-vertex per variable occurrence, one y-vertex per clause; a clause
    vertex is adjacent to every occurrence of every variable it depends on.
    X labels are the truth values; Y labels are the satisfying assignment
    patterns of width k (named b<bits> to keep the pools disjoint).  The
    instance has a cost-1 total-cover iff the formula is satisfiable.
    """
    if not clauses:
        raise InputError("empty formula")
    widths = {len(set(abs(l) for l in cl)) for cl in clauses}
    if len(widths) != 1 or {len(cl) for cl in clauses} != widths:
        raise InputError("formula must be k-uniform with distinct variables per clause")
    (k,) = widths
    if k < 1:
        raise InputError("clauses must be non-empty")
    for cl in clauses:
        if any(l == 0 for l in cl):
            raise InputError("literal 0 is not allowed")

    y_names = tuple(f"c{j}" for j in range(1, len(clauses) + 1))
    occ_count: dict[int, int] = {}
    occ_names: list[str] = []
    occ_var: dict[str, int] = {}
    clause_vars: list[list[int]] = []
    for cl in clauses:
        cl_vars = []
        for lit in cl:
            u = abs(lit)
            occ_count[u] = occ_count.get(u, 0) + 1
            name = f"u{u}o{occ_count[u]}"
            occ_names.append(name)
            occ_var[name] = u
            cl_vars.append(u)
        clause_vars.append(cl_vars)

    y_labels = tuple("b" + "".join(str(b) for b in bits) for bits in product((0, 1), repeat=k))
    edges = []
    constraints = {}
    for j, cl in enumerate(clauses):
        y = y_names[j]
        cl_var_list = clause_vars[j]
        sat_patterns = [
            bits
            for bits in product((0, 1), repeat=k)
            if any((bits[i] == 1) == (lit > 0) for i, lit in enumerate(cl))
        ]
        for x in occ_names:
            u = occ_var[x]
            if u not in cl_var_list:
                continue
            i = cl_var_list.index(u)
            pairs = {
                (str(bits[i]), "b" + "".join(str(b) for b in bits))
                for bits in sat_patterns
            }
            edges.append((x, y))
            constraints[(x, y)] = pairs
    return LCInstance(
        x_names=tuple(occ_names),
        y_names=y_names,
        x_labels=("0", "1"),
        y_labels=y_labels,
        edges=edges,
        constraints=constraints,
    )


def _patch_feasible(rng, edges, constraints, y_names, x_pool, y_pool):
    """Force feasibility: per y, one label supported on all incident edges."""
    for y in y_names:
        incident = [e for e in edges if e[1] == y]
        lp = y_pool[rng.below(len(y_pool))]
        for e in incident:
            if not any(b == lp for _, b in constraints[e]):
                constraints[e] = constraints[e] | {(x_pool[rng.below(len(x_pool))], lp)}


def random_instance(seed: int, r_max: int = 6, s_max: int = 6,
                    lam_max: int = 3, lam_prime_max: int = 3) -> LCInstance:
    """Seeded random feasible instance within the given size caps."""
    rng = SplitMix64(seed)
    r = 1 + rng.below(r_max)
    s = 1 + rng.below(s_max)
    lam = 1 + rng.below(lam_max)
    lam_p = 1 + rng.below(lam_prime_max)
    x_names = tuple(f"x{i}" for i in range(1, r + 1))
    y_names = tuple(f"y{j}" for j in range(1, s + 1))
    x_pool = tuple(f"l{i}" for i in range(1, lam + 1))
    y_pool = tuple(f"p{i}" for i in range(1, lam_p + 1))

    edges = set()
    for x in x_names:
        edges.add((x, y_names[rng.below(s)]))
    for y in y_names:
        if not any(e[1] == y for e in edges):
            edges.add((x_names[rng.below(r)], y))
    for x in x_names:
        for y in y_names:
            if (x, y) not in edges and rng.below(100) < 30:
                edges.add((x, y))

    constraints = {}
    for e in sorted(edges):
        pairs = {
            (a, b)
            for a in x_pool
            for b in y_pool
            if rng.below(100) < 40
        }
        if not pairs:
            pairs = {(x_pool[rng.below(lam)], y_pool[rng.below(lam_p)])}
        constraints[e] = frozenset(pairs)
    _patch_feasible(rng, sorted(edges), constraints, y_names, x_pool, y_pool)
    return LCInstance(x_names, y_names, x_pool, y_pool, edges, constraints)


# (r, s, x-degree, y-degree) combinations with r*dx = s*dy <= 12 and simple
# circulant wiring possible (dx <= s, dy <= r)
_BIREGULAR_SHAPES = tuple(
    (r, s, dx, (r * dx) // s)
    for r in range(1, 7)
    for s in range(1, 7)
    for dx in range(1, 5)
    if r * dx <= 12 and (r * dx) % s == 0 and dx <= s and (r * dx) // s <= r and (r * dx) // s >= 1
)


def random_biregular_instance(seed: int, lam_max: int = 3, lam_prime_max: int = 3) -> LCInstance:
    """Seeded random feasible bi-regular instance with at most 12 edges."""
    rng = SplitMix64(seed)
    r, s, dx, dy = _BIREGULAR_SHAPES[rng.below(len(_BIREGULAR_SHAPES))]
    lam = 1 + rng.below(lam_max)
    lam_p = 1 + rng.below(lam_prime_max)
    x_names = tuple(f"x{i}" for i in range(1, r + 1))
    y_names = tuple(f"y{j}" for j in range(1, s + 1))
    x_pool = tuple(f"l{i}" for i in range(1, lam + 1))
    y_pool = tuple(f"p{i}" for i in range(1, lam_p + 1))

    # configuration-model shuffle with a circulant fallback; the circulant
    # (x_i adjacent to y_{i*dx+k mod s}) is always simple when dx <= s
    edges = None
    stubs_y = [y_names[j] for j in range(s) for _ in range(dy)]
    for _ in range(50):
        trial = stubs_y[:]
        rng.shuffle(trial)
        cand = set()
        pos = 0
        ok = True
        for i in range(r):
            for _ in range(dx):
                e = (x_names[i], trial[pos])
                pos += 1
                if e in cand:
                    ok = False
                    break
                cand.add(e)
            if not ok:
                break
        if ok:
            edges = cand
            break
    if edges is None:
        edges = {
            (x_names[i], y_names[(i * dx + k) % s]) for i in range(r) for k in range(dx)
        }

    constraints = {}
    for e in sorted(edges):
        pairs = {
            (a, b) for a in x_pool for b in y_pool if rng.below(100) < 40
        }
        if not pairs:
            pairs = {(x_pool[rng.below(lam)], y_pool[rng.below(lam_p)])}
        constraints[e] = frozenset(pairs)
    _patch_feasible(rng, sorted(edges), constraints, y_names, x_pool, y_pool)
    return LCInstance(x_names, y_names, x_pool, y_pool, edges, constraints)
