"""Cubified variant of the canonical construction: every clause has degree
two or three.

Long subgoals are replaced with two local gadgets:

* the per-edge neighborhood clauses become linked lists over fresh nodes
  e[beta,x,y,l',i] (the classic SAT-to-3-SAT split), keyed to a fixed
  neighbor order;
* the one-clause-per-label family with the huge shared subgoal becomes, per
  amplification index i, a complete binary tree over node ids [2m-1] stored
  heap-style (children 2k, 2k+1 -> parent k) whose leaves alias the per-edge
  variables, plus a chain e[1,a] & e[1,a+1] -> u(l_a) pairing consecutive
  tree roots with the labels in a fixed renaming order.

The chain needs exactly #labels + 1 trees, which is why this construction
pins the amplification d to its default; there is no override here.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .horn import PureHornClause, PureHornCNF, VarRegistry
from .labelcover import LCInstance
from .reduction import (
    ROLE_EDGE,
    ROLE_EDGE_LABEL,
    ROLE_TREE,
    ROLE_U,
    ROLE_V,
    GadgetVarMap,
    ReductionArtifact,
    ReductionParams,
    ROLE_CHAIN,
    _check_reduction_input,
    default_d,
    label_chain,
)


@dataclass(frozen=True)
class EdgeIndexing:
    """Heap-style node ids: internal nodes [m-1], leaves m..2m-1 aliasing
    the edges in stored order (leaf k <-> edge k-m+1)."""

    order: tuple

    @property
    def m(self) -> int:
        return len(self.order)

    def leaf_edge(self, k: int):
        if not self.m <= k <= 2 * self.m - 1:
            raise InputError(f"node {k} is not a leaf for m={self.m}")
        return self.order[k - self.m]

    def is_leaf(self, k: int) -> bool:
        return k >= self.m


def build_3cnf(inst: LCInstance, t: int = 1) -> ReductionArtifact:
    _check_reduction_input(inst)
    d = default_d(inst)
    params = ReductionParams(d=d, t=t, d_overridden=False)
    labels = label_chain(inst)
    if len(labels) != d - 1:
        raise InputError("label chain length must equal d-1")  # unreachable by construction
    indexing = EdgeIndexing(order=inst.edges)
    m = inst.m

    registry = VarRegistry()
    varmap = GadgetVarMap(registry)
    for lbl in labels:
        varmap.register((ROLE_U, lbl))
    for (x, y) in inst.edges:
        for i in range(1, d + 1):
            varmap.register((ROLE_EDGE, x, y, i))
    for (x, y) in inst.edges:
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                varmap.register((ROLE_EDGE_LABEL, x, y, lp, i))
    for (x, y) in inst.edges:
        dg = inst.degree_y(y)
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                for beta in range(1, dg - 1):
                    varmap.register((ROLE_CHAIN, beta, x, y, lp, i))
    for k in range(1, m):
        for i in range(1, d + 1):
            varmap.register((ROLE_TREE, k, i))
    for j in range(1, t + 1):
        varmap.register((ROLE_V, j))

    def node_var(k: int, i: int) -> int:
        if indexing.is_leaf(k):
            x, y = indexing.leaf_edge(k)
            return varmap.id_of((ROLE_EDGE, x, y, i))
        return varmap.id_of((ROLE_TREE, k, i))

    phi = PureHornCNF(registry)
    counts = {"a": 0, "b1": 0, "b2": 0, "b3": 0, "b4": 0, "c": 0, "d1": 0, "d2": 0, "e": 0}

    def emit(tag, body, head):
        phi.add(PureHornClause(frozenset(body), head))
        counts[tag] += 1

    for (x, y) in inst.edges:
        pairs = sorted(
            inst.constraints[(x, y)],
            key=lambda p: (inst.label_index_x(x, p[0]), inst.label_index_y(y, p[1])),
        )
        for (lx, lp) in pairs:
            for i in range(1, d + 1):
                emit("a",
                     {varmap.id_of((ROLE_U, lx)), varmap.id_of((ROLE_U, lp))},
                     varmap.id_of((ROLE_EDGE_LABEL, x, y, lp, i)))

    for (x, y) in inst.edges:
        neighbors = inst.neighbors_of_y(y)
        if len(neighbors) > 2:
            continue
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                emit("b1",
                     {varmap.id_of((ROLE_EDGE_LABEL, z, y, lp, i)) for z in neighbors},
                     varmap.id_of((ROLE_EDGE, x, y, i)))
    for (x, y) in inst.edges:
        neighbors = inst.neighbors_of_y(y)
        if len(neighbors) < 3:
            continue
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                emit("b2",
                     {varmap.id_of((ROLE_EDGE_LABEL, neighbors[0], y, lp, i)),
                      varmap.id_of((ROLE_EDGE_LABEL, neighbors[1], y, lp, i))},
                     varmap.id_of((ROLE_CHAIN, 1, x, y, lp, i)))
    for (x, y) in inst.edges:
        neighbors = inst.neighbors_of_y(y)
        dg = len(neighbors)
        if dg < 3:
            continue
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                for beta in range(1, dg - 2):
                    emit("b3",
                         {varmap.id_of((ROLE_EDGE_LABEL, neighbors[beta + 1], y, lp, i)),
                          varmap.id_of((ROLE_CHAIN, beta, x, y, lp, i))},
                         varmap.id_of((ROLE_CHAIN, beta + 1, x, y, lp, i)))
    for (x, y) in inst.edges:
        neighbors = inst.neighbors_of_y(y)
        dg = len(neighbors)
        if dg < 3:
            continue
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                emit("b4",
                     {varmap.id_of((ROLE_EDGE_LABEL, neighbors[dg - 1], y, lp, i)),
                      varmap.id_of((ROLE_CHAIN, dg - 2, x, y, lp, i))},
                     varmap.id_of((ROLE_EDGE, x, y, i)))

    for (x, y) in inst.edges:
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                emit("c",
                     {varmap.id_of((ROLE_EDGE, x, y, i))},
                     varmap.id_of((ROLE_EDGE_LABEL, x, y, lp, i)))

    for k in range(1, m):
        for i in range(1, d + 1):
            emit("d1", {node_var(2 * k, i), node_var(2 * k + 1, i)}, node_var(k, i))
    for alpha in range(1, d):
        emit("d2",
             {node_var(1, alpha), node_var(1, alpha + 1)},
             varmap.id_of((ROLE_U, labels[alpha - 1])))
    psi = phi.replace_clauses(phi.clauses)
    for j in range(1, t + 1):
        for lbl in labels:
            emit("e", {varmap.id_of((ROLE_V, j))}, varmap.id_of((ROLE_U, lbl)))

    artifact = ReductionArtifact(inst, params, phi, psi, varmap, counts, kind="3cnf")
    artifact.indexing = indexing
    return artifact


def expected_counts_3cnf(inst: LCInstance, t: int) -> dict:
    d = default_d(inst)
    m, lam_p, pi = inst.m, inst.lam_prime, inst.pi
    labels = inst.total_x_labels + inst.total_y_labels
    deg = {e: inst.degree_y(e[1]) for e in inst.edges}
    low = [e for e in inst.edges if deg[e] <= 2]
    high = [e for e in inst.edges if deg[e] >= 3]
    return {
        "a": d * pi,
        "b1": d * lam_p * len(low),
        "b2": d * lam_p * len(high),
        "b3": d * lam_p * sum(deg[e] - 3 for e in high),
        "b4": d * lam_p * len(high),
        "c": d * m * lam_p,
        "d1": d * (m - 1),
        "d2": d - 1,
        "e": t * labels,
        "b_tilde": d * lam_p * sum(max(deg[e] - 1, 1) for e in inst.edges),
        "phi_vars": t
        + labels
        + d * m * (lam_p + 1)
        + d * lam_p * sum(max(deg[e] - 2, 0) for e in inst.edges)
        + d * (m - 1),
    }


@dataclass(frozen=True)
class SizeBounds3:
    """Closed-form size bounds for a cubified artifact.

    Two variants are evaluated.  The unprefixed fields count the gadgets
    exactly (m-1 tree clauses per index, d*m*(m-1)*lambda' list variables at
    most) and hold for every instance; these are the binding checks.  The
    ``stated_*`` fields apply two common miscounts, tallying the tree gadget
    one clause per node (2m-1 per index) and sizing the list-variable term
    without the amplification factor; they are reported for diagnostic
    comparison only and already fail on the toy example.
    """

    psi_clauses: int
    phi_clauses: int
    phi_vars: int
    clause_lower: int
    clause_upper: int
    stated_clause_lower: int
    var_upper: int
    stated_var_upper: int
    clause_lower_ok: bool
    clause_upper_ok: bool
    stated_clause_lower_ok: bool
    var_lower_ok: bool
    var_upper_ok: bool
    stated_var_upper_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.clause_lower_ok
            and self.clause_upper_ok
            and self.var_lower_ok
            and self.var_upper_ok
        )


def size_bounds_3cnf(artifact: ReductionArtifact) -> SizeBounds3:
    if artifact.kind != "3cnf":
        raise InputError("size_bounds_3cnf expects a cubified artifact")
    inst = artifact.inst
    d, t = artifact.params.d, artifact.params.t
    m, lam_p, pi = inst.m, inst.lam_prime, inst.pi
    labels = inst.total_x_labels + inst.total_y_labels
    psi_c = artifact.psi.clause_count
    phi_c = artifact.phi.clause_count
    phi_v = len(artifact.phi.registry)
    assert phi_c - t * labels == psi_c

    stated_clause_lower = d * (pi + 2 * m * lam_p + 2 * m - 1) - 1
    clause_lower = d * (pi + 2 * m * lam_p + m) - 1
    clause_upper = d * (pi + m * m * lam_p + 4 * m)
    stated_var_upper = t + d * m * (lam_p + 2) + m * m * lam_p
    var_upper = t + d * m * (lam_p + 2) + d * m * max(m - 1, 0) * lam_p
    return SizeBounds3(
        psi_clauses=psi_c,
        phi_clauses=phi_c,
        phi_vars=phi_v,
        clause_lower=clause_lower,
        clause_upper=clause_upper,
        stated_clause_lower=stated_clause_lower,
        var_upper=var_upper,
        stated_var_upper=stated_var_upper,
        clause_lower_ok=clause_lower <= psi_c,
        clause_upper_ok=psi_c <= clause_upper,
        stated_clause_lower_ok=stated_clause_lower <= psi_c,
        var_lower_ok=t <= phi_v,
        var_upper_ok=phi_v <= var_upper,
        stated_var_upper_ok=phi_v <= stated_var_upper,
    )


def extract_covers_3cnf(artifact: ReductionArtifact, rep: PureHornCNF):
    """Cover extraction for cubified artifacts; the label-clause shape
    v(j) -> u(l) is the same in both constructions, so this shares the wide
    form's reader."""
    from .reduction import extract_covers

    if artifact.kind != "3cnf":
        raise InputError("extract_covers_3cnf expects a cubified artifact")
    return extract_covers(artifact, rep)


def degree_histogram(cnf: PureHornCNF) -> dict:
    out: dict[int, int] = {}
    for c in cnf.clauses:
        out[c.degree] = out.get(c.degree, 0) + 1
    return out


def literal_count_relation(cnf: PureHornCNF):
    """(clauses, literals, ratio); cubified outputs satisfy 2c <= l <= 3c."""
    c = cnf.clause_count
    l = cnf.literal_count
    if not 2 * c <= l <= 3 * c:
        raise AssertionError(
            f"literal count {l} outside [2c, 3c] for c={c}; malformed 3-CNF build"
        )
    return c, l, Fraction(l, c)


def tree_shape_violations(artifact: ReductionArtifact) -> list[str]:
    """Re-derive the per-index trees from the emitted clauses and check they
    are in-trees on node ids [2m-1] with leaves exactly the alias range."""
    if artifact.kind != "3cnf":
        raise InputError("tree check expects a cubified artifact")
    inst = artifact.inst
    m = inst.m
    d = artifact.params.d
    varmap = artifact.varmap
    indexing = artifact.indexing
    problems = []
    edge_node = {indexing.leaf_edge(k): k for k in range(m, 2 * m)}

    def node_of(var_id):
        role = varmap.role_of(var_id)
        if role[0] == ROLE_TREE:
            return role[1], role[2]
        if role[0] == ROLE_EDGE:
            return edge_node[(role[1], role[2])], role[3]
        return None

    children: dict[int, dict[int, set]] = {i: {} for i in range(1, d + 1)}
    for clause in artifact.phi.clauses:
        head_role = varmap.role_of(clause.head)
        if head_role[0] == ROLE_TREE:
            k, i = head_role[1], head_role[2]
            kids = {node_of(b) for b in clause.body}
            if any(kid is None for kid in kids):
                problems.append(f"tree clause with non-node body at ({k},{i})")
                continue
            children[i].setdefault(k, set()).update(kid[0] for kid in kids)
    for i in range(1, d + 1):
        internal = set(children[i])
        if m == 1:
            if internal:
                problems.append(f"index {i}: unexpected internal nodes for m=1")
            continue
        if internal != set(range(1, m)):
            problems.append(f"index {i}: internal nodes {sorted(internal)} != [1, m-1]")
            continue
        for k in range(1, m):
            if children[i][k] != {2 * k, 2 * k + 1}:
                problems.append(f"index {i}: node {k} has children {sorted(children[i][k])}")
        reachable = set()
        stack = [1]
        while stack:
            k = stack.pop()
            reachable.add(k)
            for kid in children[i].get(k, ()):
                stack.append(kid)
        if reachable != set(range(1, 2 * m)):
            problems.append(f"index {i}: tree does not span node ids [2m-1]")
    return problems
