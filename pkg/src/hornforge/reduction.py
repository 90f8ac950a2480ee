r"""Canonical pure Horn CNF generated from a refined label-cover instance.

Variables and clause families:

  u[<label>]                one per label (both sides)
  e[<x>,<y>,<i>]            per edge and amplification index i in [d]
  e[<x>,<y>,<label'>,<i>]   per edge, y-label, and index
  v[<j>]                    per amplification index j in [t]

  (a)  u(l) & u(l')        -> e(x,y,l',i)   per edge, admissible pair, i
  (b)  /\_{z in N(y)} e(z,y,l',i) -> e(x,y,i)   per edge, y-label, i
  (c)  e(x,y,i)            -> e(x,y,l',i)   per edge, y-label, i
  (d)  /\_{all edges, all i} e(x,y,i) -> u(l)   one clause per label
  (e)  v(j)                -> u(l)          per j, label

The conjunction of (a)-(d) is the core (an exclusive component); adding (e)
gives the full formula.  With the default amplification d = 1 + #labels, the
only prime implicates touching v(j) in clause-minimum representations are
the (e)-shaped ones, which makes minimum representations encode optimal
tight total-covers.  Emission order is fixed (family, then edge, label,
index ascending) so artifacts are byte-reproducible.

The variable naming scheme is an external contract: roles are recoverable
from printable names alone, which is what lets downstream tools audit bare
formulas out of a pipeline.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InputError
from .horn import PureHornClause, PureHornCNF, VarRegistry, closure_of
from .labelcover import CoverReport, Labeling, LCInstance, check_cover

# ---------------------------------------------------------------------------
# roles and names

ROLE_U = "u"
ROLE_EDGE = "e"          # e(x, y, i)
ROLE_EDGE_LABEL = "el"   # e(x, y, l', i)
ROLE_V = "v"
ROLE_TREE = "tree"       # e(k, i), 3-CNF binary-tree node
ROLE_CHAIN = "chain"     # e(beta, x, y, l', i), 3-CNF linked-list node


def role_name(role: tuple) -> str:
    kind = role[0]
    if kind == ROLE_U:
        return f"u[{role[1]}]"
    if kind == ROLE_EDGE:
        _, x, y, i = role
        return f"e[{x},{y},{i}]"
    if kind == ROLE_EDGE_LABEL:
        _, x, y, lp, i = role
        return f"e[{x},{y},{lp},{i}]"
    if kind == ROLE_V:
        return f"v[{role[1]}]"
    if kind == ROLE_TREE:
        _, k, i = role
        return f"e[{k},{i}]"
    if kind == ROLE_CHAIN:
        _, beta, x, y, lp, i = role
        return f"e[{beta},{x},{y},{lp},{i}]"
    raise InputError(f"unknown role {role!r}")


def parse_role(name: str) -> tuple:
    """Invert :func:`role_name`; raises InputError on foreign names."""
    if not name.endswith("]") or "[" not in name:
        raise InputError(f"not a gadget variable name: {name!r}")
    kind, _, inner = name[:-1].partition("[")
    fields = inner.split(",")
    if kind == "u" and len(fields) == 1:
        return (ROLE_U, fields[0])
    if kind == "v" and len(fields) == 1 and fields[0].isdigit():
        return (ROLE_V, int(fields[0]))
    if kind == "e":
        if len(fields) == 2 and fields[0].isdigit() and fields[1].isdigit():
            return (ROLE_TREE, int(fields[0]), int(fields[1]))
        if len(fields) == 3 and fields[2].isdigit():
            return (ROLE_EDGE, fields[0], fields[1], int(fields[2]))
        if len(fields) == 4 and fields[3].isdigit():
            return (ROLE_EDGE_LABEL, fields[0], fields[1], fields[2], int(fields[3]))
        if len(fields) == 5 and fields[0].isdigit() and fields[4].isdigit():
            return (ROLE_CHAIN, int(fields[0]), fields[1], fields[2], fields[3], int(fields[4]))
    raise InputError(f"not a gadget variable name: {name!r}")


class GadgetVarMap:
    """Bidirectional role <-> variable id map, backed by the registry."""

    def __init__(self, registry: VarRegistry):
        self.registry = registry
        self._by_role: dict[tuple, int] = {}
        self._by_id: dict[int, tuple] = {}

    def register(self, role: tuple) -> int:
        idx = self.registry.intern(role_name(role))
        self._by_role[role] = idx
        self._by_id[idx] = role
        return idx

    def id_of(self, role: tuple) -> int:
        return self._by_role[role]

    def role_of(self, idx: int) -> tuple:
        return self._by_id[idx]

    def __contains__(self, role: tuple) -> bool:
        return role in self._by_role

    def __len__(self) -> int:
        return len(self._by_role)


# ---------------------------------------------------------------------------
# parameters and artifact

def default_d(inst: LCInstance) -> int:
    """1 + #labels: one more than anything the label side can pay for."""
    return 1 + inst.total_x_labels + inst.total_y_labels


@dataclass(frozen=True)
class ReductionParams:
    d: int
    t: int = 1
    d_overridden: bool = False

    def __post_init__(self):
        if self.d < 1 or self.t < 1:
            raise InputError("amplification parameters must be positive")

    @classmethod
    def for_instance(cls, inst: LCInstance, t: int = 1, d: Optional[int] = None,
                     allow_d_override: bool = False) -> "ReductionParams":
        dd = default_d(inst)
        if d is None or d == dd:
            return cls(d=dd, t=t, d_overridden=False)
        if not allow_d_override:
            raise InputError(
                f"d={d} overrides the default {dd}; pass allow_d_override to permit"
            )
        return cls(d=d, t=t, d_overridden=True)


@dataclass
class ReductionArtifact:
    inst: LCInstance
    params: ReductionParams
    phi: PureHornCNF
    psi: PureHornCNF
    varmap: GadgetVarMap
    family_counts: dict
    kind: str  # "cnf" or "3cnf"
    indexing: object = None  # EdgeIndexing for 3cnf artifacts

    def label_chain(self) -> tuple:
        """All labels: x-labels by (vertex, label) order, then y-labels."""
        return label_chain(self.inst)

    def v_ids(self) -> list[int]:
        return [self.varmap.id_of((ROLE_V, j)) for j in range(1, self.params.t + 1)]

    def core_variable_ids(self) -> frozenset:
        """Ids of every variable except the v(j); closed under chaining."""
        vs = set(self.v_ids())
        return frozenset(i for i in range(len(self.phi.registry)) if i not in vs)


def label_chain(inst: LCInstance) -> tuple:
    out = []
    for x in inst.x_names:
        out.extend(inst.labels_x[x])
    for y in inst.y_names:
        out.extend(inst.labels_y[y])
    return tuple(out)


def _check_reduction_input(inst: LCInstance) -> None:
    if not inst.refined:
        raise InputError("reduction needs a refined instance (run refine first)")
    _ = (inst.lam, inst.lam_prime)  # uniformity check; raises otherwise
    for v in (*inst.x_names, *inst.y_names):
        if v.isdigit():
            raise InputError(f"vertex name {v!r} is all digits; gadget names would be ambiguous")


# ---------------------------------------------------------------------------
# the build

def build_cnf(inst: LCInstance, params: ReductionParams) -> ReductionArtifact:
    """Emit the five clause families; see the module docstring for order."""
    _check_reduction_input(inst)
    d, t = params.d, params.t
    labels = label_chain(inst)

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
    for j in range(1, t + 1):
        varmap.register((ROLE_V, j))

    phi = PureHornCNF(registry)
    counts = {"a": 0, "b": 0, "c": 0, "d": 0, "e": 0}

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
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                emit("b",
                     {varmap.id_of((ROLE_EDGE_LABEL, z, y, lp, i)) for z in neighbors},
                     varmap.id_of((ROLE_EDGE, x, y, i)))
    for (x, y) in inst.edges:
        for lp in inst.labels_y[y]:
            for i in range(1, d + 1):
                emit("c",
                     {varmap.id_of((ROLE_EDGE, x, y, i))},
                     varmap.id_of((ROLE_EDGE_LABEL, x, y, lp, i)))
    all_edge_vars = frozenset(
        varmap.id_of((ROLE_EDGE, x, y, i))
        for (x, y) in inst.edges
        for i in range(1, d + 1)
    )
    for lbl in labels:
        emit("d", all_edge_vars, varmap.id_of((ROLE_U, lbl)))
    psi = phi.replace_clauses(phi.clauses)
    for j in range(1, t + 1):
        for lbl in labels:
            emit("e", {varmap.id_of((ROLE_V, j))}, varmap.id_of((ROLE_U, lbl)))

    return ReductionArtifact(inst, params, phi, psi, varmap, counts, kind="cnf")


def expected_counts_cnf(inst: LCInstance, params: ReductionParams) -> dict:
    """Closed-form clause/variable counts for the wide construction."""
    d, t = params.d, params.t
    r, s, m, lam, lam_p, pi = inst.r, inst.s, inst.m, inst.lam, inst.lam_prime, inst.pi
    labels = r * lam + s * lam_p
    return {
        "a": d * pi,
        "b": d * m * lam_p,
        "c": d * m * lam_p,
        "d": labels,
        "e": t * labels,
        "phi_clauses": (t + 1) * labels + d * (pi + 2 * m * lam_p),
        "phi_vars": t + d * m * (lam_p + 1) + labels,
        "psi_clauses": labels + d * (pi + 2 * m * lam_p),
        "psi_vars": d * m * (lam_p + 1) + labels,
    }


def build_phi_f(inst: LCInstance, params: ReductionParams, f: Labeling,
                require_cover: bool = True) -> PureHornCNF:
    """Core plus the cover-restricted label clauses v(j) -> u(l), l in
    f(x) or f(y).  Equivalent to the canonical formula whenever f is a tight
    total-cover; ``require_cover=False`` skips the validation so broken
    labelings can be built for negative experiments."""
    artifact = build_cnf(inst, params)
    f = f.validate(inst, require_y_nonempty=require_cover)
    if require_cover:
        report = check_cover(inst, f)
        if not (report.is_total and report.tight):
            raise InputError("build_phi_f needs a tight total-cover")
    phi_f = artifact.psi.replace_clauses(artifact.psi.clauses)
    for j in range(1, params.t + 1):
        vj = artifact.varmap.id_of((ROLE_V, j))
        for x in inst.x_names:
            for lbl in sorted(f.x[x], key=lambda l: inst.label_index_x(x, l)):
                phi_f.add(PureHornClause(frozenset({vj}), artifact.varmap.id_of((ROLE_U, lbl))))
        for y in inst.y_names:
            for lbl in sorted(f.y[y], key=lambda l: inst.label_index_y(y, l)):
                phi_f.add(PureHornClause(frozenset({vj}), artifact.varmap.id_of((ROLE_U, lbl))))
    return phi_f


# ---------------------------------------------------------------------------
# cover extraction and the sandwich bounds

@dataclass
class ExtractedCover:
    j: int
    labels_x: dict
    labels_y: dict
    is_labeling: bool          # every y received at least one label
    tight_ok: bool             # every y received at most one label
    warnings: tuple
    labeling: Optional[Labeling]
    cover: Optional[CoverReport]

    @property
    def is_tight_total_cover(self) -> bool:
        return bool(self.is_labeling and self.tight_ok and self.cover and self.cover.is_total)


def extract_covers(artifact: ReductionArtifact, rep: PureHornCNF) -> list[ExtractedCover]:
    """Read candidate covers off a representation: S_j collects the labels l
    with a clause v(j) -> u(l); x and y parts are S_j split by label owner.

    Emits structural warnings when v(j) occurs in clauses of any other shape;
    with the default amplification d those cannot appear in clause-minimum
    representations, so a warning signals a d override or non-minimal input.
    """
    inst = artifact.inst
    t = artifact.params.t
    roles = {}
    for idx, name in enumerate(rep.registry.names):
        try:
            roles[idx] = parse_role(name)
        except InputError:
            roles[idx] = ("foreign", name)
    label_sets: dict[int, set] = {j: set() for j in range(1, t + 1)}
    warnings_by_j: dict[int, list] = {j: [] for j in range(1, t + 1)}
    for clause in rep.clauses:
        head_role = roles[clause.head]
        body_roles = [roles[v] for v in clause.body]
        v_in_body = [br for br in body_roles if br[0] == ROLE_V]
        if head_role[0] == ROLE_V:
            j = head_role[1]
            if j in warnings_by_j:
                warnings_by_j[j].append(
                    f"v({j}) occurs as a head: {rep.format_clause(clause)}"
                )
            continue
        if not v_in_body:
            continue
        for br in v_in_body:
            j = br[1]
            if j not in label_sets:
                continue
            if head_role[0] == ROLE_U and len(clause.body) == 1:
                label_sets[j].add(head_role[1])
            else:
                warnings_by_j[j].append(
                    f"v({j}) occurs in a non-label clause: {rep.format_clause(clause)}"
                )
    out = []
    x_label_owner = {lbl: x for x in inst.x_names for lbl in inst.labels_x[x]}
    y_label_owner = {lbl: y for y in inst.y_names for lbl in inst.labels_y[y]}
    for j in range(1, t + 1):
        fx = {x: set() for x in inst.x_names}
        fy = {y: set() for y in inst.y_names}
        for lbl in label_sets[j]:
            if lbl in x_label_owner:
                fx[x_label_owner[lbl]].add(lbl)
            elif lbl in y_label_owner:
                fy[y_label_owner[lbl]].add(lbl)
            else:
                warnings_by_j[j].append(f"label {lbl!r} belongs to no vertex")
        is_labeling = all(fy[y] for y in inst.y_names)
        tight_ok = all(len(fy[y]) <= 1 for y in inst.y_names)
        labeling = cover = None
        if is_labeling:
            labeling = Labeling(
                x={x: frozenset(v) for x, v in fx.items()},
                y={y: frozenset(v) for y, v in fy.items()},
            )
            cover = check_cover(inst, labeling)
        out.append(
            ExtractedCover(
                j=j,
                labels_x={x: frozenset(v) for x, v in fx.items()},
                labels_y={y: frozenset(v) for y, v in fy.items()},
                is_labeling=is_labeling,
                tight_ok=tight_ok,
                warnings=tuple(warnings_by_j[j]),
                labeling=labeling,
                cover=cover,
            )
        )
    return out


@dataclass(frozen=True)
class SandwichReport:
    psi_clauses: int
    rep_clauses: int
    cover_term: int            # t * (kappa * r + s)
    lower_bound: Fraction      # psi_clauses / (lam + lam')
    lower_ok: bool
    upper_ok: Optional[bool]   # None when the representation is not minimum

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok is not False


def verify_sandwich(artifact: ReductionArtifact, rep: PureHornCNF,
                    kappa_opt: Fraction, rep_is_minimum: bool) -> SandwichReport:
    """Check psi_c/(lam+lam') <= |rep|_c - t(kappa r + s) <= psi_c.

    The upper side is only meaningful for clause-minimum representations;
    for heuristic ones it is skipped (reported as None).
    """
    inst = artifact.inst
    term_frac = artifact.params.t * (kappa_opt * inst.r + inst.s)
    if term_frac.denominator != 1:
        raise InputError("kappa * r is not integral; not a cover cost for this instance")
    term = int(term_frac)
    psi_c = artifact.psi.clause_count
    mid = rep.clause_count - term
    lower = Fraction(psi_c, inst.lam + inst.lam_prime)
    return SandwichReport(
        psi_clauses=psi_c,
        rep_clauses=rep.clause_count,
        cover_term=term,
        lower_bound=lower,
        lower_ok=lower <= mid,
        upper_ok=(mid <= psi_c) if rep_is_minimum else None,
    )


# ---------------------------------------------------------------------------
# structural checks used by verification and tests

def v_closure_is_everything(artifact: ReductionArtifact) -> bool:
    """From any {v(j)} the chaining closure is all variables but the other
    v's (the label clauses hand over every label, and everything else
    follows)."""
    all_ids = set(range(len(artifact.phi.registry)))
    vs = set(artifact.v_ids())
    for j, vj in enumerate(artifact.v_ids(), start=1):
        expect = frozenset((all_ids - vs) | {vj})
        if closure_of(artifact.phi, [vj]) != expect:
            return False
    return True


def blockwise_symmetry_ok(artifact: ReductionArtifact) -> bool:
    """Non-interference across amplification blocks: chaining from v(j)
    through the label clauses plus only the block-i clauses reaches the same
    set of edges for every i."""
    phi = artifact.phi
    varmap = artifact.varmap
    d = artifact.params.d
    per_i: dict[int, list] = {i: [] for i in range(1, d + 1)}
    shared = []
    for clause in phi.clauses:
        role = varmap.role_of(clause.head)
        if role[0] == ROLE_EDGE_LABEL:
            per_i[role[4]].append(clause)
        elif role[0] == ROLE_EDGE:
            per_i[role[3]].append(clause)
        elif role[0] == ROLE_U and any(
            varmap.role_of(b)[0] == ROLE_V for b in clause.body
        ):
            shared.append(clause)
    reference = None
    for j in range(1, artifact.params.t + 1):
        vj = varmap.id_of((ROLE_V, j))
        for i in range(1, d + 1):
            sub = phi.replace_clauses(shared + per_i[i])
            reached = closure_of(sub, [vj])
            edges_hit = frozenset(
                (varmap.role_of(v)[1], varmap.role_of(v)[2])
                for v in reached
                if varmap.role_of(v)[0] == ROLE_EDGE
            )
            if reference is None:
                reference = edges_hit
            elif edges_hit != reference:
                return False
    return True
