"""Invariant suite tying the modules together.

Every check returns a CheckResult; failures carry the concrete
counterexample payload in ``detail`` and never raise.  Oracle-gated checks
are reported as skipped (with the reason) when a limit rules them out.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, ResourceLimitError
from .horn import (
    PureHornCNF,
    closure_of,
    equivalent,
    exclusive_component,
    is_closed_under_fc,
)
from .labelcover import (
    Labeling,
    LCInstance,
    check_cover,
    expected_packing_fraction,
    lift_labeling,
    packing_value,
    project_labeling,
    refine,
    round_cover_to_packing,
    solve_exact_cover,
    solve_exact_packing,
    tighten,
)
from .reduction import (
    ROLE_U,
    ROLE_V,
    ReductionArtifact,
    blockwise_symmetry_ok,
    build_phi_f,
    expected_counts_cnf,
    parse_role,
    v_closure_is_everything,
)
from .reduction3 import (
    degree_histogram,
    expected_counts_3cnf,
    size_bounds_3cnf,
    tree_shape_violations,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | skip
    measured: object = None
    expected: object = None
    provenance: str = "derived"
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name, ok, measured=None, expected=None, provenance="derived", detail=""):
        self.checks.append(
            CheckResult(name, "pass" if ok else "fail", measured, expected, provenance, detail)
        )

    def skip(self, name, reason, provenance="derived"):
        self.checks.append(CheckResult(name, "skip", detail=reason, provenance=provenance))

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "status": c.status,
                    "measured": _jsonable(c.measured),
                    "expected": _jsonable(c.expected),
                    "provenance": c.provenance,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (frozenset, set, tuple)):
        return sorted(map(_jsonable, value)) if isinstance(value, (frozenset, set)) else [
            _jsonable(v) for v in value
        ]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


# ---------------------------------------------------------------------------
# artifact-level checks

def verify_artifact(artifact: ReductionArtifact) -> VerificationReport:
    rep = VerificationReport()
    inst = artifact.inst
    if artifact.kind == "cnf":
        expected = expected_counts_cnf(inst, artifact.params)
        measured = {
            **artifact.family_counts,
            "phi_clauses": artifact.phi.clause_count,
            "phi_vars": len(artifact.phi.registry),
            "psi_clauses": artifact.psi.clause_count,
            "psi_vars": artifact.psi.used_variable_count,
        }
        rep.add("cnf_size_identities", measured == expected, measured, expected,
                provenance="closed-form size identities")
    else:
        expected = expected_counts_3cnf(inst, artifact.params.t)
        measured = {
            **artifact.family_counts,
            "b_tilde": sum(artifact.family_counts[k] for k in ("b1", "b2", "b3", "b4")),
            "phi_vars": len(artifact.phi.registry),
        }
        rep.add("3cnf_family_counts", measured == expected, measured, expected,
                provenance="exact gadget counting")
        bounds = size_bounds_3cnf(artifact)
        stated = {
            "stated_clause_lower": bounds.stated_clause_lower,
            "stated_clause_lower_ok": bounds.stated_clause_lower_ok,
            "stated_var_upper": bounds.stated_var_upper,
            "stated_var_upper_ok": bounds.stated_var_upper_ok,
        }
        detail = ""
        if not (bounds.stated_clause_lower_ok and bounds.stated_var_upper_ok):
            detail = ("stated variants miscount the tree gadget and fail here; "
                      "the exact-count bounds are the binding check")
        rep.add("3cnf_size_bounds", bounds.all_ok,
                {"psi_clauses": bounds.psi_clauses, "phi_vars": bounds.phi_vars},
                {"clause_range": [bounds.clause_lower, bounds.clause_upper],
                 "var_upper": bounds.var_upper, "stated_variants": stated},
                provenance="closed-form size bounds, exact gadget counting",
                detail=detail)
        hist = degree_histogram(artifact.phi)
        rep.add("3cnf_degrees", set(hist) <= {2, 3}, hist, "degrees in {2,3}",
                provenance="3-CNF degree condition")
        c, l, ratio = artifact.phi.clause_count, artifact.phi.literal_count, None
        ok = 2 * c <= l <= 3 * c
        rep.add("3cnf_literal_relation", ok, {"clauses": c, "literals": l},
                "2c <= l <= 3c", provenance="quadratic/cubic literal bounds")
        problems = tree_shape_violations(artifact)
        rep.add("3cnf_tree_shape", not problems, problems or None, "in-trees on [2m-1]",
                detail="; ".join(problems))

    rep.add("v_closure_everything", v_closure_is_everything(artifact),
            provenance="closure from each v(j) reaches every core variable")
    core = artifact.core_variable_ids()
    closed = is_closed_under_fc(artifact.phi, core)
    rep.add("core_closed_under_fc", closed,
            provenance="core variable set is chaining-closed")
    if closed:
        comp = exclusive_component(artifact.phi, core)
        rep.add("exclusive_component_is_core",
                comp.clause_keys() == artifact.psi.clause_keys(),
                {"component_clauses": comp.clause_count},
                {"psi_clauses": artifact.psi.clause_count})
    heads: dict[int, int] = {}
    for c in artifact.psi.clauses:
        heads[c.head] = heads.get(c.head, 0) + 1
    cap = inst.lam + inst.lam_prime
    worst = max(heads.values(), default=0)
    rep.add("per_head_multiplicity", worst <= cap, worst, f"<= {cap}",
            provenance="head multiplicity bound in the core")
    v_heads = [c for c in artifact.phi.clauses
               if artifact.varmap.role_of(c.head)[0] == ROLE_V]
    rep.add("no_v_head", not v_heads, len(v_heads), 0)
    if artifact.kind == "cnf":
        if artifact.params.d_overridden:
            rep.skip("blockwise_symmetry", "d overridden; symmetry argument needs default d")
        else:
            rep.add("blockwise_symmetry", blockwise_symmetry_ok(artifact),
                    provenance="per-index non-interference")
    return rep


def verify_phi_f(artifact: ReductionArtifact, max_clauses: int = 50_000) -> VerificationReport:
    """Cover-restricted formula is equivalent to the canonical one, and a
    deliberately corrupted cover is not."""
    rep = VerificationReport()
    if artifact.kind != "cnf":
        rep.skip("phi_f_equivalence", "cover-restricted build applies to the wide form")
        return rep
    if artifact.phi.clause_count > max_clauses:
        rep.skip("phi_f_equivalence", f"artifact too large ({artifact.phi.clause_count} clauses)")
        return rep
    inst = artifact.inst
    try:
        cover, kappa = solve_exact_cover(inst)
    except ResourceLimitError as exc:
        rep.skip("phi_f_equivalence", f"exact cover solver over budget: {exc}")
        return rep
    phi_f = build_phi_f(inst, artifact.params, cover)
    rep.add("phi_f_equivalence", equivalent(phi_f, artifact.phi),
            {"phi_f_clauses": phi_f.clause_count, "kappa": kappa},
            provenance="cover-restricted representation")
    expected_count = artifact.psi.clause_count + artifact.params.t * (
        int(kappa * inst.r) + inst.s
    )
    rep.add("phi_f_clause_count", phi_f.clause_count == expected_count,
            phi_f.clause_count, expected_count)
    broken = _corrupt_cover(inst, cover)
    if broken is None:
        rep.skip("phi_f_corrupted_inequivalence", "no corruptible label (every f(x) forced)")
    else:
        phi_bad = build_phi_f(inst, artifact.params, broken, require_cover=False)
        rep.add("phi_f_corrupted_inequivalence", not equivalent(phi_bad, artifact.phi),
                provenance="removing a used cover label must change the function")
    return rep


def _corrupt_cover(inst: LCInstance, cover):
    """Drop one needed x-label so some edge loses its cover."""
    for x in inst.x_names:
        for lbl in sorted(cover.x[x]):
            trial_x = dict(cover.x)
            trial_x[x] = frozenset(cover.x[x]) - {lbl}
            trial = Labeling(x=trial_x, y=dict(cover.y))
            if not check_cover(inst, trial).is_total:
                return trial
    return None


# ---------------------------------------------------------------------------
# label-cover level checks

def verify_lc(inst: LCInstance, seed: int, budget: int = 2_000_000,
              rounding_samples: int = 0) -> VerificationReport:
    rep = VerificationReport()
    rep.add("feasible", inst.is_feasible(), provenance="full-pool assignment covers")
    try:
        cover, kappa = solve_exact_cover(inst, budget=budget)
    except ResourceLimitError as exc:
        rep.skip("exact_cover", str(exc))
        return rep
    report = check_cover(inst, cover)
    rep.add("exact_cover_total_tight", report.is_total and report.tight,
            {"kappa": kappa})
    rep.add("kappa_feasible_range", 1 <= kappa <= inst.total_x_labels,
            kappa, f"[1, {inst.total_x_labels}]",
            provenance="cost range of total-covers")

    fat = Labeling(
        x={x: frozenset(inst.labels_x[x]) for x in inst.x_names},
        y=dict(cover.y),
    )
    tight = tighten(inst, fat)
    t_report = check_cover(inst, tight)
    f_report = check_cover(inst, fat)
    rep.add("tighten_total_and_cost",
            t_report.is_total and t_report.tight and t_report.kappa == f_report.kappa,
            {"kappa_before": f_report.kappa, "kappa_after": t_report.kappa},
            provenance="tightening keeps totality and cost")

    if not inst.refined:
        refined = refine(inst)
        lifted = lift_labeling(refined, cover)
        lifted_report = check_cover(refined, lifted)
        rep.add("refinement_preserves_cover",
                lifted_report.is_total and lifted_report.kappa == kappa,
                {"kappa": lifted_report.kappa}, {"kappa": kappa},
                provenance="refinement bijection")
        back = project_labeling(refined, lifted)
        rep.add("refinement_round_trip", back == cover.normalized(inst))

    try:
        packing, mu = solve_exact_packing(inst, budget=budget)
    except ResourceLimitError as exc:
        rep.skip("weak_duality", str(exc))
        return rep
    rep.add("weak_duality", mu >= Fraction(1, 1) / kappa,
            {"mu": mu, "kappa": kappa}, "mu >= 1/kappa",
            provenance="rounding argument, exact rational comparison")
    rep.add("packing_value_range", 0 < mu <= 1, mu, "(0, 1]")

    if rounding_samples > 0:
        if not inst.is_biregular():
            rep.skip("rounding_mean", "graph not bi-regular; guarantee needs regularity")
        else:
            total = Fraction(0)
            for k in range(rounding_samples):
                packing_k = round_cover_to_packing(inst, cover, seed + k)
                total += packing_value(inst, packing_k)
            mean = total / rounding_samples
            expect = expected_packing_fraction(inst, cover)
            rep.add("rounding_mean_matches_expectation",
                    abs(mean - expect) <= Fraction(1, 10),
                    {"mean": mean, "expectation": expect},
                    provenance="Monte-Carlo vs exact expectation")
            rep.add("rounding_expectation_weak_duality", expect >= 1 / kappa,
                    {"expectation": expect, "1/kappa": 1 / kappa})
    return rep


# ---------------------------------------------------------------------------
# bare-formula checks (pipeline input with only variable names to go by)

def verify_bare_horn(cnf: PureHornCNF) -> VerificationReport:
    """Checks reconstructible from the naming contract alone."""
    rep = VerificationReport()
    roles = {}
    try:
        for idx, name in enumerate(cnf.registry.names):
            roles[idx] = parse_role(name)
    except InputError as exc:
        rep.skip("gadget_roles", f"not a generated artifact: {exc}")
        return rep
    v_ids = sorted(idx for idx, r in roles.items() if r[0] == ROLE_V)
    if not v_ids:
        rep.skip("v_closure_everything", "no amplification variables present")
    core = frozenset(idx for idx in roles if roles[idx][0] != ROLE_V)
    all_ok = True
    for vj in v_ids:
        reached = closure_of(cnf, [vj])
        if reached != core | {vj}:
            all_ok = False
            break
    if v_ids:
        rep.add("v_closure_everything", all_ok,
                provenance="closure from each v(j) reaches every core variable")
    rep.add("core_closed_under_fc", is_closed_under_fc(cnf, core))
    v_heads = [c for c in cnf.clauses if roles[c.head][0] == ROLE_V]
    rep.add("no_v_head", not v_heads, len(v_heads), 0)
    hist = degree_histogram(cnf)
    if set(hist) <= {2, 3}:
        c, l = cnf.clause_count, cnf.literal_count
        rep.add("3cnf_literal_relation", 2 * c <= l <= 3 * c,
                {"clauses": c, "literals": l}, "2c <= l <= 3c")
    else:
        rep.skip("3cnf_literal_relation", "not a 3-CNF (degrees above three present)")
    u_count = sum(1 for r in roles.values() if r[0] == ROLE_U)
    rep.add("label_variables_present", u_count > 0, u_count, "> 0")
    return rep
