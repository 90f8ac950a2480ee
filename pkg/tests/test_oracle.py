"""Exact minimization against the unpruned meta-oracle and the sandwich."""

from fractions import Fraction

import pytest

from helpers import cnf_of, exhaustive_min_clause_count, random_small_cnf
from hornforge import (
    LCInstance,
    OracleLimits,
    ResourceLimitError,
    build_cnf,
    equivalent,
    is_implicate,
    minimize_exact,
    minimize_heuristic,
    prime_reduce_clause,
    refine,
    solve_exact_cover,
    tau_lower_bound_heads,
    verify_sandwich,
)
from hornforge.reduction import ReductionParams, extract_covers


def micro_instance(n_x_labels=1, n_y_labels=1):
    xl = tuple(f"l{i}" for i in range(1, n_x_labels + 1))
    yl = tuple(f"p{i}" for i in range(1, n_y_labels + 1))
    pairs = {(a, b) for a in xl for b in yl}
    return refine(LCInstance(("x1",), ("y1",), xl, yl, [("x1", "y1")],
                             {("x1", "y1"): pairs}))


class TestTauLowerBound:
    def test_chain(self):
        assert tau_lower_bound_heads(cnf_of("a->b; b->c")) == 2

    def test_single_clause(self):
        assert tau_lower_bound_heads(cnf_of("a&b->c")) == 1

    def test_core_bound_vs_clause_count(self):
        inst = micro_instance()
        art = build_cnf(inst, ReductionParams.for_instance(inst, t=1))
        lb = tau_lower_bound_heads(art.psi)
        lam_sum = inst.lam + inst.lam_prime
        assert Fraction(art.psi.clause_count, lam_sum) <= lb <= art.psi.clause_count


class TestMinimizeExact:
    def test_redundant_chain(self):
        res = minimize_exact(cnf_of("a->b; b->c; a->c"))
        assert (res.tau, res.lam) == (2, 4)
        assert [res.witness_tau.format_clause(c) for c in res.witness_tau.clauses] == [
            "a -> b", "b -> c"]

    def test_single_clause(self):
        res = minimize_exact(cnf_of("a->b"))
        assert (res.tau, res.lam) == (1, 2)

    def test_empty_cnf(self):
        res = minimize_exact(cnf_of("", extra_vars="a b"))
        assert (res.tau, res.lam) == (0, 0)

    def test_meta_oracle_agreement(self):
        hand = [
            cnf_of("a->b; b->c; a->c"),
            cnf_of("a->b; b->a; a->c; b->c"),
            cnf_of("a&b->c; c->a; c->b"),
            cnf_of("a->b; b&c->d; a&c->d"),
        ]
        seeded = [random_small_cnf(seed, max_vars=5, max_clauses=5) for seed in range(8)]
        for cnf in hand + seeded:
            res = minimize_exact(cnf)
            assert res.tau == exhaustive_min_clause_count(cnf)
            assert res.lam <= res.witness_tau.literal_count

    def test_witness_properties(self):
        for seed in range(10):
            cnf = random_small_cnf(seed, max_vars=6)
            res = minimize_exact(cnf)
            for witness in (res.witness_tau, res.witness_lambda):
                assert equivalent(witness, cnf)
                for c in witness.clauses:
                    assert prime_reduce_clause(cnf, c) == c  # already prime
                for i in range(witness.clause_count):
                    rest = witness.replace_clauses(
                        witness.clauses[:i] + witness.clauses[i + 1:])
                    assert not is_implicate(rest, witness.clauses[i])
            assert res.witness_tau.clause_count == res.tau
            assert res.witness_lambda.literal_count == res.lam
            assert minimize_heuristic(cnf).clause_count >= res.tau

    def test_deterministic(self):
        cnf = random_small_cnf(3, max_vars=6)
        a = minimize_exact(cnf)
        b = minimize_exact(cnf)
        assert a.nodes_explored == b.nodes_explored
        assert a.witness_tau.clause_keys() == b.witness_tau.clause_keys()
        assert a.witness_lambda.clause_keys() == b.witness_lambda.clause_keys()

    def test_limits(self):
        cnf = random_small_cnf(1)
        with pytest.raises(ResourceLimitError):
            minimize_exact(cnf, OracleLimits(max_vars=2))
        with pytest.raises(ResourceLimitError) as err:
            minimize_exact(cnf_of("a->b; b->c; c->d; a->d; b->d"),
                           OracleLimits(max_nodes=1))
        assert "nodes" in str(err.value)


class TestOracleOnGadgets:
    def test_sandwich_on_default_d_micro_instance(self):
        inst = micro_instance()
        params = ReductionParams.for_instance(inst, t=1)
        art = build_cnf(inst, params)
        assert len(art.phi.registry) == 9
        res = minimize_exact(art.phi)
        cover, kappa = solve_exact_cover(inst)
        report = verify_sandwich(art, res.witness_tau, kappa, rep_is_minimum=True)
        assert report.ok
        extractions = extract_covers(art, res.witness_tau)
        for ex in extractions:
            assert ex.is_tight_total_cover, ex.warnings
            assert ex.cover.kappa == kappa
            assert all(len(v) == 1 for v in ex.labels_y.values())

    def test_no_nonprime_representation_beats_lambda(self):
        # the prime-restriction argument for literal minima, validated by
        # enumerating representations over ALL implicates (non-prime bodies
        # included) with fewer literals than the reported optimum
        from itertools import combinations

        from helpers import naive_closure, tt_is_implicate
        from hornforge.horn import PureHornClause

        for spec in ("a->b; b->c; a->c", "a&b->c; a->b"):
            cnf = cnf_of(spec)
            res = minimize_exact(cnf)
            n = len(cnf.registry)
            implicates = [
                PureHornClause(frozenset(body), head)
                for head in range(n)
                for size in range(0, n)
                for body in combinations([v for v in range(n) if v != head], size)
                if tt_is_implicate(cnf, body, head)
            ]
            targets = [(c.body, c.head) for c in cnf.clauses]
            max_clauses = (res.lam - 1) // 2  # every clause here has >= 2 literals
            for k in range(0, max_clauses + 1):
                for combo in combinations(implicates, k):
                    if sum(c.degree for c in combo) >= res.lam:
                        continue
                    sub = cnf.replace_clauses(combo)
                    assert not all(
                        head in naive_closure(sub, body) for body, head in targets
                    ), f"{spec}: sub-optimal lambda"

    def test_component_swap_preserves_equivalence(self):
        # exclusive-component switching: swap the core for any equivalent
        # core representation and the whole still represents the function
        inst = micro_instance()
        params = ReductionParams.for_instance(inst, t=1)
        art = build_cnf(inst, params)
        core_min = minimize_exact(art.psi)
        swapped = art.phi.replace_clauses(
            list(core_min.witness_tau.clauses)
            + [c for c in art.phi.clauses if c not in art.psi]
        )
        assert equivalent(swapped, art.phi)
