"""Label-cover model, solvers, tightening, refinement, packing, rounding."""

from fractions import Fraction
from itertools import product

import pytest

from hornforge import InputError, Labeling, refine, sat_to_lc
from hornforge.labelcover import (
    LCInstance,
    RegularityWarning,
    check_cover,
    expected_packing_fraction,
    lift_labeling,
    packing_value,
    project_labeling,
    round_cover_to_packing,
    solve_exact_cover,
    solve_exact_packing,
    tighten,
)
from hornforge.lcgen import random_biregular_instance, random_instance


def lab(x, y):
    return Labeling(
        x={k: frozenset(v) for k, v in x.items()},
        y={k: frozenset(v) for k, v in y.items()},
    )


def one_edge_instance(pairs=(("l1", "p1"),), x_labels=("l1",), y_labels=("p1",)):
    return LCInstance(("x1",), ("y1",), x_labels, y_labels,
                      [("x1", "y1")], {("x1", "y1"): set(pairs)})


class TestCheckCover:
    def test_claw_optimal_cover(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p2"]})
        report = check_cover(claw, f)
        assert report.is_total and report.tight
        assert report.kappa == 1

    def test_unsupported_label_leaves_edge_uncovered(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l2"], "x3": ["l2"]}, {"y1": ["p2"]})
        report = check_cover(claw, f)
        assert ("x2", "y1") in report.uncovered_edges

    def test_full_assignment_feasibility_device(self, claw):
        f = lab({x: ["l1", "l2"] for x in claw.x_names}, {"y1": ["p2"]})
        assert check_cover(claw, f).is_total
        assert claw.is_feasible()

    def test_foreign_label_rejected(self, claw):
        f = lab({"x1": ["nope"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p2"]})
        with pytest.raises(InputError):
            check_cover(claw, f)

    def test_kappa_exact_rational(self, claw):
        f = lab({"x1": ["l1", "l2"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p2"]})
        assert check_cover(claw, f).kappa == Fraction(4, 3)


class TestTighten:
    def test_already_tight_unchanged(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p2"]})
        assert tighten(claw, f) == f.normalized(claw)

    def test_drops_surplus_label_keeps_totality(self):
        inst = one_edge_instance(pairs=[("l1", "p1"), ("l1", "p2")],
                                 y_labels=("p1", "p2"))
        f = lab({"x1": ["l1"]}, {"y1": ["p1", "p2"]})
        out = tighten(inst, f)
        assert out.y["y1"] == frozenset(["p1"])  # larger label index dropped
        report = check_cover(inst, out)
        assert report.is_total and report.tight

    def test_cost_preserved(self):
        inst = one_edge_instance(pairs=[("l1", "p1"), ("l2", "p2")],
                                 x_labels=("l1", "l2"), y_labels=("p1", "p2"))
        f = lab({"x1": ["l1", "l2"]}, {"y1": ["p1", "p2"]})
        before = check_cover(inst, f)
        assert before.is_total and not before.tight
        out = tighten(inst, f)
        after = check_cover(inst, out)
        assert after.is_total and after.tight
        assert after.kappa == before.kappa == 2

    def test_requires_total(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l2"], "x3": ["l2"]}, {"y1": ["p2"]})
        with pytest.raises(InputError):
            tighten(claw, f)


class TestRefine:
    def test_claw_eight_labels(self, claw, claw_refined):
        assert claw_refined.total_x_labels + claw_refined.total_y_labels == 8
        assert claw_refined.lam == claw.lam
        assert claw_refined.lam_prime == claw.lam_prime
        assert claw_refined.pi == claw.pi
        for e in claw.edges:
            assert claw_refined.pi_of(e) == claw.pi_of(e)

    def test_kappa_preserved_under_lift(self, claw, claw_refined):
        f0, kappa0 = solve_exact_cover(claw)
        f = lift_labeling(claw_refined, f0)
        report = check_cover(claw_refined, f)
        assert report.is_total and report.kappa == kappa0

    def test_project_lift_identity(self, claw, claw_refined):
        f0, _ = solve_exact_cover(claw)
        assert project_labeling(claw_refined, lift_labeling(claw_refined, f0)) == f0.normalized(claw)

    def test_double_refine_rejected(self, claw_refined):
        with pytest.raises(InputError):
            refine(claw_refined)


class TestExactCover:
    def test_claw(self, claw):
        cover, kappa = solve_exact_cover(claw)
        assert kappa == 1
        assert check_cover(claw, cover).is_total

    def test_single_forced_edge(self):
        inst = one_edge_instance()
        cover, kappa = solve_exact_cover(inst)
        assert kappa == 1
        assert cover.x["x1"] == frozenset(["l1"])

    def test_unsatisfiable_formula_costs_more_than_one(self):
        inst = sat_to_lc([[1], [-1]])
        _, kappa = solve_exact_cover(inst)
        assert kappa > 1
        assert kappa == 2  # derived: both truth values needed on every occurrence

    def test_infeasible_instance_reported(self):
        # y1's two edges support disjoint y-labels, so no single y-label works
        edges = [("x1", "y1"), ("x2", "y1")]
        constraints = {("x1", "y1"): {("l1", "p1")}, ("x2", "y1"): {("l1", "p2")}}
        inst = LCInstance(("x1", "x2"), ("y1",), ("l1",), ("p1", "p2"),
                          edges, constraints)
        assert not inst.is_feasible()
        with pytest.raises(InputError, match="infeasible"):
            solve_exact_cover(inst)

    def test_brute_force_agreement(self):
        # independent oracle: enumerate every labeling outright
        for seed in (3, 11, 27):
            inst = random_instance(seed, r_max=3, s_max=2, lam_max=2, lam_prime_max=2)
            _, kappa = solve_exact_cover(inst)
            best = None
            x_subsets = [
                [frozenset(s) for size in range(0, len(inst.labels_x[x]) + 1)
                 for s in __import__("itertools").combinations(inst.labels_x[x], size)]
                for x in inst.x_names
            ]
            y_choices = [[frozenset([l]) for l in inst.labels_y[y]] for y in inst.y_names]
            for xs in product(*x_subsets):
                for ys in product(*y_choices):
                    f = Labeling(x=dict(zip(inst.x_names, xs)), y=dict(zip(inst.y_names, ys)))
                    rep = check_cover(inst, f)
                    if rep.is_total and (best is None or rep.kappa < best):
                        best = rep.kappa
            assert kappa == best


class TestSatToLC:
    def test_single_three_clause(self):
        inst = sat_to_lc([[1, 2, 3]])
        assert (inst.r, inst.s) == (3, 1)
        assert inst.lam_prime == 8
        # each edge excludes exactly the all-falsifying pattern
        assert all(inst.pi_of(e) == 7 for e in inst.edges)
        _, kappa = solve_exact_cover(inst)
        assert kappa == 1

    def test_satisfiable_iff_cost_one(self):
        sat = sat_to_lc([[1, 2], [-1, 2]])
        _, k1 = solve_exact_cover(sat)
        assert k1 == 1
        unsat = sat_to_lc([[1, 2], [1, -2], [-1, 2], [-1, -2]])
        _, k2 = solve_exact_cover(unsat)
        assert k2 > 1

    def test_empty_formula_rejected(self):
        with pytest.raises(InputError):
            sat_to_lc([])

    def test_non_uniform_rejected(self):
        with pytest.raises(InputError):
            sat_to_lc([[1, 2], [3]])
        with pytest.raises(InputError):
            sat_to_lc([[1, 1]])


class TestPacking:
    def test_cost_one_cover_gives_fraction_one(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p2"]})
        assert packing_value(claw, f) == 1

    def test_wrong_label_two_thirds(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l1"], "x3": ["l1"]}, {"y1": ["p2"]})
        assert packing_value(claw, f) == Fraction(2, 3)

    def test_non_packing_rejected(self, claw):
        f = lab({"x1": ["l1", "l2"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p2"]})
        with pytest.raises(InputError):
            packing_value(claw, f)

    def test_exact_packing_matches_enumeration(self, claw):
        packing, mu = solve_exact_packing(claw)
        assert mu == 1
        assert packing_value(claw, packing) == mu
        # brute maximum over all packings
        best = max(
            packing_value(claw, lab(
                {"x1": [a], "x2": [b], "x3": [c]}, {"y1": [d]}))
            for a in claw.labels_x["x1"] for b in claw.labels_x["x2"]
            for c in claw.labels_x["x3"] for d in claw.labels_y["y1"]
        )
        assert mu == best

    def test_bounds_and_weak_duality_on_biregular(self):
        for seed in range(12):
            inst = random_biregular_instance(seed)
            assert inst.is_biregular()
            _, kappa = solve_exact_cover(inst)
            _, mu = solve_exact_packing(inst)
            assert 0 < mu <= 1
            assert 1 <= kappa <= inst.total_x_labels
            assert mu >= Fraction(1, 1) / kappa


class TestRounding:
    def test_cost_one_cover_rounds_to_full_cover(self, claw):
        # the claw is bi-regular (a star), so no regularity warning here
        cover, kappa = solve_exact_cover(claw)
        assert kappa == 1
        out = round_cover_to_packing(claw, cover, seed=9)
        assert packing_value(claw, out) == 1

    def test_irregular_graph_warns(self):
        edges = [("x1", "y1"), ("x1", "y2"), ("x2", "y2")]
        constraints = {e: {("l1", "p1")} for e in edges}
        inst = LCInstance(("x1", "x2"), ("y1", "y2"), ("l1",), ("p1",),
                          edges, constraints)
        assert not inst.is_biregular()
        cover, _ = solve_exact_cover(inst)
        with pytest.warns(RegularityWarning):
            round_cover_to_packing(inst, cover, seed=3)

    def test_two_label_regular_mean(self):
        # one x, one y, doubly-covered edge: keep either label, always covered
        inst = one_edge_instance(pairs=[("l1", "p1"), ("l2", "p1")],
                                 x_labels=("l1", "l2"))
        f = lab({"x1": ["l1", "l2"]}, {"y1": ["p1"]})
        assert check_cover(inst, f).is_total
        total = Fraction(0)
        for seed in range(200):
            total += packing_value(inst, round_cover_to_packing(inst, f, seed))
        assert total / 200 == expected_packing_fraction(inst, f) == 1

    def test_monte_carlo_against_exact_expectation(self):
        # 2-regular square: x1,x2 vs y1,y2, all four edges; x labels chosen so
        # exactly one of the two labels on each x covers each edge
        edges = [("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")]
        constraints = {
            ("x1", "y1"): {("l1", "p1")},
            ("x1", "y2"): {("l2", "p1")},
            ("x2", "y1"): {("l1", "p1")},
            ("x2", "y2"): {("l2", "p1")},
        }
        inst = LCInstance(("x1", "x2"), ("y1", "y2"), ("l1", "l2"), ("p1",),
                          edges, constraints)
        assert inst.is_biregular()
        f = lab({"x1": ["l1", "l2"], "x2": ["l1", "l2"]},
                {"y1": ["p1"], "y2": ["p1"]})
        assert check_cover(inst, f).is_total
        expect = expected_packing_fraction(inst, f)
        assert expect == Fraction(1, 2)  # one supporting label out of two per edge
        samples = [packing_value(inst, round_cover_to_packing(inst, f, s)) for s in range(1000)]
        mean = sum(samples, Fraction(0)) / len(samples)
        assert abs(mean - expect) < Fraction(1, 20)

    def test_determinism_per_seed(self, claw):
        cover, _ = solve_exact_cover(claw)
        import warnings as w

        with w.catch_warnings():
            w.simplefilter("ignore")
            a = round_cover_to_packing(claw, cover, seed=123)
            b = round_cover_to_packing(claw, cover, seed=123)
            c = round_cover_to_packing(claw, cover, seed=124)
        assert a == b
        assert a.x.keys() == c.x.keys()

    def test_requires_tight_total(self, claw):
        f = lab({"x1": ["l1"], "x2": ["l1"], "x3": ["l2"]}, {"y1": ["p1", "p2"]})
        with pytest.raises(InputError):
            round_cover_to_packing(claw, f, seed=1)


class TestInstanceValidation:
    def test_isolated_vertex_rejected(self):
        with pytest.raises(InputError, match="isolated"):
            LCInstance(("x1", "x2"), ("y1",), ("l1",), ("p1",),
                       [("x1", "y1")], {("x1", "y1"): {("l1", "p1")}})

    def test_empty_constraint_rejected(self):
        with pytest.raises(InputError, match="empty constraint"):
            LCInstance(("x1",), ("y1",), ("l1",), ("p1",),
                       [("x1", "y1")], {("x1", "y1"): set()})

    def test_shared_pool_disjointness(self):
        with pytest.raises(InputError, match="disjoint"):
            LCInstance(("x1",), ("y1",), ("l1",), ("l1",),
                       [("x1", "y1")], {("x1", "y1"): {("l1", "l1")}})

    def test_generators_deterministic(self):
        a, b = random_instance(42), random_instance(42)
        assert a.edges == b.edges and a.constraints == b.constraints
        c, d = random_biregular_instance(7), random_biregular_instance(7)
        assert c.edges == d.edges and c.constraints == d.constraints

    def test_generated_instances_feasible(self):
        for seed in range(30):
            assert random_instance(seed).is_feasible()
            assert random_biregular_instance(seed).is_feasible()
