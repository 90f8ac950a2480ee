"""Label-cover instances: covers and costs, tightening, refinement, exact
small-scale cover/packing solvers, and randomized cover-to-packing rounding.

An instance is a bipartite constraint graph.  Vertices on the X side receive
label subsets, vertices on the Y side non-empty label subsets; an edge (x, y)
is covered when every label on y is matched by some admissible partner label
on x.  The cost of a total-cover is the average number of labels used on the
X side, an exact rational here throughout.
"""

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from .errors import InputError, ResourceLimitError
from .rng import SplitMix64

_NAME_RE = re.compile(r"^[A-Za-z0-9_.']+$")


class RegularityWarning(UserWarning):
    """Raised by rounding when the constraint graph is not bi-regular."""


def _check_name(name: str, what: str) -> str:
    if not _NAME_RE.match(name):
        raise InputError(f"bad {what} name: {name!r}")
    return name


class LCInstance:
    """Bipartite constraint graph with per-edge admissible label relations.

    ``x_labels``/``y_labels`` may be a single tuple (shared pool, unrefined)
    or a per-vertex mapping.  Refined instances give every vertex a private
    disjoint label set.
    """

    def __init__(self, x_names, y_names, x_labels, y_labels, edges, constraints,
                 refined: bool = False):
        self.x_names = tuple(_check_name(x, "vertex") for x in x_names)
        self.y_names = tuple(_check_name(y, "vertex") for y in y_names)
        if not self.x_names or not self.y_names:
            raise InputError("instance needs at least one vertex on each side")
        if set(self.x_names) & set(self.y_names) or len(set(self.x_names)) != len(self.x_names) \
                or len(set(self.y_names)) != len(self.y_names):
            raise InputError("vertex names must be unique across both sides")
        self._x_index = {x: i for i, x in enumerate(self.x_names)}
        self._y_index = {y: i for i, y in enumerate(self.y_names)}

        self.labels_x = self._normalize_labels(x_labels, self.x_names, "x")
        self.labels_y = self._normalize_labels(y_labels, self.y_names, "y")
        self.refined = bool(refined)
        self._validate_label_pools()

        seen = set()
        for x, y in edges:
            if x not in self._x_index or y not in self._y_index:
                raise InputError(f"edge ({x}, {y}) references an unknown vertex")
            if (x, y) in seen:
                raise InputError(f"duplicate edge ({x}, {y})")
            seen.add((x, y))
        self.edges = tuple(sorted(seen, key=lambda e: (self._x_index[e[0]], self._y_index[e[1]])))
        touched_x = {x for x, _ in self.edges}
        touched_y = {y for _, y in self.edges}
        if touched_x != set(self.x_names) or touched_y != set(self.y_names):
            raise InputError("isolated vertices are not allowed")

        self.constraints = {}
        for e in self.edges:
            pairs = frozenset(constraints.get(e, ()))
            if not pairs:
                raise InputError(f"edge {e} has an empty constraint set")
            lx, ly = set(self.labels_x[e[0]]), set(self.labels_y[e[1]])
            for a, b in pairs:
                if a not in lx or b not in ly:
                    raise InputError(f"constraint pair ({a}, {b}) on edge {e} uses foreign labels")
            self.constraints[e] = pairs
        if set(constraints) - set(self.edges):
            raise InputError("constraints listed for a non-edge")

    @staticmethod
    def _normalize_labels(labels, names, side) -> dict:
        if isinstance(labels, dict):
            out = {v: tuple(labels[v]) for v in names}
        else:
            pool = tuple(labels)
            out = {v: pool for v in names}
        for v, pool in out.items():
            if not pool:
                raise InputError(f"vertex {v} has an empty label set")
            if len(set(pool)) != len(pool):
                raise InputError(f"vertex {v} lists a duplicate label")
            for lbl in pool:
                _check_name(lbl, f"{side}-label")
        return out

    def _validate_label_pools(self):
        x_pools = {self.labels_x[x] for x in self.x_names}
        y_pools = {self.labels_y[y] for y in self.y_names}
        if self.refined:
            owner = {}
            for v in (*self.x_names, *self.y_names):
                pool = self.labels_x[v] if v in self._x_index else self.labels_y[v]
                for lbl in pool:
                    if lbl in owner:
                        raise InputError(f"refined label {lbl!r} belongs to two vertices")
                    owner[lbl] = v
        else:
            if len(x_pools) != 1 or len(y_pools) != 1:
                raise InputError("unrefined instance must share one label pool per side")
            if set(next(iter(x_pools))) & set(next(iter(y_pools))):
                raise InputError("x and y label pools must be disjoint")

    # sizes, per the standard notation: r, s, m vertex/edge counts, lambda
    # label-set sizes, pi the total constraint size
    @property
    def r(self) -> int:
        return len(self.x_names)

    @property
    def s(self) -> int:
        return len(self.y_names)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def lam(self) -> int:
        sizes = {len(self.labels_x[x]) for x in self.x_names}
        if len(sizes) != 1:
            raise InputError("per-vertex x-label counts are not uniform")
        return sizes.pop()

    @property
    def lam_prime(self) -> int:
        sizes = {len(self.labels_y[y]) for y in self.y_names}
        if len(sizes) != 1:
            raise InputError("per-vertex y-label counts are not uniform")
        return sizes.pop()

    @property
    def total_x_labels(self) -> int:
        return len(self.all_x_labels())

    @property
    def total_y_labels(self) -> int:
        return len(self.all_y_labels())

    @property
    def pi(self) -> int:
        return sum(len(p) for p in self.constraints.values())

    def pi_of(self, edge) -> int:
        return len(self.constraints[edge])

    @property
    def size(self) -> int:
        return self.r + self.s + self.m + self.total_x_labels + self.total_y_labels + self.pi

    def all_x_labels(self) -> tuple:
        if self.refined:
            out = []
            for x in self.x_names:
                out.extend(self.labels_x[x])
            return tuple(out)
        return self.labels_x[self.x_names[0]]

    def all_y_labels(self) -> tuple:
        if self.refined:
            out = []
            for y in self.y_names:
                out.extend(self.labels_y[y])
            return tuple(out)
        return self.labels_y[self.y_names[0]]

    def neighbors_of_y(self, y) -> tuple:
        """N(y) in ascending x-index order (the fixed neighbor order)."""
        return tuple(x for x, yy in self.edges if yy == y)

    def neighbors_of_x(self, x) -> tuple:
        return tuple(y for xx, y in self.edges if xx == x)

    def degree_y(self, y) -> int:
        return len(self.neighbors_of_y(y))

    def degree_x(self, x) -> int:
        return len(self.neighbors_of_x(x))

    def is_biregular(self) -> bool:
        dx = {self.degree_x(x) for x in self.x_names}
        dy = {self.degree_y(y) for y in self.y_names}
        return len(dx) == 1 and len(dy) == 1

    def is_feasible(self) -> bool:
        """True iff assigning the full pool on X covers some label per y."""
        for y in self.y_names:
            ok = False
            for lp in self.labels_y[y]:
                if all(any(b == lp for _, b in self.constraints[(x, y)])
                       for x in self.neighbors_of_y(y)):
                    ok = True
                    break
            if not ok:
                return False
        return True

    def label_index_x(self, x, lbl) -> int:
        return self.labels_x[x].index(lbl)

    def label_index_y(self, y, lbl) -> int:
        return self.labels_y[y].index(lbl)


@dataclass(frozen=True)
class Labeling:
    """Vertex -> label-set assignment.  X sides may be empty; Y sides are
    non-empty for proper labelings (validated at operation boundaries)."""

    x: dict
    y: dict

    def normalized(self, inst: LCInstance) -> "Labeling":
        return Labeling(
            x={v: frozenset(self.x.get(v, ())) for v in inst.x_names},
            y={v: frozenset(self.y.get(v, ())) for v in inst.y_names},
        )

    def validate(self, inst: LCInstance, require_y_nonempty: bool = True) -> "Labeling":
        f = self.normalized(inst)
        for v, labels in f.x.items():
            foreign = labels - set(inst.labels_x[v])
            if foreign:
                raise InputError(f"labeling assigns foreign labels {sorted(foreign)} to {v}")
        for v, labels in f.y.items():
            foreign = labels - set(inst.labels_y[v])
            if foreign:
                raise InputError(f"labeling assigns foreign labels {sorted(foreign)} to {v}")
            if require_y_nonempty and not labels:
                raise InputError(f"labeling leaves y-vertex {v} without a label")
        return f

    def x_total(self) -> int:
        return sum(len(v) for v in self.x.values())

    def y_total(self) -> int:
        return sum(len(v) for v in self.y.values())

    def is_packing(self) -> bool:
        return all(len(v) == 1 for v in self.x.values()) and all(
            len(v) == 1 for v in self.y.values()
        )


@dataclass(frozen=True)
class CoverReport:
    is_total: bool
    uncovered_edges: tuple
    kappa: Fraction
    tight: bool
    fx_total: int
    fy_total: int


def _edge_covered(inst: LCInstance, f: Labeling, edge) -> bool:
    x, y = edge
    pairs = inst.constraints[edge]
    for lp in f.y[y]:
        if not any((a, lp) in pairs for a in f.x[x]):
            return False
    return True


def check_cover(inst: LCInstance, f: Labeling) -> CoverReport:
    """Per-edge cover check plus the exact rational cost."""
    f = f.validate(inst)
    uncovered = tuple(e for e in inst.edges if not _edge_covered(inst, f, e))
    return CoverReport(
        is_total=not uncovered,
        uncovered_edges=uncovered,
        kappa=Fraction(f.x_total(), inst.r),
        tight=all(len(f.y[y]) == 1 for y in inst.y_names),
        fx_total=f.x_total(),
        fy_total=f.y_total(),
    )


def tighten(inst: LCInstance, f: Labeling) -> Labeling:
    """Drop surplus y-labels (largest label index first) until each y keeps
    exactly one.  Totality survives because covering quantifies over every
    retained y-label, and the cost only counts the untouched X side."""
    f = f.validate(inst)
    if not check_cover(inst, f).is_total:
        raise InputError("tighten requires a total-cover")
    new_y = {}
    for y in inst.y_names:
        kept = sorted(f.y[y], key=lambda lbl: inst.label_index_y(y, lbl))
        new_y[y] = frozenset(kept[:1])
    return Labeling(x=dict(f.x), y=new_y)


def refined_label(vertex: str, base: str) -> str:
    return f"{vertex}.{base}"


def refine(inst: LCInstance) -> LCInstance:
    """Per-vertex private copies of the label pools, preserving constraint
    sizes; covers correspond one-to-one with the original instance."""
    if inst.refined:
        raise InputError("instance is already refined")
    lx = {x: tuple(refined_label(x, l) for l in inst.labels_x[x]) for x in inst.x_names}
    ly = {y: tuple(refined_label(y, l) for l in inst.labels_y[y]) for y in inst.y_names}
    constraints = {
        (x, y): frozenset(
            (refined_label(x, a), refined_label(y, b)) for a, b in pairs
        )
        for (x, y), pairs in inst.constraints.items()
    }
    return LCInstance(inst.x_names, inst.y_names, lx, ly, inst.edges, constraints, refined=True)


def lift_labeling(refined: LCInstance, f0: Labeling) -> Labeling:
    """Base-instance labeling -> refined-instance labeling."""
    if not refined.refined:
        raise InputError("lift_labeling needs the refined instance")
    return Labeling(
        x={x: frozenset(refined_label(x, l) for l in f0.x.get(x, ())) for x in refined.x_names},
        y={y: frozenset(refined_label(y, l) for l in f0.y.get(y, ())) for y in refined.y_names},
    )


def project_labeling(refined: LCInstance, f: Labeling) -> Labeling:
    """Refined-instance labeling -> base-instance labeling."""
    if not refined.refined:
        raise InputError("project_labeling needs the refined instance")

    def strip(v, labels):
        out = set()
        for lbl in labels:
            prefix = v + "."
            if not lbl.startswith(prefix):
                raise InputError(f"label {lbl!r} is not a private label of {v}")
            out.add(lbl[len(prefix):])
        return frozenset(out)

    return Labeling(
        x={x: strip(x, f.x.get(x, ())) for x in refined.x_names},
        y={y: strip(y, f.y.get(y, ())) for y in refined.y_names},
    )


def _min_x_choice(inst: LCInstance, x, demands) -> Optional[frozenset]:
    """Smallest label subset of L_x covering all (edge, y-label) demands;
    subsets scanned by size then label order, so ties are deterministic."""
    pool = inst.labels_x[x]
    for size in range(1, len(pool) + 1):
        for subset in combinations(pool, size):
            chosen = set(subset)
            if all(any((a, lp) in inst.constraints[e] for a in chosen) for e, lp in demands):
                return frozenset(subset)
    return None


def solve_exact_cover(inst: LCInstance, budget: int = 2_000_000):
    """Optimal tight total-cover by exhausting tight y-assignments and
    solving an exact per-x set cover for each.  Returns (labeling, kappa)."""
    y_pools = [inst.labels_y[y] for y in inst.y_names]
    n_choices = 1
    for pool in y_pools:
        n_choices *= len(pool)
    work = n_choices * sum(2 ** len(inst.labels_x[x]) for x in inst.x_names)
    if work > budget:
        raise ResourceLimitError(
            f"exact cover search space {work} exceeds budget {budget}",
            stats={"work": work},
        )
    best = None
    best_cost = None
    for choice in product(*y_pools):
        y_assign = dict(zip(inst.y_names, choice))
        assign_x = {}
        cost = 0
        feasible = True
        for x in inst.x_names:
            demands = [((x, y), y_assign[y]) for y in inst.neighbors_of_x(x)]
            chosen = _min_x_choice(inst, x, demands)
            if chosen is None:
                feasible = False
                break
            assign_x[x] = chosen
            cost += len(chosen)
            if best_cost is not None and cost >= best_cost:
                feasible = False  # cannot beat the incumbent; later x only add cost
                break
        if not feasible:
            continue
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = Labeling(
                x=assign_x, y={y: frozenset([lbl]) for y, lbl in y_assign.items()}
            )
    if best is None:
        raise InputError("instance admits no total-cover (infeasible)")
    return best, Fraction(best_cost, inst.r)


def solve_exact_packing(inst: LCInstance, budget: int = 2_000_000):
    """Optimal packing labeling (one label per vertex) by enumeration.
    Returns (labeling, mu) with mu the max covered-edge fraction."""
    pools = [inst.labels_x[x] for x in inst.x_names] + [inst.labels_y[y] for y in inst.y_names]
    work = 1
    for pool in pools:
        work *= len(pool)
        if work > budget:
            raise ResourceLimitError(
                f"exact packing search space exceeds budget {budget}"
            )
    work *= max(1, inst.m)
    if work > budget:
        raise ResourceLimitError(f"exact packing work {work} exceeds budget {budget}")
    best = None
    best_covered = -1
    for choice in product(*pools):
        xs = dict(zip(inst.x_names, choice[: inst.r]))
        ys = dict(zip(inst.y_names, choice[inst.r:]))
        covered = sum(
            1 for (x, y) in inst.edges if (xs[x], ys[y]) in inst.constraints[(x, y)]
        )
        if covered > best_covered:
            best_covered = covered
            best = Labeling(
                x={x: frozenset([l]) for x, l in xs.items()},
                y={y: frozenset([l]) for y, l in ys.items()},
            )
    return best, Fraction(best_covered, inst.m)


def packing_value(inst: LCInstance, f: Labeling) -> Fraction:
    """Covered-edge fraction of a packing labeling."""
    f = f.validate(inst)
    if not f.is_packing():
        raise InputError("packing value needs exactly one label per vertex")
    covered = 0
    for (x, y) in inst.edges:
        (a,) = f.x[x]
        (b,) = f.y[y]
        if (a, b) in inst.constraints[(x, y)]:
            covered += 1
    return Fraction(covered, inst.m)


def expected_packing_fraction(inst: LCInstance, f: Labeling) -> Fraction:
    """Exact expectation of the covered fraction under uniform per-x label
    retention from a tight total-cover; the rounding oracle for tests."""
    f = f.validate(inst)
    total = Fraction(0)
    for (x, y) in inst.edges:
        (lp,) = f.y[y]
        support = sum(1 for a in f.x[x] if (a, lp) in inst.constraints[(x, y)])
        total += Fraction(support, len(f.x[x]))
    return total / inst.m


def round_cover_to_packing(inst: LCInstance, f: Labeling, seed: int) -> Labeling:
    """Keep one uniformly random label per x-vertex of a tight total-cover.

    Per-vertex substreams are derived from (seed, vertex index), so the
    result is reproducible regardless of evaluation order.  The expected
    covered fraction is at least 1/kappa on bi-regular graphs; a warning is
    raised otherwise because that guarantee needs regularity.
    """
    f = f.validate(inst)
    report = check_cover(inst, f)
    if not (report.is_total and report.tight):
        raise InputError("rounding requires a tight total-cover")
    if not inst.is_biregular():
        warnings.warn(
            "graph is not bi-regular; the 1/kappa rounding guarantee may fail",
            RegularityWarning,
            stacklevel=2,
        )
    root = SplitMix64(seed)
    new_x = {}
    for i, x in enumerate(inst.x_names):
        pool = sorted(f.x[x], key=lambda lbl: inst.label_index_x(x, lbl))
        stream = root.derive(i)
        new_x[x] = frozenset([pool[stream.below(len(pool))]])
    return Labeling(x=new_x, y=dict(f.y))
