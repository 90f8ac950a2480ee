"""Command-line surface.

Subcommands compose over standard streams with format auto-detection by
header line; every JSON report embeds the tool version, the resolved run
configuration, and a digest of the input, so identical invocations produce
byte-identical artifacts.  Randomized commands require an explicit --seed
(there is no wall-clock seeding anywhere).

Exit codes: 0 success, 1 check failure, 2 input error, 3 resource limit.
"""

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .errors import InputError, ResourceLimitError
from .horn import equivalent, forward_chain, minimize_heuristic
from .hornio import parse_horn, print_horn, sniff_format
from .kernel import KERNEL_NAME
from .labelcover import Labeling, refine, round_cover_to_packing, solve_exact_cover, tighten
from .lcgen import claw_instance, random_biregular_instance, random_instance, sat_to_lc
from .lcio import (
    dumps,
    labeling_from_json_dict,
    labeling_to_json_dict,
    parse_lc,
    print_lc,
)
from .oracle import OracleLimits, minimize_exact
from .reduction import ReductionParams, build_cnf, extract_covers, label_chain
from .reduction3 import build_3cnf, degree_histogram
from .verify import VerificationReport, verify_artifact, verify_bare_horn, verify_lc, verify_phi_f

ENV_LIMITS = "HORNFORGE_LIMITS"


@dataclass
class RunConfig:
    """Everything that can influence an invocation's output; serialized into
    every JSON report as the reproducibility header."""

    command: str
    seed: int = None
    t: int = None
    d_override: int = None
    max_vars: int = 12
    max_pi: int = 5000
    max_nodes: int = 2_000_000
    fc_subset_cutoff: int = 12
    budget: int = 2_000_000
    equiv_max_clauses: int = 50_000
    rounding_samples: int = 0
    extras: dict = field(default_factory=dict)

    def apply_env(self):
        raw = os.environ.get(ENV_LIMITS)
        if not raw:
            return self
        try:
            overrides = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad {ENV_LIMITS}: {exc}") from None
        for key, value in overrides.items():
            if key not in ("max_vars", "max_pi", "max_nodes", "fc_subset_cutoff",
                           "budget", "equiv_max_clauses"):
                raise InputError(f"unknown limit {key!r} in {ENV_LIMITS}")
            setattr(self, key, int(value))
        return self

    def oracle_limits(self) -> OracleLimits:
        return OracleLimits(max_vars=self.max_vars, max_pi=self.max_pi,
                            max_nodes=self.max_nodes)


class _IO:
    def __init__(self, stdin, stdout, stderr):
        self.stdin = stdin
        self.stdout = stdout
        self.stderr = stderr

    def read_input(self, path=None) -> str:
        if path and path != "-":
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    return fh.read()
            except OSError as exc:
                raise InputError(str(exc)) from None
        return self.stdin.read()


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


REPORT_SCHEMA = "hornforge.report/1"


def _report(io: _IO, config: RunConfig, input_text: str, result: dict) -> None:
    payload = {
        "schema": REPORT_SCHEMA,
        "tool": "hornforge",
        "version": __version__,
        "kernel": KERNEL_NAME,
        "config": {k: v for k, v in asdict(config).items() if v not in (None, {})},
        "input_sha256": _digest(input_text),
        "result": result,
    }
    io.stdout.write(dumps(payload))


def _load_labeling(io: _IO, path: str) -> Labeling:
    text = io.read_input(path)
    try:
        return labeling_from_json_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InputError(f"labeling file: {exc}") from None


def _reduction_params(inst, args) -> ReductionParams:
    return ReductionParams.for_instance(
        inst, t=args.t, d=args.d, allow_d_override=args.allow_d_override
    )


def _sidecar(artifact) -> dict:
    inst = artifact.inst
    data = {
        "kind": artifact.kind,
        "params": asdict(artifact.params),
        "family_counts": artifact.family_counts,
        "clauses": artifact.phi.clause_count,
        "literals": artifact.phi.literal_count,
        "variables": len(artifact.phi.registry),
        "varmap_sha256": _digest("\n".join(artifact.phi.registry.names)),
        "instance_sha256": _digest(print_lc(inst)),
    }
    if artifact.kind == "3cnf":
        data["neighbor_order"] = {y: list(inst.neighbors_of_y(y)) for y in inst.y_names}
        data["edge_indexing"] = [list(e) for e in artifact.indexing.order]
        data["label_chain"] = list(label_chain(inst))
    return data


def _build_artifact(inst, args, kind: str):
    if not inst.refined:
        raise InputError("reduction needs a refined instance; pipe through lc-refine")
    if kind == "cnf":
        return build_cnf(inst, _reduction_params(inst, args))
    if args.d is not None:
        raise InputError("the cubified construction pins d to its default")
    return build_3cnf(inst, t=args.t)


def _cover_payload(extractions) -> list:
    out = []
    for ex in extractions:
        out.append({
            "j": ex.j,
            "labels_x": {x: sorted(v) for x, v in sorted(ex.labels_x.items())},
            "labels_y": {y: sorted(v) for y, v in sorted(ex.labels_y.items())},
            "is_labeling": ex.is_labeling,
            "tight_ok": ex.tight_ok,
            "is_tight_total_cover": ex.is_tight_total_cover,
            "kappa": str(ex.cover.kappa) if ex.cover else None,
            "warnings": list(ex.warnings),
        })
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_lc_gen(io, args, config):
    if args.kind == "claw":
        inst = claw_instance()
    else:
        if args.kind in ("random", "biregular") and args.seed is None:
            raise InputError(f"lc-gen {args.kind} requires --seed")
        if args.kind == "random":
            inst = random_instance(args.seed)
        elif args.kind == "biregular":
            inst = random_biregular_instance(args.seed)
        else:  # sat2lc
            text = io.read_input(args.input)
            clauses = []
            for line in text.splitlines():
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                try:
                    lits = [int(tok) for tok in line.split() if tok != "0"]
                except ValueError:
                    raise InputError(f"bad clause line: {line!r}") from None
                if lits:
                    clauses.append(lits)
            inst = sat_to_lc(clauses)
    io.stdout.write(print_lc(inst))
    return 0


def cmd_lc_refine(io, args, config):
    inst = parse_lc(io.read_input(args.input))
    io.stdout.write(print_lc(refine(inst)))
    return 0


def cmd_lc_solve(io, args, config):
    text = io.read_input(args.input)
    inst = parse_lc(text)
    cover, kappa = solve_exact_cover(inst, budget=config.budget)
    _report(io, config, text, {
        "kappa": str(kappa),
        "labeling": labeling_to_json_dict(cover),
    })
    return 0


def cmd_lc_tighten(io, args, config):
    text = io.read_input(args.input)
    inst = parse_lc(text)
    f = _load_labeling(io, args.labeling)
    io.stdout.write(dumps(labeling_to_json_dict(tighten(inst, f))))
    return 0


def cmd_lc_round(io, args, config):
    text = io.read_input(args.input)
    inst = parse_lc(text)
    f = _load_labeling(io, args.labeling)
    io.stdout.write(dumps(labeling_to_json_dict(round_cover_to_packing(inst, f, args.seed))))
    return 0


def cmd_reduce(io, args, config, kind):
    text = io.read_input(args.input)
    inst = parse_lc(text)
    artifact = _build_artifact(inst, args, kind)
    io.stdout.write(print_horn(artifact.phi))
    if args.sidecar:
        with open(args.sidecar, "w", encoding="utf-8") as fh:
            fh.write(dumps({
                "schema": REPORT_SCHEMA,
                "tool": "hornforge",
                "version": __version__,
                "config": {k: v for k, v in asdict(config).items() if v not in (None, {})},
                "input_sha256": _digest(text),
                "result": _sidecar(artifact),
            }))
    return 0


def cmd_fc(io, args, config):
    text = io.read_input(args.input)
    cnf = parse_horn(text, allow_unit=True)
    names = [tok for chunk in args.query for tok in chunk.replace(",", " ").split()]
    query = [cnf.registry.id_of(name) for name in names]
    trace = forward_chain(cnf, query)
    _report(io, config, text, {
        "query": sorted(names),
        "closure_size": len(trace.closure),
        "closure": sorted(cnf.registry.name_of(v) for v in trace.closure),
        "triggered": [[ci, cnf.registry.name_of(v)] for ci, v in trace.triggered],
    })
    return 0


def cmd_check_equiv(io, args, config):
    phi = parse_horn(io.read_input(args.first), allow_unit=True)
    psi = parse_horn(io.read_input(args.second), allow_unit=True)
    same = equivalent(phi, psi)
    _report(io, config, print_horn(phi) + print_horn(psi), {"equivalent": same})
    return 0 if same else 1


def cmd_minimize(io, args, config):
    cnf = parse_horn(io.read_input(args.input), allow_unit=True)
    io.stdout.write(print_horn(minimize_heuristic(cnf)))
    return 0


def cmd_minimize_exact(io, args, config):
    text = io.read_input(args.input)
    cnf = parse_horn(text, allow_unit=True)
    result = minimize_exact(cnf, config.oracle_limits())
    _report(io, config, text, {
        "tau": result.tau,
        "lambda": result.lam,
        "nodes_explored": result.nodes_explored,
        "prime_implicate_count": result.prime_implicate_count,
        "witness_tau": print_horn(result.witness_tau),
        "witness_lambda": print_horn(result.witness_lambda),
    })
    return 0


def cmd_extract_cover(io, args, config):
    inst = parse_lc(io.read_input(args.instance))
    artifact = _build_artifact(inst, args, args.kind)
    text = io.read_input(args.rep)
    rep = parse_horn(text, allow_unit=True)
    extractions = extract_covers(artifact, rep)
    _report(io, config, text, {"covers": _cover_payload(extractions)})
    return 0


def cmd_verify(io, args, config):
    text = io.read_input(args.input)
    fmt = sniff_format(text)
    report = VerificationReport()
    if fmt == "horn":
        cnf = parse_horn(text, allow_unit=True)
        report.extend(verify_bare_horn(cnf))
    elif fmt == "lc":
        inst = parse_lc(text)
        if config.rounding_samples > 0 and args.seed is None:
            raise InputError("--rounding-samples draws randomness; pass --seed")
        seed = args.seed if args.seed is not None else 0
        report.extend(verify_lc(inst, seed=seed, budget=config.budget,
                                rounding_samples=config.rounding_samples))
        refined = inst if inst.refined else refine(inst)
        wide = build_cnf(refined, ReductionParams.for_instance(refined, t=args.t))
        report.extend(verify_artifact(wide))
        report.extend(verify_phi_f(wide, max_clauses=config.equiv_max_clauses))
        cubified = build_3cnf(refined, t=args.t)
        report.extend(verify_artifact(cubified))
    else:
        raise InputError("verify expects Horn or LC input")
    _report(io, config, text, report.to_json_dict())
    return 0 if report.ok else 1


def cmd_stats(io, args, config):
    text = io.read_input(args.input)
    cnf = parse_horn(text, allow_unit=True)
    _report(io, config, text, {
        "variables": len(cnf.registry),
        "clauses": cnf.clause_count,
        "literals": cnf.literal_count,
        "degree_histogram": {str(k): v for k, v in sorted(degree_histogram(cnf).items())},
    })
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hornforge",
        description="pure Horn function toolkit: chaining, reduction gadgets, exact minimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--input", "-i", default=None, help="input file (default stdin)")
        return p

    p = add("lc-gen", cmd_lc_gen, help="generate a label-cover instance")
    p.add_argument("kind", choices=["claw", "random", "biregular", "sat2lc"])
    p.add_argument("--seed", type=int, default=None)

    add("lc-refine", cmd_lc_refine, help="per-vertex private label copies")

    add("lc-solve", cmd_lc_solve, help="exact optimal tight total-cover")

    p = add("lc-tighten", cmd_lc_tighten, help="drop surplus y-labels of a total-cover")
    p.add_argument("--labeling", required=True)

    p = add("lc-round", cmd_lc_round, help="randomized cover-to-packing rounding")
    p.add_argument("--labeling", required=True)
    p.add_argument("--seed", type=int, required=True)

    for name, kind in (("reduce-cnf", "cnf"), ("reduce-3cnf", "3cnf")):
        p = add(name, lambda io, a, c, k=kind: cmd_reduce(io, a, c, k),
                help=f"build the canonical {kind} formula from a refined instance")
        p.add_argument("--t", type=int, default=1)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--allow-d-override", action="store_true")
        p.add_argument("--sidecar", default=None, help="write a JSON sidecar here")

    p = add("fc", cmd_fc, help="forward chaining closure of a query set")
    p.add_argument("--query", action="append", required=True,
                   help="variable names (comma or space separated; repeatable)")

    p = add("check-equiv", cmd_check_equiv, help="polynomial equivalence of two formulas")
    p.add_argument("first")
    p.add_argument("second", nargs="?", default="-")

    add("minimize", cmd_minimize, help="prime + irredundant heuristic reduction")

    add("minimize-exact", cmd_minimize_exact, help="exact clause/literal minima (tiny inputs)")

    p = add("extract-cover", cmd_extract_cover, help="read covers off a representation")
    p.add_argument("--instance", required=True, help="refined LC instance file")
    p.add_argument("--kind", choices=["cnf", "3cnf"], default="cnf")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--allow-d-override", action="store_true")
    p.add_argument("rep", nargs="?", default="-", help="representation file (default stdin)")

    p = add("verify", cmd_verify, help="run the invariant suite on LC or Horn input")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--rounding-samples", type=int, default=0)

    add("stats", cmd_stats, help="clause/literal/degree statistics")
    return parser


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    io = _IO(stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        command=args.command,
        seed=getattr(args, "seed", None),
        t=getattr(args, "t", None),
        d_override=getattr(args, "d", None),
        rounding_samples=getattr(args, "rounding_samples", 0),
    )
    try:
        config.apply_env()
        return args.fn(io, args, config)
    except InputError as exc:
        print(f"hornforge: input error: {exc}", file=io.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"hornforge: resource limit: {exc}", file=io.stderr)
        return 3


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
