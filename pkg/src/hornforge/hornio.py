"""Horn CNF text format.

    vars: <n>
    # names: v1 v2 ... vn        (optional, pins ids for round-trips)
    name1 & name2 -> name3
    -> name4                     (unit clause; only with allow_unit)

'#' starts a comment and blank lines are ignored.  The printer always emits
the names comment so that parse(print(cnf)) reproduces the registry exactly,
including variables that occur in no clause; print is then byte-stable under
round-trips.  Hand-written files may omit the comment, in which case ids
follow first occurrence and every declared variable must occur.
"""

from .errors import InputError
from .horn import PureHornCNF, VarRegistry


def print_horn(cnf: PureHornCNF) -> str:
    lines = [f"vars: {len(cnf.registry)}"]
    if cnf.registry.names:
        lines.append("# names: " + " ".join(cnf.registry.names))
    lines.extend(cnf.format_clause(c) for c in cnf.clauses)
    return "\n".join(lines) + "\n"


def parse_horn(text: str, allow_unit: bool = False) -> PureHornCNF:
    declared = None
    names = None
    clause_specs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("# names:"):
            if clause_specs:
                raise InputError(f"line {lineno}: names comment must precede clauses")
            names = line[len("# names:") :].split()
            continue
        if not line or line.startswith("#"):
            continue
        if declared is None:
            if not line.startswith("vars:"):
                raise InputError(f"line {lineno}: expected 'vars: <n>' header")
            try:
                declared = int(line[len("vars:") :].strip())
            except ValueError:
                raise InputError(f"line {lineno}: bad variable count") from None
            if declared < 0:
                raise InputError(f"line {lineno}: negative variable count")
            continue
        if "->" not in line:
            raise InputError(f"line {lineno}: clause is missing '->'")
        lhs, _, rhs = line.partition("->")
        head = rhs.strip()
        if not head or " " in head:
            raise InputError(f"line {lineno}: clause needs exactly one head variable")
        body = [tok.strip() for tok in lhs.split("&")] if lhs.strip() else []
        if any(not tok for tok in body):
            raise InputError(f"line {lineno}: empty body literal")
        clause_specs.append((lineno, body, head))
    if declared is None:
        raise InputError("missing 'vars: <n>' header")

    registry = VarRegistry(names or ())
    if names is not None and len(registry) != len(names):
        raise InputError("names comment lists a duplicate variable")
    cnf = PureHornCNF(registry, allow_unit=allow_unit)
    for lineno, body, head in clause_specs:
        if names is not None:
            for tok in body + [head]:
                if tok not in registry:
                    raise InputError(f"line {lineno}: variable {tok!r} not in names list")
        try:
            cnf.add_named(body, head)
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if len(registry) != declared:
        raise InputError(
            f"header declares {declared} variables but {len(registry)} are known; "
            "add a '# names:' line for variables that occur in no clause"
        )
    return cnf


def sniff_format(text: str) -> str:
    """Classify pipeline input by its first meaningful line."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vars:"):
            return "horn"
        if line.startswith("X:"):
            return "lc"
        if line.startswith("{"):
            return "json"
        break
    raise InputError("unrecognized input format (expected Horn, LC, or JSON header)")
