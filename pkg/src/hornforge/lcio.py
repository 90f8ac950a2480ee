"""Label-cover text and JSON formats, plus the labeling JSON format.

Text layout::

    X: x1 x2 x3
    Y: y1
    LX: l1 l2              # shared pool; refined files use per-vertex lines
    LY: p1 p2              # e.g.  LX x1: x1.l1 x1.l2
    E:
    x1 y1
    PI x1 y1:
    l1 p1

'#' comments and blank lines are ignored.  Printing is canonical (edges and
pairs sorted), so parse/print round-trips are byte-stable.
"""

import json

from .errors import InputError
from .labelcover import Labeling, LCInstance

LC_SCHEMA = "hornforge.lc/1"
LABELING_SCHEMA = "hornforge.labeling/1"


def print_lc(inst: LCInstance) -> str:
    lines = ["X: " + " ".join(inst.x_names), "Y: " + " ".join(inst.y_names)]
    if inst.refined:
        for x in inst.x_names:
            lines.append(f"LX {x}: " + " ".join(inst.labels_x[x]))
        for y in inst.y_names:
            lines.append(f"LY {y}: " + " ".join(inst.labels_y[y]))
    else:
        lines.append("LX: " + " ".join(inst.labels_x[inst.x_names[0]]))
        lines.append("LY: " + " ".join(inst.labels_y[inst.y_names[0]]))
    lines.append("E:")
    for x, y in inst.edges:
        lines.append(f"{x} {y}")
    for x, y in inst.edges:
        lines.append(f"PI {x} {y}:")
        pairs = sorted(
            inst.constraints[(x, y)],
            key=lambda p: (inst.label_index_x(x, p[0]), inst.label_index_y(y, p[1])),
        )
        for a, b in pairs:
            lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def parse_lc(text: str) -> LCInstance:
    x_names = y_names = None
    lx_shared = ly_shared = None
    lx_per: dict = {}
    ly_per: dict = {}
    edges: list = []
    constraints: dict = {}
    section = None
    current_edge = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        def fail(msg):
            raise InputError(f"line {lineno}: {msg}")

        if line.startswith("X:"):
            x_names = tuple(line[2:].split())
            section = None
        elif line.startswith("Y:"):
            y_names = tuple(line[2:].split())
            section = None
        elif line.startswith("LX:"):
            lx_shared = tuple(line[3:].split())
            section = None
        elif line.startswith("LY:"):
            ly_shared = tuple(line[3:].split())
            section = None
        elif line.startswith("LX "):
            head, _, rest = line.partition(":")
            parts = head.split()
            if len(parts) != 2 or not rest.strip():
                fail("expected 'LX <vertex>: <labels>'")
            lx_per[parts[1]] = tuple(rest.split())
            section = None
        elif line.startswith("LY "):
            head, _, rest = line.partition(":")
            parts = head.split()
            if len(parts) != 2 or not rest.strip():
                fail("expected 'LY <vertex>: <labels>'")
            ly_per[parts[1]] = tuple(rest.split())
            section = None
        elif line == "E:":
            section = "E"
        elif line.startswith("PI "):
            head, _, rest = line.partition(":")
            parts = head.split()
            if len(parts) != 3 or rest.strip():
                fail("expected 'PI <x> <y>:'")
            current_edge = (parts[1], parts[2])
            constraints.setdefault(current_edge, set())
            section = "PI"
        elif section == "E":
            parts = line.split()
            if len(parts) != 2:
                fail("edge lines are '<x> <y>'")
            edges.append((parts[0], parts[1]))
        elif section == "PI":
            parts = line.split()
            if len(parts) != 2:
                fail("constraint lines are '<x-label> <y-label>'")
            constraints[current_edge].add((parts[0], parts[1]))
        else:
            fail(f"unexpected content {line!r}")

    if x_names is None or y_names is None:
        raise InputError("missing X: or Y: section")
    refined = bool(lx_per or ly_per)
    if refined and (lx_shared or ly_shared):
        raise InputError("mix of shared and per-vertex label sections")
    if refined:
        x_labels, y_labels = lx_per, ly_per
        missing = (set(x_names) - set(lx_per)) | (set(y_names) - set(ly_per))
        if missing:
            raise InputError(f"missing per-vertex label lines for {sorted(missing)}")
    else:
        if lx_shared is None or ly_shared is None:
            raise InputError("missing LX: or LY: section")
        x_labels, y_labels = lx_shared, ly_shared
    return LCInstance(x_names, y_names, x_labels, y_labels, edges, constraints, refined=refined)


def lc_to_json_dict(inst: LCInstance) -> dict:
    return {
        "schema": LC_SCHEMA,
        "refined": inst.refined,
        "x": list(inst.x_names),
        "y": list(inst.y_names),
        "labels_x": {x: list(inst.labels_x[x]) for x in inst.x_names},
        "labels_y": {y: list(inst.labels_y[y]) for y in inst.y_names},
        "edges": [[x, y] for x, y in inst.edges],
        "constraints": {
            f"{x} {y}": sorted(
                [list(p) for p in inst.constraints[(x, y)]],
                key=lambda p: (inst.label_index_x(x, p[0]), inst.label_index_y(y, p[1])),
            )
            for x, y in inst.edges
        },
    }


def lc_from_json_dict(data: dict) -> LCInstance:
    if data.get("schema") != LC_SCHEMA:
        raise InputError(f"expected schema {LC_SCHEMA}")
    constraints = {}
    for key, pairs in data["constraints"].items():
        x, _, y = key.partition(" ")
        constraints[(x, y)] = {tuple(p) for p in pairs}
    return LCInstance(
        tuple(data["x"]),
        tuple(data["y"]),
        {k: tuple(v) for k, v in data["labels_x"].items()},
        {k: tuple(v) for k, v in data["labels_y"].items()},
        [tuple(e) for e in data["edges"]],
        constraints,
        refined=data["refined"],
    )


def labeling_to_json_dict(f: Labeling) -> dict:
    return {
        "schema": LABELING_SCHEMA,
        "x": {v: sorted(labels) for v, labels in sorted(f.x.items())},
        "y": {v: sorted(labels) for v, labels in sorted(f.y.items())},
    }


def labeling_from_json_dict(data: dict) -> Labeling:
    if data.get("schema") != LABELING_SCHEMA:
        raise InputError(f"expected schema {LABELING_SCHEMA}")
    return Labeling(
        x={v: frozenset(labels) for v, labels in data.get("x", {}).items()},
        y={v: frozenset(labels) for v, labels in data.get("y", {}).items()},
    )


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
