"""Verdict table for the CLI: (golden name, argv, expected exit status)."""
from __future__ import annotations

MONOIDS = {
    "free": (0, 0, 0, 0, 1),
    "x1-eq-2x2": (0, 0, 0, 0, 0),
    "x2-eq-x1+x2": (0, 0, 0, 0, 1),
    "2x1+x2-eq-x1+2x2": (0, 0, 1, 1, 1),
    "2x1-eq-wx2": (0, 1, 1, 1, 1),
    "x1-eq-x1+x2": (0, 0, 0, 0, 1),
}
MONOID_COMMANDS = (
    ("classify",),
    ("check", "hereditary"),
    ("check", "vnr"),
    ("check", "refinement"),
    ("check", "weighted-lpa"),
)
SGRAPHS = {
    "case-1": 0,
    "case-2i": 0,
    "case-2ii-a1": 0,
    "case-2ii-a2": 0,
    "case-2ii-a3": 0,
    "case-2ii-a4": 0,
    "two-blocks": 1,
}
WGRAPHS = {"weight2-edge": 0, "parallel-edges": 1, "two-loops": 0}
BRAIDS = [
    ("braid-x1-eq-2x2", "x1-eq-2x2.monoid", "1*x1 ; 1*x2", "; 1*x2", 0),
    ("braid-2x1-eq-wx2", "2x1-eq-wx2.monoid", "; 1*x1", "2*x1 ; 1*x2", 2),
    ("braid-free-unequal", "free.monoid", "; 1*x1", "; 1*x2", 1),
]


def table(fixtures):
    rows = []
    for name, codes in MONOIDS.items():
        for cmd, code in zip(MONOID_COMMANDS, codes):
            rows.append((f"{name}.{'-'.join(cmd)}", [*cmd, str(fixtures / f"{name}.monoid")], code))
    for name, code in SGRAPHS.items():
        path = str(fixtures / f"{name}.sgraph")
        rows.append((f"{name}.check-adaptable", ["check", "adaptable", path], code))
        rows.append((f"{name}.graph-monoid", ["graph-monoid", path], 0))
    for name, code in WGRAPHS.items():
        path = str(fixtures / f"{name}.wgraph")
        rows.append((f"{name}.check-well-behaved", ["check", "well-behaved", path], code))
        # mixed out-weights at one vertex have no monoid: input error
        rows.append((f"{name}.graph-monoid", ["graph-monoid", path], 64 if name == "parallel-edges" else 0))
    path = str(fixtures / "weight2-edge.wgraph")
    rows.append(("weight2-edge.check-weighted-lpa", ["check", "weighted-lpa", path], 0))
    for gold, file, x, y, code in BRAIDS:
        rows.append((gold, ["braid", str(fixtures / file), "--x", x, "--y", y], code))
    return rows
