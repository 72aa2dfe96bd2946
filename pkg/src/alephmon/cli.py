"""Command line front end.

Exit status: 0 realizable / true, 1 not realizable / false, 2 inconclusive,
64 usage or input error.  ``--json`` prints a verdict document (see
``schema/verdict.schema.json``); output is deterministic for a fixed input
and bound.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .analysis import Type2, add_member, classify, is_refinement
from .braiding import BraidingError, find_braiding, telescope
from .congruence import GridError, Presentation, build_oracle
from .dsl import (
    DslError,
    parse_family,
    parse_monoid,
    parse_sgraph,
    parse_wgraph,
    render_form,
    render_monoid,
)
from .forms import Form, family_sum
from .graphs import (
    GraphError,
    SeparatedGraph,
    WeightedGraph,
    check_adaptable,
    is_acyclic,
    is_vnr_weighted,
    separated_monoid,
    two_vertex_case,
    weighted_monoid,
    well_behaved,
)
from .realization import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    Condition,
    Verdict,
    check_hereditary,
    check_vnr,
    check_weighted_lpa,
)

EXIT_OK, EXIT_FALSE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
SCHEMA_ID = "alephmon.verdict/1"

_EXIT = {
    Verdict.REALIZABLE.value: EXIT_OK,
    Verdict.NOT_REALIZABLE.value: EXIT_FALSE,
    Verdict.INCONCLUSIVE.value: EXIT_INCONCLUSIVE,
    "true": EXIT_OK,
    "false": EXIT_FALSE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class VerdictDocument:
    command: str
    input: dict
    bound: int | None
    conditions: list
    verdict: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "command": self.command,
            "input": self.input,
            "bound": self.bound,
            "conditions": [c.to_json() for c in self.conditions],
            "verdict": self.verdict,
            "details": self.details,
            "tool": {"name": "alephmon", "version": __version__},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @property
    def exit_code(self) -> int:
        return _EXIT.get(self.verdict, EXIT_OK)


# -- input ----------------------------------------------------------------------

@dataclass
class _Input:
    path: str
    text: str
    kind: str

    def meta(self) -> dict:
        digest = hashlib.sha256(self.text.encode("utf-8")).hexdigest()
        return {"file": os.path.basename(self.path), "format": self.kind, "sha256": digest}


def _kind(path: str, text: str) -> str:
    ext = os.path.splitext(path)[1].lstrip(".")
    if ext in ("monoid", "wgraph", "sgraph"):
        return ext
    for raw in text.splitlines():
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        if words[0] == "generators":
            return "monoid"
        break
    return "sgraph" if any(l.split()[:1] == ["group"] for l in text.splitlines()) else "wgraph"


def _read(path: str) -> _Input:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return _Input(path, text, _kind(path, text))


def _graph(inp: _Input):
    if inp.kind == "wgraph":
        return parse_wgraph(inp.text)
    if inp.kind == "sgraph":
        return parse_sgraph(inp.text)
    raise UsageError(f"{inp.path} is a monoid file; a graph is required")


def _graph_presentation(g) -> Presentation:
    return weighted_monoid(g) if isinstance(g, WeightedGraph) else separated_monoid(g)


def _presentation(inp: _Input, bound: int) -> Presentation:
    p = parse_monoid(inp.text) if inp.kind == "monoid" else _graph_presentation(_graph(inp))
    if p.max_coefficient > bound:
        raise UsageError(f"relation coefficient {p.max_coefficient} exceeds --bound {bound}")
    return p


# -- commands -------------------------------------------------------------------

def _doc_from_report(command, inp, rep) -> VerdictDocument:
    return VerdictDocument(command, inp.meta(), rep.bound, rep.conditions, str(rep.verdict), rep.details)


def cmd_classify(args, inp) -> VerdictDocument:
    p = _presentation(inp, args.bound)
    o = build_oracle(p, args.bound)
    cls = classify(o)
    n = p.names
    conds = []
    details = {"classification": cls.label}
    if cls.label == "Cyclic":
        details["generator"] = n[cls.generator]
        alpha = cls.alpha
        conds.append(Condition(
            "cyclic", PASS, o.bound,
            {"relation": f"{n[cls.dependent]} = {render_form(Form.unit(2, cls.generator, alpha), n)}"},
        ))
    else:
        x1, x2 = p.generator(0), p.generator(1)
        for a, b in ((0, 1), (1, 0)):
            inside = add_member(o, (x1, x2)[a], (x1, x2)[b])
            conds.append(Condition(f"{n[a]} in add({n[b]})", PASS if inside else FAIL, o.bound))
        if isinstance(cls, Type2):
            details["direction"] = f"{n[cls.i]} in add({n[cls.j]})"
    return VerdictDocument("classify", inp.meta(), o.bound, conds, cls.label, details)


def _monoid_check(name, fn):
    def run(args, inp):
        o = build_oracle(_presentation(inp, args.bound), args.bound)
        return _doc_from_report(f"check {name}", inp, fn(args, o))
    return run


def cmd_refinement(args, inp) -> VerdictDocument:
    o = build_oracle(_presentation(inp, args.bound), args.bound)
    res = is_refinement(o)
    names = o.presentation.names
    if res:
        cond = Condition("refinement", PASS, o.bound, {"box": str(o.bound // 2)})
    else:
        a, b, c, d = (render_form(f, names) for f in res.counterexample)
        cond = Condition(
            "refinement", FAIL, o.bound, {"a": a, "b": b, "c": c, "d": d},
            "a + b = c + d has no refinement square",
        )
    verdict = "true" if res else "false"
    return VerdictDocument("check refinement", inp.meta(), o.bound, [cond], verdict)


def _flat(w) -> str:
    return "; ".join(",".join(x) if isinstance(x, tuple) else str(x) for x in w)


def cmd_well_behaved(args, inp) -> VerdictDocument:
    g = _graph(inp)
    if not isinstance(g, WeightedGraph):
        raise UsageError("well-behaved needs a weighted graph (.wgraph)")
    rep = well_behaved(g, args.path_bound)
    conds = []
    for name, flag in rep.flags.items():
        status = PASS if flag.holds else FAIL
        if flag.holds and flag.semidecided:
            status = INCONCLUSIVE
        witness = {"witness": _flat(flag.witness)} if flag.witness else {}
        conds.append(Condition(name, status, args.path_bound, witness,
                               "path search cut at the bound" if flag.semidecided else ""))
    statuses = {c.status for c in conds}
    verdict = "false" if FAIL in statuses else ("Inconclusive" if INCONCLUSIVE in statuses else "true")
    details = {"acyclic": is_acyclic(g), "vnr": is_vnr_weighted(g)}
    return VerdictDocument("check well-behaved", inp.meta(), None, conds, verdict, details)


def cmd_adaptable(args, inp) -> VerdictDocument:
    g = _graph(inp)
    if not isinstance(g, SeparatedGraph):
        raise UsageError("adaptable needs a separated graph (.sgraph)")
    rep = check_adaptable(g)
    details = {
        "components": [list(c) for c in rep.components],
        "order": [[rep.components[a][0], rep.components[b][0]] for a, b in rep.order],
        "assignment": {",".join(rep.components[p]): lab for p, lab in sorted(rep.assignment.items())},
        "borderline": list(rep.borderline),
    }
    if len(g.vertices) == 2:
        details["case"] = two_vertex_case(g)
    verdict = "true" if rep.adaptable else "false"
    return VerdictDocument("check adaptable", inp.meta(), None, rep.conditions, verdict, details)


def cmd_graph_monoid(args, inp) -> VerdictDocument:
    p = _graph_presentation(_graph(inp))
    details = {"presentation": render_monoid(p)}
    return VerdictDocument("graph-monoid", inp.meta(), None, [], "true", details)


def cmd_braid(args, inp) -> VerdictDocument:
    p = _presentation(inp, args.bound)
    o = build_oracle(p, args.bound)
    x = parse_family(args.x, p.names)
    y = parse_family(args.y, p.names)
    meta = inp.meta()
    meta["x"], meta["y"] = args.x, args.y
    details = {"sum_x": render_form(family_sum(x), p.names), "sum_y": render_form(family_sum(y), p.names)}
    try:
        cert = find_braiding(o, x, y, horizon=args.horizon)
    except BraidingError as e:
        cond = Condition("equal sums", FAIL, o.bound, {}, str(e))
        return VerdictDocument("braid", meta, o.bound, [cond], "false", details)
    conds = [Condition("equal sums", PASS, o.bound)]
    if cert is None:
        conds.append(Condition(
            "certificate", INCONCLUSIVE, o.bound, {"horizon": str(args.horizon)},
            "no periodic certificate within the horizon",
        ))
        return VerdictDocument("braid", meta, o.bound, conds, "Inconclusive", details)
    conds.append(Condition("certificate", PASS, o.bound))
    details["certificate"] = cert.to_json()
    details["telescoped"] = render_form(telescope(o, cert), p.names)
    return VerdictDocument("braid", meta, o.bound, conds, "true", details)


CHECKS = {
    "hereditary": _monoid_check("hereditary", lambda a, o: check_hereditary(o)),
    "vnr": _monoid_check("vnr", lambda a, o: check_vnr(o, strict_positive_m=a.strict_positive_m)),
    "refinement": cmd_refinement,
    "weighted-lpa": _monoid_check("weighted-lpa", lambda a, o: check_weighted_lpa(o)),
    "well-behaved": cmd_well_behaved,
    "adaptable": cmd_adaptable,
}


# -- output ---------------------------------------------------------------------

def render_text(doc: VerdictDocument) -> str:
    head = f"{doc.command} {doc.input['file']}"
    if doc.bound is not None:
        head += f" (bound {doc.bound})"
    lines = [head]
    width = max((len(c.id) for c in doc.conditions), default=0)
    for c in doc.conditions:
        line = f"  {c.id.ljust(width)}  {c.status}"
        if c.witness:
            line += "  " + " ".join(f"{k}={v}" for k, v in c.witness.items())
        if c.note:
            line += f"  -- {c.note}"
        lines.append(line)
    for k in sorted(doc.details):
        v = doc.details[k]
        if isinstance(v, str) and "\n" in v:
            lines.append(f"{k}:")
            lines.extend("  " + l for l in v.rstrip("\n").splitlines())
        else:
            lines.append(f"{k}: {json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v}")
    lines.append(f"verdict: {doc.verdict}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--bound", type=int, default=10, help="grid bound B (default 10)")
    common.add_argument("--json", action="store_true", help="emit a JSON verdict document")

    ap = _Parser(
        prog="alephmon",
        description="Bounded realizability checks for presented monoids and graph monoids.",
        epilog="exit status: 0 realizable/true, 1 not realizable/false, 2 inconclusive, 64 usage error",
    )
    ap.add_argument("--version", action="version", version=f"alephmon {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="type of a two-generated monoid")
    p.add_argument("file")

    p = sub.add_parser("check", parents=[common], help="run a realizability or graph check")
    p.add_argument("check", choices=sorted(CHECKS))
    p.add_argument("file")
    p.add_argument("--strict-positive-m", action="store_true",
                   help="vnr: require m ≥ 1 in the shift clause")
    p.add_argument("--path-bound", type=int, default=None,
                   help="well-behaved: cap path length in the W2 search")

    p = sub.add_parser("graph-monoid", parents=[common], help="print the monoid of a graph")
    p.add_argument("file")

    p = sub.add_parser("braid", parents=[common], help="search a braiding certificate")
    p.add_argument("file")
    p.add_argument("--x", required=True, help="family '<form>, ... ; <tail>'")
    p.add_argument("--y", required=True, help="family '<form>, ... ; <tail>'")
    p.add_argument("--horizon", type=int, default=20)
    return ap


def run(argv) -> tuple:
    """Returns (exit status, stdout text, stderr text)."""
    try:
        args = build_parser().parse_args(argv)
        if args.bound < 1:
            raise UsageError("--bound must be positive")
        inp = _read(args.file)
        if args.command == "classify":
            doc = cmd_classify(args, inp)
        elif args.command == "check":
            doc = CHECKS[args.check](args, inp)
        elif args.command == "graph-monoid":
            doc = cmd_graph_monoid(args, inp)
        else:
            doc = cmd_braid(args, inp)
    except DslError as e:
        return EXIT_USAGE, "", f"alephmon: parse error at {e}\n"
    except (UsageError, GraphError, GridError, ValueError) as e:
        return EXIT_USAGE, "", f"alephmon: {e}\n"
    out = doc.dumps() if args.json else render_text(doc)
    return doc.exit_code, out, ""


def main(argv=None) -> int:
    try:
        code, out, err = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
