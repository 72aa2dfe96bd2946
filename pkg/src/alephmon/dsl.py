"""Text formats for presentations, weighted graphs, separated graphs and families.

    generators x1 x2
    relation 2*x1 + 1*x2 = 1*x1 + 2*x2

    vertices u v
    edge a : u -> v weight 2

    vertices u v
    edge g : u -> u
    edge b : u -> v
    group u : {g,b}

``w`` stands for ω.  ``#`` starts a comment.  Every error carries the line
and column of the offending token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .congruence import Presentation, PresentationError
from .forms import FamilySpec, Form, form_sum, format_ext_nat, parse_ext_nat
from .graphs import Edge, GraphError, SeparatedGraph, WeightedGraph


class DslError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(->|[A-Za-z_][A-Za-z0-9_']*|\d+|[*+=:{},;]|\S)")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokens(text: str, line: int, offset: int = 0) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        out.append(_Tok(m.group(1), line, offset + m.start(1) + 1))
        pos = m.end()
    return out


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body, n)
        if toks:
            yield n, toks


class _Cursor:
    def __init__(self, toks: list, line: int):
        self.toks = toks
        self.i = 0
        self.line = line

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str) -> _Tok:
        t = self.peek()
        if t is None:
            end = self.toks[-1].col + len(self.toks[-1].text) if self.toks else 1
            raise DslError(f"expected {what}, got end of line", self.line, end)
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next(repr(text))
        if t.text != text:
            raise DslError(f"expected {text!r}, got {t.text!r}", t.line, t.col)
        return t

    def done(self) -> None:
        t = self.peek()
        if t is not None:
            raise DslError(f"unexpected {t.text!r}", t.line, t.col)


def _is_name(s: str) -> bool:
    return re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", s) is not None


def _names(cur: _Cursor, what: str) -> tuple:
    names = []
    seen = set()
    while cur.peek() is not None:
        t = cur.next(what)
        if not _is_name(t.text):
            raise DslError(f"malformed {what} name {t.text!r}", t.line, t.col)
        if t.text in seen:
            raise DslError(f"duplicate {what} name {t.text!r}", t.line, t.col)
        seen.add(t.text)
        names.append(t.text)
    if not names:
        raise DslError(f"no {what} names given", cur.line, 1)
    return tuple(names)


# -- forms ---------------------------------------------------------------------------

def _coeff(t: _Tok):
    try:
        return parse_ext_nat(t.text)
    except ValueError:
        raise DslError(f"malformed coefficient {t.text!r}", t.line, t.col) from None


def _side(cur: _Cursor, names: tuple, stop: set) -> Form:
    """``term (+ term)*`` or ``0``; stops before any token in ``stop``."""
    k = len(names)
    t = cur.peek()
    if t is not None and t.text == "0":
        nxt = cur.toks[cur.i + 1] if cur.i + 1 < len(cur.toks) else None
        if nxt is None or nxt.text in stop:
            cur.next("0")
            return Form.zero(k)
    terms = []
    while True:
        c = _coeff(cur.next("coefficient"))
        cur.expect("*")
        g = cur.next("generator")
        if g.text not in names:
            raise DslError(f"unknown generator {g.text}", g.line, g.col)
        terms.append(Form.unit(k, names.index(g.text), c))
        t = cur.peek()
        if t is None or t.text in stop:
            return form_sum(terms, k)
        if t.text != "+":
            want = " or ".join(repr(x) for x in ["+", *sorted(stop)])
            raise DslError(f"expected {want}, got {t.text!r}", t.line, t.col)
        cur.next("+")


def parse_form(text: str, names, line: int = 1, offset: int = 0) -> Form:
    cur = _Cursor(_tokens(text, line, offset), line)
    f = _side(cur, tuple(names), set())
    cur.done()
    return f


def render_form(f: Form, names) -> str:
    terms = [f"{format_ext_nat(c, ascii=True)}*{n}" for c, n in zip(f, names) if c != 0]
    return " + ".join(terms) if terms else "0"


# -- monoids -------------------------------------------------------------------------

def parse_monoid(text: str) -> Presentation:
    names = None
    rels = []
    for n, toks in _lines(text):
        cur = _Cursor(toks, n)
        head = cur.next("keyword")
        if head.text == "generators":
            if names is not None:
                raise DslError("generators declared twice", n, head.col)
            names = _names(cur, "generator")
        elif head.text == "relation":
            if names is None:
                raise DslError("relation before the generators line", n, head.col)
            lhs = _side(cur, names, {"="})
            cur.expect("=")
            rhs = _side(cur, names, set())
            cur.done()
            rels.append((lhs, rhs))
        else:
            raise DslError(f"unknown keyword {head.text!r}", n, head.col)
    if names is None:
        raise DslError("missing generators line", 1, 1)
    try:
        return Presentation(len(names), tuple(rels), names)
    except PresentationError as e:
        raise DslError(str(e), 1, 1) from None


def render_monoid(p: Presentation) -> str:
    return p.render()


# -- graphs --------------------------------------------------------------------------

def _int(t: _Tok, what: str) -> int:
    if not t.text.isdigit():
        raise DslError(f"malformed {what} {t.text!r}", t.line, t.col)
    return int(t.text)


def _graph_lines(text: str, weighted: bool):
    vertices = None
    edges = []
    groups: dict = {}
    where: dict = {}
    for n, toks in _lines(text):
        cur = _Cursor(toks, n)
        head = cur.next("keyword")
        if head.text == "vertices":
            if vertices is not None:
                raise DslError("vertices declared twice", n, head.col)
            vertices = _names(cur, "vertex")
            continue
        if vertices is None:
            raise DslError(f"{head.text} before the vertices line", n, head.col)
        if head.text == "edge":
            eid = cur.next("edge id")
            cur.expect(":")
            src = cur.next("source")
            cur.expect("->")
            dst = cur.next("range")
            for t in (src, dst):
                if t.text not in vertices:
                    raise DslError(f"dangling endpoint {t.text}", t.line, t.col)
            weight = 1
            if cur.peek() is not None:
                kw = cur.expect("weight")
                if not weighted:
                    raise DslError("separated graphs carry no weights", n, kw.col)
                weight = _int(cur.next("weight"), "weight")
                if weight < 1:
                    raise DslError("weights are positive", n, kw.col)
            cur.done()
            if eid.text in where:
                raise DslError(f"duplicate edge id {eid.text}", n, eid.col)
            where[eid.text] = (n, eid.col)
            edges.append(Edge(eid.text, src.text, dst.text, weight))
        elif head.text == "group" and not weighted:
            v = cur.next("vertex")
            if v.text not in vertices:
                raise DslError(f"unknown vertex {v.text}", n, v.col)
            cur.expect(":")
            cur.expect("{")
            block = []
            while True:
                e = cur.next("edge id")
                block.append((e.text, n, e.col))
                sep = cur.next("',' or '}'")
                if sep.text == "}":
                    break
                if sep.text != ",":
                    raise DslError(f"expected ',' or '}}', got {sep.text!r}", n, sep.col)
            cur.done()
            groups.setdefault(v.text, []).append(block)
        else:
            raise DslError(f"unknown keyword {head.text!r}", n, head.col)
    if vertices is None:
        raise DslError("missing vertices line", 1, 1)
    return vertices, edges, groups, where


def parse_wgraph(text: str) -> WeightedGraph:
    vertices, edges, _, where = _graph_lines(text, weighted=True)
    try:
        return WeightedGraph(vertices, tuple(edges))
    except GraphError as e:
        raise DslError(str(e), 1, 1) from None


def parse_sgraph(text: str) -> SeparatedGraph:
    vertices, edges, groups, where = _graph_lines(text, weighted=False)
    by_id = {e.id: e for e in edges}
    seen = {}
    for v, blocks in groups.items():
        for block in blocks:
            for eid, n, col in block:
                e = by_id.get(eid)
                if e is None:
                    raise DslError(f"unknown edge {eid}", n, col)
                if e.source != v:
                    raise DslError(f"edge {eid} leaves {e.source}, not {v}", n, col)
                if eid in seen:
                    raise DslError(f"edge {eid} lies in two groups", n, col)
                seen[eid] = v
    for e in edges:
        if e.id not in seen:
            n, col = where[e.id]
            raise DslError(f"edge {e.id} is in no group of {e.source}", n, col)
    plain = tuple((v, tuple(tuple(eid for eid, _, _ in b) for b in bs)) for v, bs in groups.items())
    try:
        return SeparatedGraph(vertices, tuple(edges), plain)
    except GraphError as e:
        raise DslError(str(e), 1, 1) from None


def _render_edges(g, weighted: bool) -> list:
    lines = ["vertices " + " ".join(g.vertices)]
    for e in g.edges:
        tail = f" weight {e.weight}" if weighted else ""
        lines.append(f"edge {e.id} : {e.source} -> {e.range}{tail}")
    return lines


def render_wgraph(g: WeightedGraph) -> str:
    return "\n".join(_render_edges(g, True)) + "\n"


def render_sgraph(g: SeparatedGraph) -> str:
    lines = _render_edges(g, False)
    for v, blocks in g.groups:
        for b in blocks:
            lines.append(f"group {v} : {{{','.join(b)}}}")
    return "\n".join(lines) + "\n"


# -- families ------------------------------------------------------------------------

def parse_family(text: str, names) -> FamilySpec:
    """``<form>, <form>, ... ; <tail form>`` -- the prefix may be empty."""
    names = tuple(names)
    if text.count(";") != 1:
        col = text.find(";", text.find(";") + 1) + 1 if ";" in text else len(text) + 1
        raise DslError("a family needs exactly one ';' before its tail", 1, col)
    head, tail = text.split(";")
    prefix = []
    offset = 0
    if head.strip():
        for part in head.split(","):
            if not part.strip():
                raise DslError("empty family element", 1, offset + 1)
            prefix.append(parse_form(part, names, 1, offset))
            offset += len(part) + 1
    tail_off = len(head) + 1
    if not tail.strip():
        raise DslError("missing tail form", 1, tail_off + 1)
    return FamilySpec(tuple(prefix), parse_form(tail, names, 1, tail_off))


def render_family(f: FamilySpec, names) -> str:
    head = ", ".join(render_form(p, names) for p in f.prefix)
    return f"{head} ; {render_form(f.tail, names)}" if head else f"; {render_form(f.tail, names)}"
