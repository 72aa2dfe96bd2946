"""Weighted and separated graphs, their monoids, and regularity predicates.

Reachability and strongly connected components come from networkx; the
predicates themselves (well-behavedness, adaptability, the two-vertex case
enumeration) are written out here.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .congruence import Presentation
from .forms import Form
from .realization import FAIL, PASS, Condition


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    range: str
    weight: int = 1

    @property
    def weighted(self) -> bool:
        return self.weight >= 2

    @property
    def is_loop(self) -> bool:
        return self.source == self.range


@dataclass(frozen=True)
class _Graph:
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vs = tuple(self.vertices)
        es = tuple(self.edges)
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex names")
        ids = [e.id for e in es]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge identifiers")
        known = set(vs)
        for e in es:
            if e.source not in known or e.range not in known:
                raise GraphError(f"edge {e.id} has a dangling endpoint")
            if e.weight < 1:
                raise GraphError(f"edge {e.id} has weight {e.weight} < 1")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"unknown edge {eid}")

    def out_edges(self, v: str) -> list:
        self._vertex(v)
        return [e for e in self.edges if e.source == v]

    def _vertex(self, v: str) -> str:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v}")
        return v

    def nx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(e.source, e.range, key=e.id)
        return g


@dataclass(frozen=True)
class WeightedGraph(_Graph):
    """Structured edges carry a weight; weight 1 means unweighted."""


@dataclass(frozen=True)
class SeparatedGraph(_Graph):
    """``groups[v]`` partitions the out-edges of ``v`` into blocks of edge ids."""

    groups: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        groups = {v: tuple(tuple(b) for b in blocks) for v, blocks in dict(self.groups).items()}
        seen = {}
        for v, blocks in groups.items():
            self._vertex(v)
            for block in blocks:
                if not block:
                    raise GraphError(f"empty group at {v}")
                for eid in block:
                    e = self.edge(eid)
                    if e.source != v:
                        raise GraphError(f"edge {eid} in a group of {v} but leaves {e.source}")
                    if eid in seen:
                        raise GraphError(f"edge {eid} lies in two groups")
                    seen[eid] = v
        for e in self.edges:
            if e.id not in seen:
                raise GraphError(f"edge {e.id} is in no group of {e.source}")
        ordered = tuple((v, groups[v]) for v in self.vertices if v in groups and groups[v])
        object.__setattr__(self, "groups", ordered)

    def blocks(self, v: str) -> tuple:
        return dict(self.groups).get(self._vertex(v), ())


# -- monoids -------------------------------------------------------------------------

def _unit(g: _Graph, v: str, c: int = 1) -> Form:
    return Form.unit(len(g.vertices), g.vertices.index(v), c)


def _ranges(g: _Graph, edges) -> Form:
    total = Form.zero(len(g.vertices))
    for e in edges:
        total = total + _unit(g, e.range)
    return total


def weighted_monoid(g: WeightedGraph) -> Presentation:
    """n_v·v = Σ r(α) for every emitting vertex, n_v the common out-weight."""
    rels = []
    for v in g.vertices:
        out = g.out_edges(v)
        if not out:
            continue
        weights = sorted({e.weight for e in out})
        if len(weights) > 1:
            raise GraphError(f"vertex {v} emits edges of {len(weights)} different weights {weights}")
        rels.append((_unit(g, v, weights[0]), _ranges(g, out)))
    return Presentation(len(g.vertices), tuple(rels), g.vertices)


def separated_monoid(g: SeparatedGraph) -> Presentation:
    """a_v = Σ_{e ∈ X} a_{r(e)} for every block X of every C_v."""
    rels = []
    for v, blocks in g.groups:
        for block in blocks:
            rels.append((_unit(g, v), _ranges(g, [g.edge(eid) for eid in block])))
    return Presentation(len(g.vertices), tuple(rels), g.vertices)


# -- reachability ---------------------------------------------------------------------

def is_acyclic(g: _Graph) -> bool:
    return nx.is_directed_acyclic_graph(g.nx())


def tree_of(g: _Graph, v: str) -> frozenset:
    """All vertices reachable from ``v`` by a path of length ≥ 0."""
    g._vertex(v)
    return frozenset(nx.descendants(g.nx(), v) | {v})


def _tree_of_set(g: _Graph, vs) -> frozenset:
    out = set()
    for v in vs:
        out |= tree_of(g, v)
    return frozenset(out)


def in_line(g: _Graph, e: str, f: str) -> bool:
    """Equal, or a path runs from r(e) to s(f) or from r(f) to s(e)."""
    a, b = g.edge(e), g.edge(f)
    return a == b or b.source in tree_of(g, a.range) or a.source in tree_of(g, b.range)


def on_cycle(g: _Graph, v: str) -> bool:
    """Some path of length ≥ 1 starts and ends at ``v``."""
    return any(v in tree_of(g, e.range) for e in g.out_edges(v))


# -- well-behaved weighted graphs -----------------------------------------------------------

@dataclass
class FlagResult:
    holds: bool
    witness: tuple = ()
    semidecided: bool = False


@dataclass
class WellBehavedReport:
    flags: dict

    @property
    def holds(self) -> bool:
        return all(f.holds for f in self.flags.values())

    def failing(self) -> list:
        return [k for k, f in self.flags.items() if not f.holds]


def _weighted_tree(g: WeightedGraph) -> frozenset:
    return _tree_of_set(g, {e.range for e in g.edges if e.weighted})


def _path_ends(g: WeightedGraph, first: Edge, path_bound: int | None):
    """(range, last edge id) of every path starting with ``first``.

    Returns the set and whether the length cap cut off any path.
    """
    depth = {first.id: 1}
    queue = deque([first])
    cut = False
    while queue:
        e = queue.popleft()
        for f in g.out_edges(e.range):
            if f.id in depth:
                continue
            if path_bound is not None and depth[e.id] >= path_bound:
                cut = True
                continue
            depth[f.id] = depth[e.id] + 1
            queue.append(f)
    return {(g.edge(eid).range, eid) for eid in depth}, cut


def _w2(g: WeightedGraph, path_bound: int | None) -> FlagResult:
    # a -> a' when some path from a with weighted first letter and some path
    # from a' with unweighted first letter share their range but not their last
    # letter; the condition fails exactly when this relation has a cycle
    cut = False
    ends_w: dict = {v: set() for v in g.vertices}
    ends_u: dict = {v: set() for v in g.vertices}
    for e in g.edges:
        ends, c = _path_ends(g, e, path_bound)
        cut |= c
        (ends_w if e.weighted else ends_u)[e.source] |= ends
    rel = nx.DiGraph()
    rel.add_nodes_from(g.vertices)
    witness = {}
    for a in g.vertices:
        for b in g.vertices:
            for r, last in sorted(ends_w[a]):
                other = next((l2 for r2, l2 in sorted(ends_u[b]) if r2 == r and l2 != last), None)
                if other is not None:
                    rel.add_edge(a, b)
                    witness[(a, b)] = (last, other)
                    break
    try:
        cycle = nx.find_cycle(rel)
    except nx.NetworkXNoCycle:
        return FlagResult(True, semidecided=cut)
    return FlagResult(False, tuple(witness[(a, b)] for a, b in cycle), semidecided=cut)


def well_behaved(g: WeightedGraph, path_bound: int | None = None) -> WellBehavedReport:
    """Conditions LPA1–LPA3, W1, W2.

    W2 is evaluated through the closure of last-edge states, which is exact on
    every finite graph; a ``path_bound`` limits path length and marks the W2
    flag as semidecided when the limit actually cut a path short.
    """
    flags = {}
    bad = [v for v in g.vertices if sum(e.weighted for e in g.out_edges(v)) > 1]
    flags["LPA1"] = FlagResult(not bad, tuple(bad))

    tree = _weighted_tree(g)
    bad = [v for v in g.vertices if v in tree and len(g.out_edges(v)) > 1]
    flags["LPA2"] = FlagResult(not bad, tuple(bad))

    weighted = [e for e in g.edges if e.weighted]
    bad = [
        (e.id, f.id)
        for e, f in itertools.combinations(weighted, 2)
        if not in_line(g, e.id, f.id) and tree_of(g, e.range) & tree_of(g, f.range)
    ]
    flags["LPA3"] = FlagResult(not bad, tuple(bad))

    bad = [v for v in g.vertices if v in tree and on_cycle(g, v)]
    flags["W1"] = FlagResult(not bad, tuple(bad))

    flags["W2"] = _w2(g, path_bound)
    return WellBehavedReport(flags)


def is_vnr_weighted(g: WeightedGraph) -> bool:
    return is_acyclic(g) and well_behaved(g, len(g.vertices)).holds


# -- adaptable separated graphs ----------------------------------------------------------------

@dataclass
class AdaptabilityReport:
    components: list
    order: list
    assignment: dict
    conditions: list = field(default_factory=list)
    borderline: list = field(default_factory=list)
    adaptable: bool = False

    def component_of(self, v: str) -> int:
        return next(i for i, c in enumerate(self.components) if v in c)

    def label_of(self, v: str) -> str:
        return self.assignment[self.component_of(v)]


def _components(g: SeparatedGraph):
    """SCCs in a deterministic order, and the strict order p < q (q reaches p)."""
    graph = g.nx()
    pos = {v: i for i, v in enumerate(g.vertices)}
    comps = [sorted(c, key=pos.get) for c in nx.strongly_connected_components(graph)]
    comps.sort(key=lambda c: pos[c[0]])
    index = {v: i for i, c in enumerate(comps) for v in c}
    less = set()
    for i, c in enumerate(comps):
        for w in tree_of(g, c[0]):
            if index[w] != i:
                less.add((index[w], i))
    return comps, sorted(less)


def _reg_candidate(g: SeparatedGraph, comp: list) -> bool:
    if len(comp) > 1:
        return True
    # loop-rich singletons start out regular; when they fail the |C_v| = 1
    # clause the alternative search below still tries them as free
    (v,) = comp
    return sum(e.is_loop for e in g.out_edges(v)) >= 2


def _check_reg(g, comp, p) -> list:
    inside = set(comp)
    fails = []
    for w in comp:
        if len(g.blocks(w)) != 1:
            fails.append(("(2)", {"vertex": w, "|C_w|": str(len(g.blocks(w)))}, "|C_w| must be 1"))
        internal = sum(e.range in inside for e in g.out_edges(w))
        if internal < 2:
            fails.append(("(2)", {"vertex": w, "internal out-degree": str(internal)},
                          "needs at least two edges inside its component"))
    return fails


def _check_free(g, comp, p, minimal, index) -> tuple:
    fails, notes = [], []
    if len(comp) != 1:
        return [("(1)", {"component": ",".join(comp)}, "a free component is a single vertex")], notes
    (v,) = comp
    out = g.out_edges(v)
    if minimal:
        if out:
            fails.append(("(3)", {"vertex": v}, "a minimal free vertex must be a sink"))
        return fails, notes
    if not out:
        fails.append(("(3)", {"vertex": v}, "a non-minimal free vertex must emit edges"))
        return fails, notes
    for i, block in enumerate(g.blocks(v)):
        es = [g.edge(eid) for eid in block]
        loops = [e.id for e in es if e.is_loop]
        betas = [e for e in es if not e.is_loop]
        if len(loops) != 1 or not betas:
            fails.append((
                "(3)", {"vertex": v, "block": ",".join(block)},
                "each block needs exactly one loop and at least one edge to a lower component",
            ))
            continue
        targets = {index[e.range] for e in betas}
        if len(targets) > 1:
            notes.append(f"block {{{','.join(block)}}} of {v} reaches several lower components")
    return fails, notes


def _evaluate(g, comps, less, assignment) -> tuple:
    index = {v: i for i, c in enumerate(comps) for v in c}
    has_lower = {q for _, q in less}
    fails, notes = [], []
    for p, comp in enumerate(comps):
        if assignment[p] == "reg":
            fails += _check_reg(g, comp, p)
        else:
            f, n = _check_free(g, comp, p, p not in has_lower, index)
            fails += f
            notes += n
    return fails, notes


def check_adaptable(g: SeparatedGraph, max_alternatives: int = 4096) -> AdaptabilityReport:
    comps, less = _components(g)
    canonical = {p: "reg" if _reg_candidate(g, c) else "free" for p, c in enumerate(comps)}
    fails, notes = _evaluate(g, comps, less, canonical)
    assignment = canonical
    if fails:
        # singletons could in principle go either way; try the alternatives
        ambiguous = [p for p, c in enumerate(comps) if len(c) == 1]
        for n, labels in enumerate(itertools.product(("free", "reg"), repeat=len(ambiguous))):
            if n >= max_alternatives:
                break
            alt = dict(canonical)
            alt.update(zip(ambiguous, labels))
            if alt == canonical:
                continue
            f2, n2 = _evaluate(g, comps, less, alt)
            if not f2:
                fails, notes, assignment = f2, n2, alt
                break
    report = AdaptabilityReport(comps, less, assignment, borderline=notes)
    for clause in ("(1)", "(2)", "(3)"):
        mine = [f for f in fails if f[0] == clause]
        if mine:
            _, witness, note = mine[0]
            report.conditions.append(Condition(clause, FAIL, None, witness, note))
        else:
            report.conditions.append(Condition(clause, PASS, None))
    report.adaptable = not fails
    return report


# -- two-vertex enumeration --------------------------------------------------------------------

TWO_VERTEX_CASES = ("1", "2i", "2ii-a1", "2ii-a2", "2ii-a3", "2ii-a4", "none")


def edge_count(g: _Graph, a: str, b: str) -> int:
    return sum(1 for e in g.edges if e.source == a and e.range == b)


def two_vertex_case(g: SeparatedGraph) -> str:
    if len(g.vertices) != 2:
        raise GraphError(f"expected exactly two vertices, got {len(g.vertices)}")
    rep = check_adaptable(g)
    if not rep.adaptable:
        return "none"
    u, v = g.vertices
    if edge_count(g, u, v) and edge_count(g, v, u):
        return "1"
    if edge_count(g, v, u):
        u, v = v, u
    if not edge_count(g, u, v):
        return "2i"
    return {
        ("reg", "reg"): "2ii-a1",
        ("reg", "free"): "2ii-a2",
        ("free", "reg"): "2ii-a3",
        ("free", "free"): "2ii-a4",
    }[(rep.label_of(u), rep.label_of(v))]
