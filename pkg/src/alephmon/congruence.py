"""Bounded congruence closure for presentations with countable sums.

The grid at bound ``B`` is ``({0..B} ∪ {ω})^k``.  The closure is the least
equivalence on the grid that contains the defining relations and is closed
under in-grid translation (``p ~ q`` gives ``p+r ~ q+r`` whenever both sums
stay in the grid) and under ω-scaling (``p ~ q`` gives ``ω·p ~ ω·q``).
Absorption ``n·g + ω·g = ω·g`` holds by construction, since points are
stored in reduced extended-natural form.

Verdicts are relative to this rule set.  Whether it generates exactly the
congruence of the presented monoid with countable sums is not settled, so
``Equal`` is reported as definitive while "distinct" is only ever
``DistinctUpToBound(B)``.

Internally a point is an integer index; each coordinate is encoded as a code
in ``0..B+1`` with ``B+1`` standing for ω.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .forms import OMEGA, Form, format_ext_nat


class PresentationError(ValueError):
    pass


class GridError(ValueError):
    """A form has a finite coefficient above the oracle bound."""


@dataclass(frozen=True)
class Presentation:
    generators: int
    relations: tuple = ()
    names: tuple = ()

    def __post_init__(self):
        if self.generators < 1:
            raise PresentationError("a presentation needs at least one generator")
        rels = tuple((Form(l.coeffs), Form(r.coeffs)) for l, r in self.relations)
        for lhs, rhs in rels:
            if len(lhs) != self.generators or len(rhs) != self.generators:
                raise PresentationError(
                    f"relation {lhs} = {rhs} does not have {self.generators} coefficients"
                )
        names = tuple(self.names) or tuple(f"x{i + 1}" for i in range(self.generators))
        if len(names) != self.generators:
            raise PresentationError("one name per generator is required")
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "names", names)

    @classmethod
    def free(cls, k: int) -> Presentation:
        return cls(k)

    @property
    def max_coefficient(self) -> int:
        finite = [c for l, r in self.relations for c in (*l, *r) if c is not OMEGA]
        return max(finite, default=0)

    def generator(self, i: int) -> Form:
        return Form.unit(self.generators, i)

    def render(self) -> str:
        lines = ["generators " + " ".join(self.names)]
        for lhs, rhs in self.relations:
            lines.append(
                f"relation {_render_side(lhs, self.names)} = {_render_side(rhs, self.names)}"
            )
        return "\n".join(lines) + "\n"


def _render_side(f: Form, names) -> str:
    terms = [f"{format_ext_nat(c, ascii=True)}*{n}" for c, n in zip(f, names) if c != 0]
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Verdict:
    equal: bool
    bound: int

    def __bool__(self) -> bool:
        return self.equal

    def __str__(self) -> str:
        return "Equal" if self.equal else f"DistinctUpToBound({self.bound})"


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.members = {i: [i] for i in range(n)}

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> int | None:
        """Merge and return the new root, or None if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        if len(self.members[ra]) < len(self.members[rb]):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.members[ra].extend(self.members.pop(rb))
        return ra


def sort_key(form: Form) -> tuple:
    """Representative order: fewer ω coefficients first, then smaller finite
    total, then lexicographic with ω above every finite value."""
    n_omega = sum(1 for c in form if c is OMEGA)
    total = sum(c for c in form if c is not OMEGA)
    lex = tuple((1, 0) if c is OMEGA else (0, c) for c in form)
    return (n_omega, total, lex)


@dataclass
class CongruenceOracle:
    presentation: Presentation
    bound: int
    labels: tuple = field(repr=False)
    # derived data cached by the analysis layer; never affects the partition
    memo: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def k(self) -> int:
        return self.presentation.generators

    @property
    def omega_code(self) -> int:
        return self.bound + 1

    @property
    def size(self) -> int:
        return (self.bound + 2) ** self.k

    # -- index <-> form ---------------------------------------------------
    def index(self, f: Form) -> int:
        if len(f) != self.k:
            raise GridError(f"{f} has {len(f)} coefficients, oracle has {self.k} generators")
        base = self.bound + 2
        idx = 0
        for c in reversed(f.coeffs):
            if c is OMEGA:
                code = self.omega_code
            elif c > self.bound:
                raise GridError(f"{f} lies outside the grid at bound {self.bound}")
            else:
                code = c
            idx = idx * base + code
        return idx

    def codes(self, idx: int) -> tuple:
        base = self.bound + 2
        out = []
        for _ in range(self.k):
            idx, c = divmod(idx, base)
            out.append(c)
        return tuple(out)

    def from_codes(self, codes: Sequence[int]) -> int:
        base = self.bound + 2
        idx = 0
        for c in reversed(codes):
            idx = idx * base + c
        return idx

    def form_at(self, idx: int) -> Form:
        w = self.omega_code
        return Form(tuple(OMEGA if c == w else c for c in self.codes(idx)))

    def in_grid(self, f: Form) -> bool:
        return len(f) == self.k and all(c is OMEGA or c <= self.bound for c in f)

    # -- partition ----------------------------------------------------------
    def label(self, idx: int) -> int:
        """Index of the class representative of point ``idx``."""
        return self.labels[idx]

    def class_members(self, rep: int) -> list:
        return self._classes()[rep]

    def _classes(self) -> dict:
        classes = self.memo.get("classes")
        if classes is None:
            classes = {}
            for i, lab in enumerate(self.labels):
                classes.setdefault(lab, []).append(i)
            self.memo["classes"] = classes
        return classes

    def classes(self) -> list:
        """All classes as lists of point indices, ordered by representative."""
        c = self._classes()
        return [c[rep] for rep in sorted(c)]

    def equal(self, f: Form, g: Form) -> Verdict:
        return Verdict(self.labels[self.index(f)] == self.labels[self.index(g)], self.bound)

    def same(self, f: Form, g: Form) -> bool:
        return self.labels[self.index(f)] == self.labels[self.index(g)]

    def canonical(self, f: Form) -> Form:
        return self.form_at(self.labels[self.index(f)])

    def class_of(self, f: Form) -> list:
        return [self.form_at(i) for i in self.class_members(self.labels[self.index(f)])]

    # -- grid arithmetic on indices -------------------------------------------
    def points(self, finite_only: bool = False) -> Iterator[int]:
        if not finite_only:
            return iter(range(self.size))
        return (
            self.from_codes(c)
            for c in itertools.product(range(self.bound + 1), repeat=self.k)
        )

    def is_finite_idx(self, idx: int) -> bool:
        return self.omega_code not in self.codes(idx)

    def add_idx(self, a: int, b: int) -> int | None:
        """Index of ``a + b``, or None when the sum leaves the grid."""
        if self.size <= _TABLE_LIMIT:
            s = _add_table(self.k, self.bound)[a][b]
            return None if s < 0 else s
        return self._add_slow(a, b)

    def _add_slow(self, a: int, b: int) -> int | None:
        w, bound = self.omega_code, self.bound
        out = []
        for x, y in zip(self.codes(a), self.codes(b)):
            if x == w or y == w:
                out.append(w)
            else:
                s = x + y
                if s > bound:
                    return None
                out.append(s)
        return self.from_codes(out)

    def scale_idx(self, n, a: int) -> int | None:
        """Index of ``n·a`` for an extended natural ``n``, or None if out of grid."""
        w, bound = self.omega_code, self.bound
        out = []
        for x in self.codes(a):
            if n == 0 or x == 0:
                out.append(0)
            elif n is OMEGA or x == w:
                out.append(w)
            else:
                s = n * x
                if s > bound:
                    return None
                out.append(s)
        return self.from_codes(out)

    def sub_idx(self, q: int, y: int) -> list:
        """All grid points ``z`` with ``y + z = q``."""
        w = self.omega_code
        options = []
        for qc, yc in zip(self.codes(q), self.codes(y)):
            if qc == w:
                options.append(range(w + 1) if yc == w else (w,))
            elif yc == w or yc > qc:
                return []
            else:
                options.append((qc - yc,))
        return [self.from_codes(c) for c in itertools.product(*options)]

    def down_idx(self, q: int) -> list:
        """All grid points ``y`` with ``y + z = q`` for some grid point ``z``."""
        w = self.omega_code
        options = [range(w + 1) if qc == w else range(qc + 1) for qc in self.codes(q)]
        return [self.from_codes(c) for c in itertools.product(*options)]


_TABLE_LIMIT = 2048


@functools.lru_cache(maxsize=16)
def _add_table(k: int, bound: int) -> tuple:
    shell = CongruenceOracle(Presentation(k), bound, labels=())
    n = shell.size
    return tuple(
        tuple(-1 if (s := shell._add_slow(a, b)) is None else s for b in range(n))
        for a in range(n)
    )


def build_oracle(p: Presentation, bound: int) -> CongruenceOracle:
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    if p.max_coefficient > bound:
        raise GridError(
            f"relation coefficient {p.max_coefficient} exceeds bound {bound}; "
            "raise --bound rather than truncate the closure"
        )
    shell = CongruenceOracle(p, bound, labels=())
    n = shell.size
    uf = _UnionFind(n)
    omega_of = [shell.scale_idx(OMEGA, i) for i in range(n)]
    dirty = set()

    def merge(a: int, b: int) -> None:
        root = uf.union(a, b)
        if root is not None:
            dirty.add(root)

    for lhs, rhs in p.relations:
        merge(shell.index(lhs), shell.index(rhs))

    table = _add_table(p.generators, bound) if n <= _TABLE_LIMIT else None
    while dirty:
        root = uf.find(dirty.pop())
        members = list(uf.members[root])
        rows = [table[m] for m in members] if table is not None else None
        for r in range(1, n):
            first = -1
            if rows is not None:
                sums = [row[r] for row in rows]
            else:
                sums = [-1 if (s := shell._add_slow(m, r)) is None else s for m in members]
            for s in sums:
                if s < 0:
                    continue
                if first < 0:
                    first = s
                elif uf.find(first) != uf.find(s):
                    merge(first, s)
        scaled = omega_of[members[0]]
        for m in members[1:]:
            merge(scaled, omega_of[m])
        # a class that grew while being processed is still in `dirty`

    labels = [0] * n
    for root, members in uf.members.items():
        rep = min(members, key=lambda i: sort_key(shell.form_at(i)))
        for m in members:
            labels[m] = rep
    return CongruenceOracle(p, bound, labels=tuple(labels))


def equal(o: CongruenceOracle, f: Form, g: Form) -> Verdict:
    return o.equal(f, g)


def canonical(o: CongruenceOracle, f: Form) -> Form:
    return o.canonical(f)
