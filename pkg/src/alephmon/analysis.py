"""Order-theoretic predicates on a presented monoid, evaluated on the oracle grid.

Every universal quantifier ranges over the grid of the oracle, so a ``True``
from a scan means "no counterexample up to the bound".  Scans return a
:class:`ScanResult` that carries the bound and the first counterexample.
"""
from __future__ import annotations

from dataclasses import dataclass

from .congruence import CongruenceOracle
from .forms import OMEGA, Form

# witness values for cyclic detection; finite multiples >= 2 are treated as
# genuinely two-generated (x_i = n x_j is the weighted-LPA shape)
CYCLIC_ALPHAS = (0, 1, OMEGA)


@dataclass(frozen=True)
class ScanResult:
    holds: bool
    bound: int
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Cyclic:
    generator: int
    dependent: int | None
    alpha: object

    label = "Cyclic"


@dataclass(frozen=True)
class Type1:
    label = "Type1"


@dataclass(frozen=True)
class Type2:
    """``x_i`` lies in add(``x_j``) but not conversely (0-based indices)."""

    i: int
    j: int
    label = "Type2"


@dataclass(frozen=True)
class Type3:
    label = "Type3"


Classification = Cyclic | Type1 | Type2 | Type3


@dataclass(frozen=True)
class RefinementSquare:
    x: Form
    y: Form
    z: Form
    t: Form


# -- cached set computations ---------------------------------------------------

def _down_of_class(o: CongruenceOracle, rep: int) -> frozenset:
    """Points y with y + z in the class ``rep`` for some grid point z."""
    cache = o.memo.setdefault("down", {})
    out = cache.get(rep)
    if out is None:
        pts = set()
        for q in o.class_members(rep):
            pts.update(o.down_idx(q))
        out = cache[rep] = frozenset(pts)
    return out


def _add_set(o: CongruenceOracle, x: int) -> frozenset:
    cache = o.memo.setdefault("add", {})
    out = cache.get(x)
    if out is None:
        pts = set()
        for n in range(1, o.bound + 1):
            nx = o.scale_idx(n, x)
            if nx is None:
                break
            pts |= _down_of_class(o, o.label(nx))
        out = cache[x] = frozenset(pts)
    return out


def add_member(o: CongruenceOracle, y: Form, x: Form) -> bool:
    """Is there n in 1..B and a grid point z with y + z = n·x?"""
    return o.index(y) in _add_set(o, o.index(x))


def leq(o: CongruenceOracle, a: Form, b: Form) -> bool:
    return o.index(a) in _down_of_class(o, o.label(o.index(b)))


def _add_member_idx(o, y: int, x: int) -> bool:
    return y in _add_set(o, x)


# -- classification ------------------------------------------------------------------

def _gen(o: CongruenceOracle, i: int, coeff=1) -> Form:
    return Form.unit(o.k, i, coeff)


def _cyclic_witness(o: CongruenceOracle, alphas) -> Cyclic | None:
    if o.k == 1:
        return Cyclic(0, None, None)
    for i, j in ((0, 1), (1, 0)):
        for a in alphas:
            if o.same(_gen(o, i), _gen(o, j, a)):
                return Cyclic(j, i, a)
    return None


def _require_two(o: CongruenceOracle) -> None:
    if o.k != 2:
        raise ValueError(f"this check needs exactly two generators, got {o.k}")


def classify(o: CongruenceOracle) -> Classification:
    _require_two(o)
    cyc = _cyclic_witness(o, CYCLIC_ALPHAS)
    if cyc is not None:
        return cyc
    one_in_two = add_member(o, _gen(o, 0), _gen(o, 1))
    two_in_one = add_member(o, _gen(o, 1), _gen(o, 0))
    if one_in_two and two_in_one:
        return Type3()
    if one_in_two:
        return Type2(0, 1)
    if two_in_one:
        return Type2(1, 0)
    return Type1()


def is_cyclic_on(o: CongruenceOracle, g: int) -> bool:
    """Every generator equals α·x_g for some α in the grid range."""
    alphas = list(range(o.bound + 1)) + [OMEGA]
    for i in range(o.k):
        if i != g and not any(o.same(_gen(o, i), _gen(o, g, a)) for a in alphas):
            return False
    return True


def cyclic_realizable(o: CongruenceOracle, g: int) -> ScanResult:
    """ωx ≠ nx for every finite n up to the bound."""
    if not is_cyclic_on(o, g):
        raise ValueError(f"monoid is not generated by {o.presentation.names[g]}")
    inf = _gen(o, g, OMEGA)
    for n in range(o.bound + 1):
        if o.same(inf, _gen(o, g, n)):
            return ScanResult(False, o.bound, (n,))
    return ScanResult(True, o.bound)


# -- elementwise predicates ---------------------------------------------------------------

def is_prime(o: CongruenceOracle, p: Form) -> ScanResult:
    pi = o.index(p)
    if o.label(pi) == o.label(o.index(Form.zero(o.k))):
        raise ValueError("primality is defined for nonzero elements only")
    above = {rep for rep in set(o.labels) if pi in _down_of_class(o, rep)}
    for x in o.points():
        if o.label(x) in above:
            continue
        for y in o.points():
            s = o.add_idx(x, y)
            if s is None or o.label(s) not in above or o.label(y) in above:
                continue
            return ScanResult(False, o.bound, (o.form_at(x), o.form_at(y)))
    return ScanResult(True, o.bound)


def is_cancelable(o: CongruenceOracle, c: Form) -> ScanResult:
    """a + c = b + c implies a = b, over fully finite a, b."""
    ci = o.index(c)
    for a in o.points(finite_only=True):
        s = o.add_idx(a, ci)
        if s is None:
            continue
        for q in o.class_members(o.label(s)):
            for b in o.sub_idx(q, ci):
                if o.is_finite_idx(b) and o.label(b) != o.label(a):
                    return ScanResult(False, o.bound, (o.form_at(a), o.form_at(b)))
    return ScanResult(True, o.bound)


def is_separative(o: CongruenceOracle) -> ScanResult:
    finite = list(o.points(finite_only=True))
    for a in finite:
        for c in finite:
            s = o.add_idx(a, c)
            if s is None or not _add_member_idx(o, c, a):
                continue
            for q in o.class_members(o.label(s)):
                for b in o.sub_idx(q, c):
                    if (
                        o.is_finite_idx(b)
                        and o.label(b) != o.label(a)
                        and _add_member_idx(o, c, b)
                    ):
                        return ScanResult(
                            False, o.bound, (o.form_at(a), o.form_at(b), o.form_at(c))
                        )
    return ScanResult(True, o.bound)


# -- refinement ------------------------------------------------------------------------------

def _finite_members(o: CongruenceOracle, rep: int) -> list:
    cache = o.memo.setdefault("finite_members", {})
    out = cache.get(rep)
    if out is None:
        out = cache[rep] = [q for q in o.class_members(rep) if o.is_finite_idx(q)]
    return out


def _square(o: CongruenceOracle, a: int, b: int, c: int, d: int, finite: bool):
    """Search x+y ∈ [a], z+t ∈ [b], x+z ∈ [c], y+t ∈ [d]; entries as indices."""
    la, lb, lc, ld = (o.label(v) for v in (a, b, c, d))
    members = (lambda rep: _finite_members(o, rep)) if finite else o.class_members
    ok = o.is_finite_idx if finite else (lambda _: True)
    for qa in members(la):
        for x in o.down_idx(qa):
            if not ok(x):
                continue
            for y in o.sub_idx(qa, x):
                if not ok(y):
                    continue
                for qc in members(lc):
                    for z in o.sub_idx(qc, x):
                        if not ok(z):
                            continue
                        for qb in members(lb):
                            for t in o.sub_idx(qb, z):
                                if not ok(t):
                                    continue
                                s = o.add_idx(y, t)
                                if s is not None and o.label(s) == ld:
                                    return x, y, z, t
    return None


def refinement_square(
    o: CongruenceOracle, a: Form, b: Form, c: Form, d: Form
) -> RefinementSquare | None:
    lhs, rhs = a + b, c + d
    if not (o.in_grid(lhs) and o.in_grid(rhs) and o.same(lhs, rhs)):
        raise ValueError(f"refinement needs a + b = c + d; got {lhs} and {rhs}")
    finite = all(f.is_finite for f in (a, b, c, d))
    found = _square(o, *(o.index(f) for f in (a, b, c, d)), finite=finite)
    if found is None:
        return None
    return RefinementSquare(*(o.form_at(v) for v in found))


def refinement_bound(o: CongruenceOracle) -> int:
    return o.bound // 2


def is_refinement(o: CongruenceOracle) -> ScanResult:
    """Every a + b = c + d with finite coordinates up to B/2 has a finite square."""
    cache = o.memo.get("is_refinement")
    if cache is not None:
        return cache
    bref = refinement_bound(o)
    box = [
        p for p in o.points(finite_only=True) if max(o.codes(p), default=0) <= bref
    ]
    by_sum: dict = {}
    for a in box:
        for b in box:
            s = o.add_idx(a, b)
            by_sum.setdefault(o.label(s), []).append((a, b))
    seen = set()
    result = ScanResult(True, o.bound)
    for rep in sorted(by_sum):
        pairs = by_sum[rep]
        for a, b in pairs:
            for c, d in pairs:
                key = tuple(o.label(v) for v in (a, b, c, d))
                if key in seen:
                    continue
                la, lb, lc, ld = key
                seen.update({key, (lc, ld, la, lb), (lb, la, ld, lc), (ld, lc, lb, la)})
                if _square(o, a, b, c, d, finite=True) is None:
                    result = ScanResult(
                        False, o.bound, tuple(o.form_at(v) for v in (a, b, c, d))
                    )
                    o.memo["is_refinement"] = result
                    return result
    o.memo["is_refinement"] = result
    return result
