"""Realizability checkers for two-generated monoids.

Each checker returns a :class:`ConditionReport`: a list of named
sub-conditions, each ``pass``, ``fail`` or ``inconclusive``, and an overall
verdict.  A condition fails on a concrete counterexample found in the grid.
Like every other verdict here, "distinct", "not in add" and "not ≤" mean
"up to the bound".  The clauses asking for finite witnesses ``k, k'`` are the
exception: their witness range is cut by the grid edge, so an exhausted
search there is ``inconclusive``, never a failure.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import analysis
from .analysis import Cyclic, Type2, add_member, classify, leq
from .congruence import CongruenceOracle, Presentation, build_oracle, sort_key
from .forms import OMEGA, Form

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


class Verdict(str, enum.Enum):
    REALIZABLE = "Realizable"
    NOT_REALIZABLE = "NotRealizable"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass
class Condition:
    id: str
    status: str
    bound: int | None
    witness: dict = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "bound": self.bound,
            "witness": dict(self.witness),
            "note": self.note,
        }


@dataclass
class ConditionReport:
    check: str
    bound: int
    conditions: list = field(default_factory=list)
    verdict: Verdict | None = None
    details: dict = field(default_factory=dict)

    def add(self, cond: Condition) -> Condition:
        self.conditions.append(cond)
        return cond

    def status_of(self, cid: str) -> str:
        for c in self.conditions:
            if c.id == cid:
                return c.status
        raise KeyError(cid)

    def failed(self) -> list:
        return [c for c in self.conditions if c.status == FAIL]

    def conclude(self, default: Verdict = Verdict.REALIZABLE) -> ConditionReport:
        statuses = {c.status for c in self.conditions}
        if FAIL in statuses:
            self.verdict = Verdict.NOT_REALIZABLE
        elif INCONCLUSIVE in statuses:
            self.verdict = Verdict.INCONCLUSIVE
        else:
            self.verdict = default
        return self

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "bound": self.bound,
            "conditions": [c.to_json() for c in self.conditions],
            "verdict": str(self.verdict),
            "details": dict(self.details),
        }


# -- helpers ----------------------------------------------------------------------

def _names(o: CongruenceOracle):
    return o.presentation.names


def _show(o: CongruenceOracle, f: Form) -> str:
    return f.render(_names(o), ascii=True)


def _x(o, i, coeff=1) -> Form:
    return Form.unit(o.k, i, coeff)


def _mix(o, i, a, j, b) -> Form:
    """a·x_i + b·x_j."""
    return _x(o, i, a) + _x(o, j, b)


def _pairs(o):
    return [(i, j) for i in range(o.k) for j in range(o.k) if i != j]


def _pair_tag(o, i, j) -> str:
    n = _names(o)
    return f"{n[i]},{n[j]}"


def _finite_infinite(o: CongruenceOracle, cid: str) -> Condition:
    """No class holds both a fully finite form and a form with an ω."""
    for members in o.classes():
        fin = [m for m in members if o.is_finite_idx(m)]
        inf = [m for m in members if not o.is_finite_idx(m)]
        if fin and inf:
            fin, inf = (min(ms, key=lambda m: sort_key(o.form_at(m))) for ms in (fin, inf))
            return Condition(
                cid,
                FAIL,
                o.bound,
                {"finite": _show(o, o.form_at(fin)), "infinite": _show(o, o.form_at(inf))},
                "an element has both a finite and an infinite form",
            )
    return Condition(cid, PASS, o.bound)


def _cyclic_generator(o: CongruenceOracle) -> int | None:
    if o.k == 1:
        return 0
    c = analysis._cyclic_witness(o, analysis.CYCLIC_ALPHAS)
    return None if c is None else c.generator


def _check_k(o: CongruenceOracle, allow_one: bool) -> None:
    if o.k == 2 or (allow_one and o.k == 1):
        return
    raise ValueError(f"two generators required, got {o.k}")


# -- condition (i), shared by the hereditary and VNR checks -------------------------

def _infinite_collapse(o, i, j, cid, type2_order: bool) -> Condition:
    bound = o.bound
    target = _mix(o, i, OMEGA, j, OMEGA)
    for n in range(bound + 1):
        if not o.same(_mix(o, i, n, j, OMEGA), target):
            continue
        w = {"n": str(n)}
        if not o.same(_x(o, j, OMEGA), target):
            return Condition(cid, FAIL, bound, w, "hypothesis holds but ωx_j ≠ ωx_i + ωx_j")
        if not add_member(o, _x(o, i), _x(o, j)):
            return Condition(cid, FAIL, bound, w, "x_i is not in add(x_j) up to the bound")
        if type2_order and not leq(o, _x(o, i), _x(o, j)):
            return Condition(cid, FAIL, bound, w, "Type2 but x_i ≤ x_j fails up to the bound")
    return Condition(cid, PASS, bound)


# -- hereditary ----------------------------------------------------------------------

def _cyclic_report(o: CongruenceOracle, check: str, g: int) -> ConditionReport:
    rep = ConditionReport(check, o.bound, details={"classification": "Cyclic", "generator": _names(o)[g]})
    res = analysis.cyclic_realizable(o, g)
    if res:
        rep.add(Condition("cyclic", PASS, o.bound))
    else:
        (n,) = res.counterexample
        rep.add(Condition(
            "cyclic", FAIL, o.bound,
            {"n": str(n), "form": _show(o, _x(o, g, n))},
            "ωx equals a finite multiple",
        ))
    return rep.conclude()


def check_hereditary(o: CongruenceOracle) -> ConditionReport:
    _check_k(o, allow_one=True)
    g = _cyclic_generator(o)
    if g is not None:
        return _cyclic_report(o, "hereditary", g)
    rep = ConditionReport("hereditary", o.bound, details={"classification": classify(o).label})
    for i, j in _pairs(o):
        rep.add(_infinite_collapse(o, i, j, f"(i) {_pair_tag(o, i, j)}", False))
    for i, j in _pairs(o):
        rep.add(_finite_witness(o, i, j, f"(ii) {_pair_tag(o, i, j)}"))
    rep.add(_finite_infinite(o, "(iii)"))
    return rep.conclude()


def _finite_witness(o, i, j, cid) -> Condition:
    if add_member(o, _x(o, i), _x(o, j)):
        return Condition(cid, PASS, o.bound, note="vacuous: x_i in add(x_j)")
    h = hypothesis_bound(o)
    for m in range(h + 1):
        for n in range(m + 1, h + 1):
            if not o.same(_mix(o, i, m, j, OMEGA), _mix(o, i, n, j, OMEGA)):
                continue
            if _kk_witnesses(o, i, j, m, n, first=True):
                continue
            return Condition(
                cid, INCONCLUSIVE, o.bound, {"m": str(m), "n": str(n)},
                "no finite k, k' found for m·x_i + k·x_j = n·x_i + k'·x_j",
            )
    return Condition(cid, PASS, o.bound)


def hypothesis_bound(o: CongruenceOracle) -> int:
    """Range of m, n in the clauses that then ask for witnesses k, k' ≤ B.

    Keeping the hypothesis at half the bound leaves the witnesses room inside
    the grid, as with the refinement box.
    """
    return o.bound // 2


def _kk_witnesses(o, i, j, m, n, first=False) -> list:
    """All (k, k') with m·x_i + k·x_j = n·x_i + k'·x_j in the grid."""
    out = []
    for k in range(o.bound + 1):
        for k2 in range(o.bound + 1):
            if o.same(_mix(o, i, m, j, k), _mix(o, i, n, j, k2)):
                out.append((k, k2))
                if first:
                    return out
    return out


# -- VNR hereditary ---------------------------------------------------------------------

def check_vnr(o: CongruenceOracle, strict_positive_m: bool = False) -> ConditionReport:
    _check_k(o, allow_one=False)
    cls = classify(o)
    if isinstance(cls, Cyclic):
        raise ValueError("the VNR characterization applies to non-cyclic monoids only")
    rep = ConditionReport(
        "vnr", o.bound,
        details={"classification": cls.label, "strict_positive_m": strict_positive_m},
    )
    type2 = isinstance(cls, Type2)
    for i, j in _pairs(o):
        rep.add(_infinite_collapse(o, i, j, f"(i) {_pair_tag(o, i, j)}", type2))
    for i, j in _pairs(o):
        rep.add(_shift(o, i, j, f"(ii) {_pair_tag(o, i, j)}", 1 if strict_positive_m else 0))
    for i, j in _pairs(o):
        rep.add(_vnr_iii(o, i, j, cls, f"(iii) {_pair_tag(o, i, j)}"))
    rep.add(_finite_infinite(o, "(iv)"))
    return rep.conclude()


def _shift(o, i, j, cid, m_min: int) -> Condition:
    """n ≥ m and n·x_i + k·x_j = m·x_i + k'·x_j give (n−m+1)·x_i + k·x_j = x_i + k'·x_j."""
    b = o.bound
    for m in range(m_min, b + 1):
        for n in range(m, b + 1):
            if n - m + 1 > b:
                continue
            for k in range(b + 1):
                for k2 in range(b + 1):
                    if not o.same(_mix(o, i, n, j, k), _mix(o, i, m, j, k2)):
                        continue
                    if not o.same(_mix(o, i, n - m + 1, j, k), _mix(o, i, 1, j, k2)):
                        return Condition(
                            cid, FAIL, b,
                            {"n": str(n), "m": str(m), "k": str(k), "k'": str(k2)},
                            "(n-m+1)·x_i + k·x_j ≠ x_i + k'·x_j",
                        )
    return Condition(cid, PASS, b)


def _vnr_iii(o, i, j, cls, cid) -> Condition:
    b = o.bound
    if add_member(o, _x(o, i), _x(o, j)):
        return Condition(cid, PASS, b, note="vacuous: x_i in add(x_j)")
    if isinstance(cls, Type2):
        canc = analysis.is_cancelable(o, _x(o, j))
        if not canc:
            a, a2 = canc.counterexample
            return Condition(
                cid, FAIL, b, {"a": _show(o, a), "b": _show(o, a2), "c": _show(o, _x(o, j))},
                "(a): x_j is not cancelable",
            )
    h = hypothesis_bound(o)
    for m in range(h + 1):
        for n in range(m + 1, h + 1):
            if not o.same(_mix(o, i, m, j, OMEGA), _mix(o, i, n, j, OMEGA)):
                continue
            found = _kk_witnesses(o, i, j, n, m)
            w = {"m": str(m), "n": str(n)}
            if not found:
                return Condition(cid, INCONCLUSIVE, b, w, "no finite k, k' found")
            if isinstance(cls, Type2):
                ok = [kk for kk in found if _type2_difference(o, i, j, m, n, *kk)]
                sub = "(a)"
            else:
                ok = [kk for kk in found if _type1_split(o, i, j, m, n, *kk)]
                sub = "(b)"
            if not ok:
                k, k2 = found[0]
                w.update({"k": str(k), "k'": str(k2)})
                return Condition(cid, FAIL, b, w, f"{sub} fails for every witness k, k'")
    return Condition(cid, PASS, b)


def _type2_difference(o, i, j, m, n, k, k2) -> bool:
    lhs = n - m + 1
    if lhs > o.bound:
        return False
    if k > k2:
        return o.same(_mix(o, i, lhs, j, k - k2), _x(o, i))
    if k2 > k:
        return o.same(_x(o, i, lhs), _mix(o, i, 1, j, k2 - k))
    return True


def _type1_split(o, i, j, m, n, k, k2) -> bool:
    return o.same(_x(o, i, n), _x(o, i, m)) and o.same(_x(o, j, k), _x(o, j, k2))


# -- weighted Leavitt path algebras ----------------------------------------------------------

def _multiple_relations(o: CongruenceOracle) -> list:
    """All (i, j, n) with n ≥ 2 and x_i = n·x_j in the grid."""
    return [
        (i, j, n)
        for i, j in _pairs(o)
        for n in range(2, o.bound + 1)
        if o.same(_x(o, i), _x(o, j, n))
    ]


def check_weighted_lpa(
    o: CongruenceOracle, presentation: Presentation | None = None
) -> ConditionReport:
    p = presentation or o.presentation
    if p.generators != 2 or o.k != 2:
        raise ValueError(f"two generators required, got {p.generators}")
    b = o.bound
    rep = ConditionReport("weighted-lpa", b)
    her = check_hereditary(o)
    rep.add(Condition(
        "(a) hereditary", PASS if her.verdict is Verdict.REALIZABLE else (
            FAIL if her.verdict is Verdict.NOT_REALIZABLE else INCONCLUSIVE),
        b, {"verdict": str(her.verdict)},
    ))
    cands = _multiple_relations(o)
    if not cands:
        rep.add(Condition(
            "(b) x_i = n x_j", FAIL, b, {"searched_n": f"2..{b}"},
            "no relation x_i = n·x_j with n ≥ 2",
        ))
        return rep.conclude()
    names = _names(o)
    rep.add(Condition(
        "(b) x_i = n x_j", PASS, b,
        {"relation": f"{names[cands[0][0]]} = {cands[0][2]}*{names[cands[0][1]]}"},
    ))
    match = None
    for i, j, n in cands:
        single = Presentation(2, ((_x(o, i), _x(o, j, n)),), names)
        if build_oracle(single, b).labels == o.labels:
            match = (i, j, n)
            break
    if match is None:
        i, j, n = cands[0]
        single = build_oracle(Presentation(2, ((_x(o, i), _x(o, j, n)),), names), b)
        # a pair of points that one partition joins and the other separates
        diff, other = next(
            (q, r)
            for q in range(o.size)
            for r in (o.label(q), single.label(q))
            if (o.label(q) == o.label(r)) != (single.label(q) == single.label(r))
        )
        rep.add(Condition(
            "(c) single relation", FAIL, b,
            {"form": _show(o, o.form_at(diff)),
             "other": _show(o, o.form_at(other)),
             "relation": f"{names[i]} = {n}*{names[j]}"},
            "partition differs from that of the single relation",
        ))
        return rep.conclude()
    i, j, n = match
    rep.details["relation"] = f"{names[i]} = {n}*{names[j]}"
    rep.add(Condition("(c) single relation", PASS, b, {"relation": rep.details["relation"]}))
    cls = classify(o)
    rep.details["classification"] = cls.label
    rep.add(Condition(
        "Type3", PASS if cls.label == "Type3" else FAIL, b, {"classification": cls.label}
    ))
    inf = {o.label(q) for q in o.points() if not o.is_finite_idx(q)}
    rep.details["infinite_classes"] = len(inf)
    if len(inf) == 1:
        rep.add(Condition("unique infinite form", PASS, b))
    else:
        a, c = sorted(inf)[:2]
        rep.add(Condition(
            "unique infinite form", FAIL, b,
            {"form": _show(o, o.form_at(a)), "other": _show(o, o.form_at(c))},
        ))
    return rep.conclude()


# -- non-PDFG necessary conditions -------------------------------------------------------------

def non_pdfg_diagnostics(o: CongruenceOracle, i: int, j: int) -> ConditionReport:
    _check_k(o, allow_one=False)
    if i == j:
        raise ValueError("roles i and j must be distinct generators")
    b = o.bound
    xi, xj = _x(o, i), _x(o, j)
    rep = ConditionReport("non-pdfg", b, details={"i": _names(o)[i], "j": _names(o)[j]})

    if add_member(o, xj, xi):
        rep.add(Condition("(1)", FAIL, b, {"member": _show(o, xj), "of": _show(o, xi)},
                          "x_j is in add(x_i)"))
    else:
        rep.add(Condition("(1)", PASS, b))

    lhs, rhs = _x(o, i, OMEGA) + xj, _x(o, i, OMEGA)
    if o.same(lhs, rhs):
        rep.add(Condition("(2)", PASS, b))
    else:
        rep.add(Condition("(2)", FAIL, b, {"lhs": _show(o, lhs), "rhs": _show(o, rhs)},
                          "ωx_i + x_j ≠ ωx_i"))

    rep.add(Condition("(3)", PASS, b, note="implied by exclusivity; not decided independently"))

    member = add_member(o, xi, xj)
    scaled = o.same(_x(o, j, OMEGA), _x(o, i, OMEGA))
    rep.add(Condition(
        "(4)", PASS if member == scaled else FAIL, b,
        {"x_i in add(x_j)": str(member).lower(), "ωx_j = ωx_i": str(scaled).lower()},
    ))

    if member:
        rep.add(Condition("(5)", PASS, b, note="vacuous: x_i in add(x_j)"))
    else:
        w = o.omega_code
        bad = None
        for members in o.classes():
            fin = next((q for q in members if o.codes(q)[i] != w), None)
            inf = next((q for q in members if o.codes(q)[i] == w), None)
            if fin is not None and inf is not None:
                bad = (fin, inf)
                break
        if bad is None:
            rep.add(Condition("(5)", PASS, b))
        else:
            rep.add(Condition(
                "(5)", FAIL, b,
                {"form": _show(o, o.form_at(bad[0])), "other": _show(o, o.form_at(bad[1]))},
                "one element has forms with finite and infinite x_i-coefficient",
            ))
    # the conditions are only necessary, so passing all of them proves nothing
    return rep.conclude(default=Verdict.INCONCLUSIVE)


# -- type invariance ---------------------------------------------------------------------

@dataclass(frozen=True)
class TypeComparison:
    original: str
    alternative: str
    matches: bool
    expressions: tuple
    roles: tuple | None = None


def _express(o: CongruenceOracle, target: Form, y1: Form, y2: Form):
    """Some (α, β) with α·y1 + β·y2 = target, or None."""
    values = list(range(o.bound + 1)) + [OMEGA]
    for a in values:
        for b in values:
            f = y1.scale(a) + y2.scale(b)
            if o.in_grid(f) and o.same(f, target):
                return a, b
    return None


def type_label(o: CongruenceOracle, y1: Form, y2: Form) -> tuple:
    """Type label of the pair (y1, y2) and the Type2 roles, if any."""
    one_in_two = add_member(o, y1, y2)
    two_in_one = add_member(o, y2, y1)
    if one_in_two and two_in_one:
        return "Type3", None
    if one_in_two:
        return "Type2", (0, 1)
    if two_in_one:
        return "Type2", (1, 0)
    return "Type1", None


def is_generating_pair(o: CongruenceOracle, y1: Form, y2: Form) -> bool:
    return all(_express(o, _x(o, g), y1, y2) is not None for g in range(o.k))


def type_invariance(o: CongruenceOracle, y1: Form, y2: Form) -> TypeComparison:
    _check_k(o, allow_one=False)
    exprs = []
    for g in range(o.k):
        e = _express(o, _x(o, g), y1, y2)
        if e is None:
            raise ValueError(
                f"{_show(o, y1)}, {_show(o, y2)} do not generate {_names(o)[g]} within bound {o.bound}"
            )
        exprs.append(e)
    cls = classify(o)
    if isinstance(cls, Cyclic):
        raise ValueError("types are defined for non-cyclic monoids only")
    alt, roles = type_label(o, y1, y2)
    return TypeComparison(cls.label, alt, alt == cls.label, tuple(exprs), roles)


def alternative_pairs(o: CongruenceOracle, max_coeff: int | None = None) -> list:
    """Generating pairs of nonzero, finite, distinct elements found in the grid.

    Coefficients are capped (default √B) so that add-membership of the pair
    can be decided without running off the grid.
    """
    cap = math.isqrt(o.bound) if max_coeff is None else max_coeff
    zero = o.label(o.index(Form.zero(o.k)))
    cands = [
        q for q in o.points(finite_only=True)
        if max(o.codes(q)) <= cap and o.label(q) != zero and o.label(q) == q
    ]
    out = []
    for a in cands:
        for c in cands:
            if a < c:
                y1, y2 = o.form_at(a), o.form_at(c)
                if is_generating_pair(o, y1, y2):
                    out.append((y1, y2))
    return out


# -- braiding elements -----------------------------------------------------------------------------

def braiding_element_necessary(o: CongruenceOracle, x: Form) -> analysis.ScanResult:
    """ωz1 = ωz2 for z1, z2 in add(x) forces add(z1) = add(z2).

    Candidates have finite coefficients at most √B (or ω) so that the
    mutual add-membership test is not cut short by the grid edge.
    """
    xi = o.index(x)
    cap = math.isqrt(o.bound)
    w = o.omega_code
    zs = [
        q for q in o.points()
        if all(c <= cap or c == w for c in o.codes(q)) and analysis._add_member_idx(o, q, xi)
    ]
    by_scaled: dict = {}
    for z in zs:
        by_scaled.setdefault(o.label(o.scale_idx(OMEGA, z)), []).append(z)
    for group in by_scaled.values():
        for z1 in group:
            for z2 in group:
                if z1 < z2 and not (
                    analysis._add_member_idx(o, z1, z2) and analysis._add_member_idx(o, z2, z1)
                ):
                    return analysis.ScanResult(False, o.bound, (o.form_at(z1), o.form_at(z2)))
    return analysis.ScanResult(True, o.bound)
