"""Interval braiding certificates between eventually-constant families.

A certificate for ``Σ x_i = Σ y_i`` consists of cut points ``0 = m_0 < m_1 <
...`` and ``0 <= n_0 < n_1 < ...`` and carried forms ``u_j``, ``v_j`` with
``v_0 = x_0`` such that

    y_0 + ... + y_{n_0}              = v_0 + u_0
    x_{m_j + 1} + ... + x_{m_{j+1}}  = u_j + v_{j+1}
    y_{n_j + 1} + ... + y_{n_{j+1}}  = u_{j+1} + v_{j+1}

for every ``j``.  Certificates are eventually periodic: with ``s =
period_start`` and ``p = period_len`` the lists hold ``u_j, v_j`` for
``j < s + p`` and the cuts for ``j <= s + p``; beyond that the forms repeat
with period ``p`` and the cut gaps repeat too.  Once the cuts at ``s`` have
passed both prefixes every later interval lies inside the constant tails, so
checking ``j < s + p`` certifies the whole infinite family.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .congruence import CongruenceOracle, GridError, sort_key
from .forms import OMEGA, FamilySpec, Form, form_sum, family_sum, format_ext_nat


class BraidingError(ValueError):
    pass


@dataclass(frozen=True)
class BraidingCertificate:
    m_cuts: tuple
    n_cuts: tuple
    u_seq: tuple
    v_seq: tuple
    period_start: int
    period_len: int

    def __post_init__(self):
        for name in ("m_cuts", "n_cuts", "u_seq", "v_seq"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def length(self) -> int:
        return self.period_start + self.period_len

    def validate(self) -> None:
        s, p, n = self.period_start, self.period_len, self.length
        if s < 0 or p < 1:
            raise BraidingError("period_start must be >= 0 and period_len >= 1")
        if len(self.u_seq) != n or len(self.v_seq) != n:
            raise BraidingError(f"u/v sequences must have length {n}")
        if len(self.m_cuts) != n + 1 or len(self.n_cuts) != n + 1:
            raise BraidingError(f"cut lists must have length {n + 1}")
        if self.m_cuts[0] != 0:
            raise BraidingError("m_0 must be 0")
        if self.n_cuts[0] < 0:
            raise BraidingError("n_0 must be >= 0")
        for cuts in (self.m_cuts, self.n_cuts):
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise BraidingError("cuts must be strictly increasing")
        k = {len(f) for f in (*self.u_seq, *self.v_seq)}
        if len(k) > 1:
            raise BraidingError("forms of different lengths in certificate")

    # -- periodic extension --------------------------------------------------------
    def _fold(self, j: int) -> int:
        s, p = self.period_start, self.period_len
        return j if j < s + p else s + (j - s) % p

    def u(self, j: int) -> Form:
        return self.u_seq[self._fold(j)]

    def v(self, j: int) -> Form:
        return self.v_seq[self._fold(j)]

    def _cut(self, cuts: tuple, j: int) -> int:
        n, s, p = self.length, self.period_start, self.period_len
        if j <= n:
            return cuts[j]
        per = cuts[s + p] - cuts[s]
        q, r = divmod(j - s, p)
        return cuts[s + r] + q * per

    def m(self, j: int) -> int:
        return self._cut(self.m_cuts, j)

    def n(self, j: int) -> int:
        return self._cut(self.n_cuts, j)

    # -- serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "m_cuts": list(self.m_cuts),
            "n_cuts": list(self.n_cuts),
            "u": [_form_json(f) for f in self.u_seq],
            "v": [_form_json(f) for f in self.v_seq],
            "period_start": self.period_start,
            "period_len": self.period_len,
        }

    @classmethod
    def from_json(cls, d: dict) -> BraidingCertificate:
        return cls(
            tuple(d["m_cuts"]),
            tuple(d["n_cuts"]),
            tuple(_form_from_json(f) for f in d["u"]),
            tuple(_form_from_json(f) for f in d["v"]),
            d["period_start"],
            d["period_len"],
        )


def _form_json(f: Form) -> list:
    return [format_ext_nat(c, ascii=True) if c is OMEGA else c for c in f]


def _form_from_json(cs) -> Form:
    return Form(tuple(OMEGA if c == "w" else c for c in cs))


# -- verification ---------------------------------------------------------------------

def _require_equal_sums(o: CongruenceOracle, x: FamilySpec, y: FamilySpec) -> None:
    sx, sy = family_sum(x), family_sum(y)
    if not (o.in_grid(sx) and o.in_grid(sy)):
        raise BraidingError(f"family sums {sx}, {sy} leave the grid at bound {o.bound}")
    if not o.same(sx, sy):
        raise BraidingError(f"family sums differ: {sx} vs {sy} (up to bound {o.bound})")


def _holds(o: CongruenceOracle, lhs: Form, *rhs: Form) -> bool:
    r = form_sum(rhs, len(lhs))
    return o.in_grid(lhs) and o.in_grid(r) and o.same(lhs, r)


def explain_braiding(
    o: CongruenceOracle, x: FamilySpec, y: FamilySpec, c: BraidingCertificate
) -> str | None:
    """None when ``c`` certifies ``x`` against ``y``, else the first problem found."""
    _require_equal_sums(o, x, y)
    c.validate()
    s, n = c.period_start, c.length
    if c.m(s) < len(x.prefix) - 1 or c.n(s) < len(y.prefix) - 1:
        return "periodic block starts inside a family prefix"
    if not _holds(o, x.element(0), c.v(0)):
        return "v_0 differs from x_0"
    if not _holds(o, y.interval_sum(0, c.n(0)), c.v(0), c.u(0)):
        return "initial equation fails"
    for j in range(n):
        if not _holds(o, x.interval_sum(c.m(j) + 1, c.m(j + 1)), c.u(j), c.v(j + 1)):
            return f"x-equation fails at j={j}"
        if not _holds(o, y.interval_sum(c.n(j) + 1, c.n(j + 1)), c.u(j + 1), c.v(j + 1)):
            return f"y-equation fails at j={j}"
    return None


def verify_braiding(
    o: CongruenceOracle, x: FamilySpec, y: FamilySpec, c: BraidingCertificate
) -> bool:
    return explain_braiding(o, x, y, c) is None


def telescope(o: CongruenceOracle, c: BraidingCertificate) -> Form:
    """Σ_j (u_j + v_j): the common sum both families reduce to."""
    s, n = c.period_start, c.length
    k = len(c.u_seq[0])
    head = form_sum((c.u(j) + c.v(j) for j in range(s)), k)
    block = form_sum((c.u(j) + c.v(j) for j in range(s, n)), k)
    total = head + block.scale(OMEGA)
    if not o.in_grid(total):
        raise GridError(f"telescoped sum {total} leaves the grid at bound {o.bound}")
    return total


# -- partition form ----------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionCertificate:
    """Finite intervals ``I_μ``, ``J_μ`` and forms with ``v'_0 = 0`` and

        Σ_{I_μ} x = v'_μ + u'_μ,   Σ_{J_μ} y = v'_{μ+1} + u'_μ.

    Intervals are inclusive ``(lo, hi)`` pairs; everything from
    ``period_start`` on repeats with period ``period_len`` (intervals shifted
    by the per-period advance).
    """

    I: tuple
    J: tuple
    u_seq: tuple
    v_seq: tuple
    period_start: int
    period_len: int

    def _fold(self, mu: int) -> int:
        s, p = self.period_start, self.period_len
        return mu if mu < s + p else s + (mu - s) % p

    def u(self, mu: int) -> Form:
        return self.u_seq[self._fold(mu)]

    def v(self, mu: int) -> Form:
        return self.v_seq[self._fold(mu)]


def to_partition(c: BraidingCertificate) -> PartitionCertificate:
    s, p = c.period_start, c.period_len
    top = s + 1 + p
    k = len(c.u_seq[0])
    I = [(0, 0)] + [(c.m(mu - 1) + 1, c.m(mu)) for mu in range(1, top + 1)]
    J = [(0, c.n(0))] + [(c.n(mu - 1) + 1, c.n(mu)) for mu in range(1, top + 1)]
    us = [c.v(mu) for mu in range(top)]
    vs = [Form.zero(k)] + [c.u(mu - 1) for mu in range(1, top)]
    return PartitionCertificate(tuple(I), tuple(J), tuple(us), tuple(vs), s + 1, p)


def verify_partition(
    o: CongruenceOracle, x: FamilySpec, y: FamilySpec, pc: PartitionCertificate
) -> bool:
    _require_equal_sums(o, x, y)
    s, p = pc.period_start, pc.period_len
    top = s + p
    if len(pc.I) != top + 1 or len(pc.J) != top + 1:
        return False
    for ivs in (pc.I, pc.J):
        # consecutive, nonempty, starting at 0: a partition of the naturals
        if ivs[0][0] != 0 or any(lo > hi for lo, hi in ivs):
            return False
        if any(b[0] != a[1] + 1 for a, b in zip(ivs, ivs[1:])):
            return False
        # the repeated intervals must have the same lengths as the block
        if ivs[top][1] - ivs[top][0] != ivs[s][1] - ivs[s][0]:
            return False
    if pc.I[s][0] < len(x.prefix) or pc.J[s][0] < len(y.prefix):
        return False
    if not pc.v(0).is_zero:
        return False
    for mu in range(top):
        if not _holds(o, x.interval_sum(*pc.I[mu]), pc.v(mu), pc.u(mu)):
            return False
        if not _holds(o, y.interval_sum(*pc.J[mu]), pc.v(mu + 1), pc.u(mu)):
            return False
    return True


# -- search ------------------------------------------------------------------------------------

def _lengths(fam: FamilySpec, pos: int, o: CongruenceOracle) -> Iterator[int]:
    """Candidate interval lengths starting after ``pos``; sums stay in the grid."""
    cap = max(len(fam.prefix) - pos, 0) + o.bound
    for ell in range(1, cap + 1):
        if not o.in_grid(fam.interval_sum(pos + 1, pos + ell)):
            # interval sums only grow with ell
            return
        yield ell


class _Search:
    def __init__(self, o: CongruenceOracle, x: FamilySpec, y: FamilySpec):
        self.o, self.x, self.y = o, x, y
        self.cx = max(len(x.prefix) - 1, 0)
        self.cy = max(len(y.prefix) - 1, 0)
        self._split_cache: dict = {}

    def key(self, idx: int) -> tuple:
        return sort_key(self.o.form_at(idx))

    def splits(self, total: int, part: int) -> list:
        """Class labels of z with ``part + z`` in the class of ``total``."""
        o = self.o
        ck = (o.label(total), o.label(part))
        out = self._split_cache.get(ck)
        if out is None:
            labels = set()
            part_members = o.class_members(o.label(part))
            for q in o.class_members(o.label(total)):
                for pm in part_members:
                    for z in o.sub_idx(q, pm):
                        labels.add(o.label(z))
            out = self._split_cache[ck] = sorted(labels, key=self.key)
        return out

    def start_edges(self) -> list:
        o, x, y = self.o, self.x, self.y
        x0 = o.index(x.element(0))
        out = []
        for n0 in [ell - 1 for ell in _lengths(y, -1, o)]:
            total = o.index(y.interval_sum(0, n0))
            for u in self.splits(total, x0):
                out.append(((n0, u), (0, min(n0, self.cy), u)))
        return out

    def edges(self, state) -> list:
        o, x, y = self.o, self.x, self.y
        m, n, u = state
        out = []
        for lx in _lengths(x, m, o):
            sx = o.index(x.interval_sum(m + 1, m + lx))
            for v in self.splits(sx, u):
                for ly in _lengths(y, n, o):
                    sy = o.index(y.interval_sum(n + 1, n + ly))
                    for u2 in self.splits(sy, v):
                        nxt = (min(m + lx, self.cx), min(n + ly, self.cy), u2)
                        out.append(((lx, v, ly, u2), nxt))
        out.sort(key=lambda e: (e[0][0], self.key(e[0][1]), e[0][2], self.key(e[0][3])))
        return out


def _reaches_cycle(graph: dict) -> set:
    """States from which some cycle of the graph can be reached."""
    # repeatedly strip states with no remaining successors
    succ = {s: {t for _, t in es if t in graph} for s, es in graph.items()}
    pred: dict = {s: set() for s in graph}
    for s, ts in succ.items():
        for t in ts:
            pred[t].add(s)
    outdeg = {s: len(ts) for s, ts in succ.items()}
    dead = deque(s for s, d in outdeg.items() if d == 0)
    removed = set()
    while dead:
        s = dead.popleft()
        removed.add(s)
        for p in pred[s]:
            outdeg[p] -= 1
            if outdeg[p] == 0:
                dead.append(p)
    return set(graph) - removed


def find_braiding(
    o: CongruenceOracle, x: FamilySpec, y: FamilySpec, horizon: int = 20
) -> BraidingCertificate | None:
    """Greedy lexicographically-first periodic certificate within ``horizon`` steps.

    States are (clamped x position, clamped y position, class of u).  The
    reachable state graph is explored breadth-first to depth ``horizon``;
    the certificate follows the first edge leading to a state from which a
    cycle is reachable until a state repeats.
    """
    _require_equal_sums(o, x, y)
    search = _Search(o, x, y)
    starts = search.start_edges()
    graph: dict = {}
    depth = {}
    queue = deque()
    for _, st in starts:
        if st not in depth:
            depth[st] = 0
            queue.append(st)
    while queue:
        st = queue.popleft()
        if depth[st] >= horizon:
            graph[st] = []
            continue
        es = search.edges(st)
        graph[st] = es
        for _, nxt in es:
            if nxt not in depth:
                depth[nxt] = depth[st] + 1
                queue.append(nxt)
    good = _reaches_cycle(graph)
    start = next((e for e in starts if e[1] in good), None)
    if start is None:
        return None
    (n0, u0), st = start
    ms, ns, us, vs = [0], [n0], [o.form_at(u0)], [x.element(0)]
    seen = {st: 0}
    m_abs, n_abs = 0, n0
    steps = []
    while True:
        (lx, v, ly, u2), nxt = next(e for e in graph[st] if e[1] in good)
        steps.append((lx, v, ly, u2))
        m_abs += lx
        n_abs += ly
        ms.append(m_abs)
        ns.append(n_abs)
        vs.append(o.form_at(v))
        us.append(o.form_at(u2))
        if nxt in seen:
            a = seen[nxt]
            break
        seen[nxt] = len(steps)
        st = nxt
    b = len(steps)
    p = b - a
    s = a + 1
    # one more period step so the cut lists reach index s + p
    lx, v, ly, u2 = steps[a]
    ms.append(m_abs + lx)
    ns.append(n_abs + ly)
    vs.append(o.form_at(v))
    us.append(o.form_at(u2))
    n = s + p
    cert = BraidingCertificate(
        tuple(ms[: n + 1]), tuple(ns[: n + 1]), tuple(us[:n]), tuple(vs[:n]), s, p
    )
    if not verify_braiding(o, x, y, cert):
        raise AssertionError(f"search produced an invalid certificate: {explain_braiding(o, x, y, cert)}")
    return cert
