from __future__ import annotations

import itertools

import pytest

from alephmon.analysis import (
    Cyclic,
    Type1,
    Type2,
    Type3,
    add_member,
    classify,
    cyclic_realizable,
    is_cancelable,
    is_prime,
    is_refinement,
    is_separative,
    leq,
    refinement_square,
)
from alephmon.congruence import build_oracle
from alephmon.forms import OMEGA, Form

from conftest import CURATED, oracle, pres

F = Form.of


def test_add_member_examples():
    free = oracle("free")
    assert add_member(free, F(1, 0), F(1, 1))
    assert not add_member(free, F(0, 1), F(1, 0))
    assert add_member(oracle("x1=2x2"), F(0, 1), F(1, 0))


def test_leq_examples():
    free = oracle("free")
    assert leq(free, F(1, 0), F(1, 1))
    assert not leq(free, F(1, 1), F(1, 0))
    assert leq(oracle("x2=x1+x2"), F(1, 0), F(0, 1))


@pytest.mark.parametrize(
    "name,expected",
    [
        ("free", Type1()),
        ("x1=2x2", Type3()),
        ("x2=x1+x2", Type2(0, 1)),
        ("2x1+x2=x1+2x2", Type1()),
        ("2x1=wx2", Type2(1, 0)),
        ("x1=x1+x2", Type2(1, 0)),
    ],
)
def test_classify_curated(name, expected):
    assert classify(oracle(name)) == expected


def test_classify_cyclic_and_errors():
    c = classify(build_oracle(pres(((1, 0), (0, 1))), 6))
    assert isinstance(c, Cyclic) and c.alpha == 1
    c = classify(build_oracle(pres(((1, 0), (0, OMEGA))), 6))
    assert isinstance(c, Cyclic) and c.alpha is OMEGA
    with pytest.raises(ValueError):
        classify(build_oracle(pres(k=1), 4))


def test_cyclic_realizable_examples():
    assert cyclic_realizable(build_oracle(pres(k=1), 10), 0)
    assert cyclic_realizable(build_oracle(pres(((1,), (2,)), k=1), 10), 0)
    res = cyclic_realizable(build_oracle(pres(((OMEGA,), (3,)), k=1), 10), 0)
    assert not res and res.counterexample == (3,)
    with pytest.raises(ValueError):
        cyclic_realizable(oracle("free"), 0)


def test_prime_examples():
    free = build_oracle(pres(), 6)
    assert is_prime(free, F(1, 0))
    assert not is_prime(free, F(1, 1))
    assert is_prime(build_oracle(CURATED["x2=x1+x2"], 6), F(0, 1))
    with pytest.raises(ValueError):
        is_prime(free, F(0, 0))


def test_cancelable_examples():
    assert is_cancelable(oracle("free"), F(1, 0))
    assert is_cancelable(oracle("x2=x1+x2"), F(1, 0))
    res = is_cancelable(build_oracle(pres(((1,), (2,)), k=1), 8), F(1))
    assert not res


def test_separative_examples():
    assert is_separative(build_oracle(pres(), 6))
    assert is_separative(build_oracle(CURATED["x2=x1+x2"], 6))
    assert is_separative(build_oracle(CURATED["2x1+x2=x1+2x2"], 8))


def test_refinement_examples():
    assert is_refinement(oracle("free"))
    assert is_refinement(oracle("x2=x1+x2"))
    res = is_refinement(oracle("2x1+x2=x1+2x2"))
    assert not res and res.counterexample is not None
    o8 = build_oracle(CURATED["2x1+x2=x1+2x2"], 8)
    assert refinement_square(o8, F(2, 0), F(0, 1), F(1, 0), F(0, 2)) is None


def test_refinement_square_examples():
    free = oracle("free")
    sq = refinement_square(free, F(1, 0), F(0, 1), F(1, 0), F(0, 1))
    assert (sq.x, sq.y, sq.z, sq.t) == (F(1, 0), F(0, 0), F(0, 0), F(0, 1))
    sq = refinement_square(free, F(0, 0), F(1, 1), F(1, 0), F(0, 1))
    assert (sq.x, sq.y, sq.z, sq.t) == (F(0, 0), F(0, 0), F(1, 0), F(0, 1))
    with pytest.raises(ValueError):
        refinement_square(free, F(1, 0), F(0, 0), F(0, 1), F(0, 0))


def _finite_small(o, top):
    return [F(a, b) for a in range(top + 1) for b in range(top + 1)]


@pytest.mark.parametrize("name", sorted(CURATED))
def test_add_transitive(name):
    o = build_oracle(CURATED[name], 6)
    pts = _finite_small(o, 2)
    for x, y, z in itertools.product(pts, repeat=3):
        if add_member(o, y, x) and add_member(o, z, y):
            assert add_member(o, z, x)


@pytest.mark.parametrize("name", sorted(CURATED))
def test_type_labels_consistent(name):
    o = oracle(name)
    c = classify(o)
    both = add_member(o, F(1, 0), F(0, 1)) and add_member(o, F(0, 1), F(1, 0))
    if not isinstance(c, Cyclic):
        assert isinstance(c, Type3) == both


@pytest.mark.parametrize("name", sorted(CURATED))
def test_refinement_lemma_shift(name):
    # n·x + k·y = m·x + k'·y with n > m gives (n-m+1)·x + k·y = x + k'·y
    o = build_oracle(CURATED[name], 8)
    if not is_refinement(o):
        return
    for (i, j) in ((0, 1), (1, 0)):
        for n, m, k, k2 in itertools.product(range(4), repeat=4):
            if n <= m:
                continue
            a = Form.unit(2, i, n) + Form.unit(2, j, k)
            b = Form.unit(2, i, m) + Form.unit(2, j, k2)
            if o.same(a, b):
                assert o.same(Form.unit(2, i, n - m + 1) + Form.unit(2, j, k),
                              Form.unit(2, i, 1) + Form.unit(2, j, k2))


@pytest.mark.parametrize("name", sorted(CURATED))
def test_refinement_lemma_cancel(name):
    o = build_oracle(CURATED[name], 8)
    if not is_refinement(o):
        return
    cls = classify(o)
    for (i, j) in ((0, 1), (1, 0)):
        x, y = Form.unit(2, i), Form.unit(2, j)
        hit = any(
            o.same(y.scale(n), x.scale(m) + y.scale(n2))
            for n, m, n2 in itertools.product(range(1, 5), range(1, 5), range(0, 5))
        )
        if hit:
            assert is_cancelable(o, x)
            if isinstance(cls, Type2) and (cls.i, cls.j) == (i, j):
                assert leq(o, x, y)


@pytest.mark.parametrize("name", ["free", "x1=2x2", "x2=x1+x2", "x1=x1+x2"])
def test_primely_generated(name):
    # every nonzero finite class is a sum of primes (bounded search)
    o = build_oracle(CURATED[name], 6)
    small = [p for p in o.points(finite_only=True) if max(o.codes(p)) <= 2]
    primes = [p for p in small if o.label(p) != o.label(0) and is_prime(o, o.form_at(p))]
    reach = {o.label(0)}
    frontier = {0}
    while frontier:
        new = set()
        for q in frontier:
            for p in primes:
                s = o.add_idx(q, p)
                if s is not None and o.label(s) not in reach:
                    reach.add(o.label(s))
                    new.add(s)
        frontier = new
    for p in small:
        assert o.label(p) in reach
