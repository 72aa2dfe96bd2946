from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alephmon.braiding import (
    BraidingCertificate,
    BraidingError,
    explain_braiding,
    find_braiding,
    telescope,
    to_partition,
    verify_braiding,
    verify_partition,
)
from alephmon.congruence import build_oracle
from alephmon.forms import FamilySpec, Form, family_sum

from conftest import CURATED, oracle, pres

F = Form.of


def fam(tail, *prefix):
    return FamilySpec(tuple(prefix), tail)


def test_identical_families_trivial_certificate():
    o = oracle("free")
    x = fam(F(1, 0))
    c = BraidingCertificate((0, 1, 2), (0, 1, 2), (F(0, 0),) * 2, (F(1, 0),) * 2, 1, 1)
    assert verify_braiding(o, x, x, c)
    found = find_braiding(o, x, x)
    assert found == c


def test_k1_double_tail():
    o = build_oracle(pres(k=1), 10)
    x, y = fam(F(2)), fam(F(1))
    c = BraidingCertificate((0, 1, 2), (1, 3, 5), (F(0),) * 2, (F(2),) * 2, 1, 1)
    assert verify_braiding(o, x, y, c)
    found = find_braiding(o, x, y)
    assert found is not None and found.n_cuts[:2] == (1, 3)
    assert verify_braiding(o, x, y, found)


def test_unequal_sums_rejected():
    o = oracle("free")
    with pytest.raises(BraidingError):
        find_braiding(o, fam(F(1, 0)), fam(F(0, 1)))
    c = BraidingCertificate((0, 1), (0, 1), (F(0, 0),), (F(1, 0),), 0, 1)
    with pytest.raises(BraidingError):
        verify_braiding(o, fam(F(1, 0)), fam(F(0, 1)), c)


def test_malformed_certificate():
    o = oracle("free")
    x = fam(F(1, 0))
    bad = BraidingCertificate((0, 0, 1), (0, 1, 2), (F(0, 0),) * 2, (F(1, 0),) * 2, 1, 1)
    with pytest.raises(BraidingError):
        verify_braiding(o, x, x, bad)
    wrong = BraidingCertificate((0, 1, 2), (0, 1, 2), (F(0, 0),) * 2, (F(0, 1),) * 2, 1, 1)
    assert explain_braiding(o, x, x, wrong) == "v_0 differs from x_0"


def test_omega_fixture_outcome():
    # sums (ω,0) and (2,ω) agree at B=10; the search finds nothing within the horizon
    o = oracle("2x1=wx2")
    x, y = fam(F(1, 0)), fam(F(0, 1), F(2, 0))
    assert o.same(family_sum(x), family_sum(y))
    assert find_braiding(o, x, y, horizon=20) is None


def test_json_round_trip():
    o = oracle("x1=2x2")
    c = find_braiding(o, fam(F(0, 1), F(1, 0)), fam(F(0, 1)))
    assert BraidingCertificate.from_json(c.to_json()) == c


def _pairs(name, limit):
    o = oracle(name)
    small = [F(a, b) for a in range(3) for b in range(3)]
    fams = [FamilySpec(pre, t) for t in small if not t.is_zero for pre in [()] + [(f,) for f in small]]
    out = []
    for x, y in itertools.combinations(fams, 2):
        if o.same(family_sum(x), family_sum(y)):
            out.append((x, y))
            if len(out) >= limit:
                break
    return o, out


@pytest.mark.parametrize("name", ["free", "x1=2x2", "x2=x1+x2", "2x1+x2=x1+2x2", "x1=x1+x2"])
def test_found_certificates_are_sound(name):
    o, pairs = _pairs(name, 8)
    assert pairs
    for x, y in pairs:
        c = find_braiding(o, x, y)
        assert c is not None
        assert verify_braiding(o, x, y, c)
        assert o.same(telescope(o, c), family_sum(x))
        assert o.same(telescope(o, c), family_sum(y))
        assert verify_partition(o, x, y, to_partition(c))


coeff = st.integers(0, 2)
form = st.tuples(coeff, coeff).map(lambda t: F(*t))
families = st.builds(
    lambda pre, t: FamilySpec(tuple(pre), t),
    st.lists(form, max_size=2),
    form.filter(lambda f: not f.is_zero),
)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CURATED)), families)
def test_self_braiding_always_succeeds(name, x):
    o = oracle(name)
    c = find_braiding(o, x, x)
    assert c is not None and verify_braiding(o, x, x, c)


def test_partition_rejects_tampering():
    o = oracle("free")
    x = fam(F(1, 0))
    c = find_braiding(o, x, x)
    pc = to_partition(c)
    assert verify_partition(o, x, x, pc)
    broken = type(pc)(pc.I[:-1] + ((pc.I[-1][0], pc.I[-1][1] + 1),), pc.J, pc.u_seq, pc.v_seq,
                      pc.period_start, pc.period_len)
    assert not verify_partition(o, x, x, broken)
