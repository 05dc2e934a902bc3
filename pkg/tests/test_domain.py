import pytest
from hypothesis import given
from hypothesis import strategies as st

from slotcsp.domain import EMPTY, FiniteDomain, domain_of, interval
from slotcsp.errors import EmptyDomain

values = st.integers(-20, 20)
domains = st.frozensets(values, max_size=25).map(FiniteDomain.from_values)


def test_interval():
    assert list(interval(1, 5)) == [1, 2, 3, 4, 5]
    assert list(interval(3, 3)) == [3]
    assert interval(5, 1) == EMPTY
    assert interval(5, 1).is_empty()


def test_remove():
    d = interval(1, 5)
    assert d.remove(3).intervals == ((1, 2), (4, 5))
    assert list(d) == [1, 2, 3, 4, 5]  # value semantics
    assert domain_of(1, 2).remove(7) == domain_of(1, 2)
    assert EMPTY.remove(1) == EMPTY


def test_remove_all():
    # d=3, cst=2 removal pattern applied to 1..5
    assert interval(1, 5).remove_all({3, 5, 1}) == domain_of(2, 4)
    assert interval(1, 3).remove_all(set()) == interval(1, 3)
    assert domain_of(2).remove_all({2}) == EMPTY


def test_intersect():
    assert interval(1, 5) & interval(4, 9) == domain_of(4, 5)
    assert domain_of(1, 3, 5) & domain_of(2, 4) == EMPTY
    d = domain_of(1, 2, 7, 9)
    assert d & d == d


def test_bounds():
    d = domain_of(2, 4, 9)
    assert d.min() == 2
    assert d.max() == 9
    with pytest.raises(EmptyDomain):
        EMPTY.min()
    with pytest.raises(EmptyDomain):
        EMPTY.max()


def test_hull():
    assert domain_of(1, 2, 4, 5).hull() == interval(1, 5)
    assert domain_of(3).hull() == domain_of(3)
    assert EMPTY.hull() == EMPTY


def test_queries():
    d = domain_of(1, 2, 4, 5)
    assert d.size() == len(d) == 4
    assert domain_of(7).is_singleton()
    assert not d.is_singleton()
    assert 4 in d and 3 not in d
    assert list(interval(1, 3)) == [1, 2, 3]
    assert domain_of(7).value() == 7


def test_rendering():
    assert str(FiniteDomain.from_values([1, 2, 3, 5, 7, 8, 9])) == "{1..3,5,7..9}"
    assert str(EMPTY) == "{}"
    assert str(domain_of(-2, -1)) == "{-2..-1}"


def test_constructor_normalizes():
    d = FiniteDomain([(4, 6), (1, 2), (3, 3), (9, 8), (10, 12), (11, 11)])
    assert d.intervals == ((1, 6), (10, 12))


@given(st.lists(st.tuples(values, values)))
def test_normal_form(pairs):
    iv = FiniteDomain(pairs).intervals
    for lo, hi in iv:
        assert lo <= hi
    for (_, b), (c, _) in zip(iv, iv[1:]):
        assert b + 1 < c


@given(st.frozensets(values), st.frozensets(values))
def test_equality_is_set_equality(a, b):
    da, db = FiniteDomain.from_values(a), FiniteDomain.from_values(b)
    assert (da == db) == (a == b)
    assert (da.intervals == db.intervals) == (a == b)


@given(domains, values)
def test_remove_size(d, v):
    assert d.remove(v).size() == d.size() - (1 if v in d else 0)
    assert set(d.remove(v)) == set(d) - {v}


@given(domains, domains, domains)
def test_intersect_laws(a, b, c):
    assert a & b == b & a
    assert (a & b) & c == a & (b & c)
    assert a & a == a
    assert set(a & b) == set(a) & set(b)


@given(domains)
def test_hull_and_iteration(d):
    assert d.issubset(d.hull())
    items = list(d)
    assert items == sorted(set(items))
    assert len(items) == d.size()
    assert FiniteDomain.from_values(items) == d


@given(domains, domains)
def test_union(a, b):
    assert set(a | b) == set(a) | set(b)
