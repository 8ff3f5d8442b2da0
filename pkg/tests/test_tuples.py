import pytest
from hypothesis import given, strategies as st

from orbsemi.transforms import FPTransform, compose, partial_identity
from orbsemi.tuples import (
    EMPTY_TUPLE,
    NTuple,
    act,
    extends,
    merge,
    parse_tuple,
    restrict_tuple,
)


atoms = st.sampled_from("abc")
ntuples = st.dictionaries(st.integers(1, 4), atoms, max_size=4).map(NTuple.of)
transforms = st.dictionaries(st.integers(1, 4), st.integers(1, 4), max_size=4).map(
    FPTransform.of)


def test_basic_accessors():
    t = NTuple.of({2: "b", 1: "a"})
    assert t.pairs == ((1, "a"), (2, "b"))
    assert t.df == {1, 2}
    assert t.rng == {"a", "b"}
    assert t(1) == "a"
    assert t.get(9) is None


def test_act_is_precomposition():
    t = NTuple.of({1: "a", 2: "b"})
    lam = FPTransform.of({3: 1, 4: 9})
    assert act(t, lam) == NTuple.of({3: "a"})


@given(ntuples, transforms, transforms)
def test_act_respects_composition(t, lam, mu):
    assert act(act(t, mu), lam) == act(t, compose(mu, lam))


@given(ntuples)
def test_restrict_via_partial_identity(t):
    assert restrict_tuple(t, {1, 2}) == act(t, partial_identity({1, 2}))
    assert restrict_tuple(t, t.df) == t


def test_extends():
    t = NTuple.of({1: "a"})
    tt = NTuple.of({1: "a", 2: "b"})
    assert extends(t, tt)
    assert not extends(tt, t)
    assert extends(EMPTY_TUPLE, tt)


def test_merge_disjoint_and_conflict():
    assert merge(NTuple.of({1: "a"}), NTuple.of({2: "b"})) == NTuple.of(
        {1: "a", 2: "b"})
    assert merge(NTuple.of({1: "a"}), NTuple.of({1: "b"})) is None
    assert merge(NTuple.of({1: "a"}), NTuple.of({1: "a"})) == NTuple.of({1: "a"})


@given(ntuples, ntuples)
def test_merge_is_least_common_extension(t1, t2):
    m = merge(t1, t2)
    if m is None:
        assert any(t1(v) != t2(v) for v in t1.df & t2.df)
    else:
        assert extends(t1, m) and extends(t2, m)
        assert m.df == t1.df | t2.df


def test_parse_tuple():
    assert parse_tuple("{x1:a, x3:b}") == NTuple.of({1: "a", 3: "b"})
    assert parse_tuple("{}") == EMPTY_TUPLE
    with pytest.raises(ValueError):
        parse_tuple("{x1:a, x1:b}")
    with pytest.raises(ValueError):
        parse_tuple("x1:a")


def test_sorted_pairs_enforced():
    with pytest.raises(ValueError):
        NTuple(((2, "a"), (1, "b")))
    with pytest.raises(ValueError):
        NTuple(((0, "a"),))
