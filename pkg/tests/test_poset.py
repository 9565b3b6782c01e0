from itertools import combinations

import pytest
from hypothesis import given, settings

from conftest import posets
from exodromy.errors import NotT0, ValidationError
from exodromy.poset import (FiniteSpace, FinPoset, MonotoneMap, PosetTower, alexandroff, classify_subposet,
                            enumerate_stratifications, posets_up_to_iso, specialization_poset, subdivision,
                            tower_limit)


def brute_force_poset_count(n):
    """Count partial orders on n points up to isomorphism by filtering all relations."""
    seen = set()
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in range(1 << len(pairs)):
        rel = {p for k, p in enumerate(pairs) if bits >> k & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, d) not in rel for a, b in rel for c, d in rel if b == c and a != d):
            continue
        P = FinPoset(range(n), [[i == j or (i, j) in rel for j in range(n)] for i in range(n)], check=False)
        seen.add(P.canonical_form())
    return len(seen)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_posets_up_to_iso_matches_brute_force(n):
    assert len(posets_up_to_iso(n)) == brute_force_poset_count(n)


def test_five_point_posets():
    assert [len(posets_up_to_iso(n)) for n in range(1, 6)] == [1, 2, 5, 16, 63]


def test_chain_and_discrete():
    P = FinPoset.chain(2)
    assert len(P) == 3 and P.height() == 2
    assert P.covers() == [(0, 1), (1, 2)]
    assert FinPoset.discrete(3).height() == 0
    assert FinPoset.point().sieves() == [frozenset(), frozenset({0})]


def test_invalid_poset_is_rejected():
    with pytest.raises(ValidationError):
        FinPoset.from_relations(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(ValidationError):
        FinPoset.from_relations(["a"], [("a", "z")])


def test_sieves_of_chain():
    for n in range(4):
        assert len(FinPoset.chain(n).sieves()) == n + 2


def test_classify_subposet():
    P = FinPoset.chain(2)
    assert classify_subposet(P, [0]) == "sieve"
    assert classify_subposet(P, [2]) == "cosieve"
    assert classify_subposet(P, [1]) == "interval"
    assert classify_subposet(P, [0, 2]) == "none"
    assert classify_subposet(P, [0, 1, 2]) == "clopen"


def test_subdivision_of_simplex():
    for n in range(4):
        sd = subdivision(FinPoset.chain(n))
        assert len(sd) == 2 ** (n + 1) - 1
        assert sd.height() == n


def test_alexandroff_opens_of_chain():
    X = alexandroff(FinPoset.chain(1))
    assert X.sorted_opens() == [frozenset(), frozenset({1}), frozenset({0, 1})]


def test_non_t0_space_has_no_specialization_poset():
    X = FiniteSpace(["a", "b"], [[], [0, 1]])
    with pytest.raises(NotT0):
        specialization_poset(X)


def test_finite_space_validation():
    with pytest.raises(ValidationError):
        FiniteSpace(["a", "b", "c"], [[], [0], [1], [0, 1, 2]])


def test_stratifications_of_interval():
    maps = enumerate_stratifications(FinPoset.chain(1))
    assert len(maps) == 2
    assert {len(f.target) for f in maps} == {1, 2}
    assert len(enumerate_stratifications(FinPoset.chain(1), nondegenerate=False)) == 2


def test_degenerate_stratification_detected():
    V = FinPoset.from_relations(["a", "b", "c"], [("a", "b")])
    f = MonotoneMap(V, FinPoset.chain(1), [0, 1, 0])
    assert f.is_surjective()
    assert not f.is_nondegenerate()  # the point c of stratum 0 lies below nothing in stratum 1


def test_monotone_map_validation():
    with pytest.raises(ValidationError):
        MonotoneMap(FinPoset.chain(1), FinPoset.chain(1), [1, 0])


def test_constant_tower_limit():
    P = FinPoset.from_relations("abc", [("a", "c"), ("b", "c")])
    idx = FinPoset.chain(2)
    ident = MonotoneMap.identity(P)
    T = PosetTower(idx, {i: P for i in idx}, {(0, 1): ident, (1, 2): ident})
    lim = tower_limit(T)
    assert lim.isomorphism(P) is not None


def test_tower_limit_of_projection():
    idx = FinPoset.chain(1)
    top, bottom = FinPoset.chain(1), FinPoset.point()
    T = PosetTower(idx, {0: bottom, 1: top}, {(0, 1): MonotoneMap.to_point(top)})
    assert len(tower_limit(T)) == 2


@settings(max_examples=60, deadline=None)
@given(posets())
def test_alexandroff_round_trip(P):
    Q = specialization_poset(alexandroff(P))
    assert Q == P


@settings(max_examples=60, deadline=None)
@given(posets())
def test_alexandroff_opens_form_a_topology(P):
    assert alexandroff(P).validate() == []


@settings(max_examples=60, deadline=None)
@given(posets())
def test_sieve_complements_are_cosieves(P):
    everything = frozenset(P)
    assert {everything - s for s in P.sieves()} == set(P.cosieves())


@settings(max_examples=40, deadline=None)
@given(posets(max_size=4))
def test_subdivision_is_a_poset_of_chains(P):
    sd = subdivision(P)
    assert sd.validate() == []
    for chain in sd.strings:
        assert all(P.lt(a, b) for a, b in zip(chain, chain[1:]))
    assert len(sd) == sum(1 for r in range(1, len(P) + 1) for c in combinations(P, r)
                          if all(P.le(a, b) or P.le(b, a) for a in c for b in c))


@settings(max_examples=40, deadline=None)
@given(posets(max_size=4))
def test_stratifications_are_nondegenerate_and_distinct(P):
    maps = enumerate_stratifications(P)
    assert all(f.is_nondegenerate() for f in maps)
    keys = [(f.assignment, f.target.leq) for f in maps]
    assert len(set(keys)) == len(keys)
    assert any(len(f.target) == 1 for f in maps)
