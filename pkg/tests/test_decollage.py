import pytest
from hypothesis import given, settings

from conftest import permutation_groups, posets
from exodromy.category import FinCat, are_equivalent, product_category
from exodromy.corpus import random_corpus
from exodromy.decollage import (Decollage, constant_point, group_decollage, nerve, reassemble, segal_report,
                                validate_decollage)
from exodromy.errors import HeightExceeded
from exodromy.galois import build_dvr, build_two_stratum
from exodromy.groups import FinGroup, GroupHom
from exodromy.layered import LayeredCat, layered_equivalence
from exodromy.poset import FinPoset


def test_constant_point_reassembles_to_base():
    P = FinPoset.from_relations("abcd", [("a", "c"), ("b", "c"), ("c", "d")])
    L = reassemble(constant_point(P))
    assert layered_equivalence(L, LayeredCat.from_poset(P)) is not None


def test_nerve_of_dvr():
    L = build_dvr()
    D = nerve(L)
    assert validate_decollage(D) == []
    assert len(D.values) == 3
    assert layered_equivalence(reassemble(D), L) is not None


def test_nonabelian_identity_link():
    # S3 <- S3 -> S3 with identity maps: the reassembly is B S3 x [1]
    S3 = FinGroup.symmetric(3)
    ident = GroupHom.inclusion(S3, S3)
    L = build_two_stratum(S3, S3, S3, ident, ident)
    assert L.cat.n_morphisms == 18
    expected = product_category(S3.classifying_category(), FinCat.from_poset(FinPoset.chain(1)))
    assert are_equivalent(L.cat, expected) is not None


def test_group_decollage_needs_short_chains():
    with pytest.raises(HeightExceeded):
        group_decollage(FinPoset.chain(2), {}, {})


def test_missing_restriction_is_reported():
    D = nerve(LayeredCat.from_poset(FinPoset.chain(1)))
    restrictions = dict(D.restrictions)
    del restrictions[((0, 1), (0,))]
    assert validate_decollage(Decollage(D.base, D.values, restrictions))


def test_segal_on_three_chain():
    L = LayeredCat.from_poset(FinPoset.chain(2))
    D = nerve(L)
    assert segal_report(D, (0, 1, 2)) == []


@settings(max_examples=40, deadline=None)
@given(posets())
def test_poset_round_trip(P):
    L = LayeredCat.from_poset(P)
    D = nerve(L)
    assert validate_decollage(D) == []
    assert layered_equivalence(reassemble(D), L) is not None


@settings(max_examples=25, deadline=None)
@given(permutation_groups(max_degree=3), permutation_groups(max_degree=3))
def test_group_round_trip(Gz, Gu):
    D = FinGroup.trivial(1)
    L = build_two_stratum(Gz, Gu, D, GroupHom.trivial(D, Gz), GroupHom.trivial(D, Gu))
    assert layered_equivalence(reassemble(nerve(L)), L) is not None


def test_random_corpus_round_trip():
    for name, L in random_corpus():
        assert validate_decollage(nerve(L)) == [], name
        assert layered_equivalence(reassemble(nerve(L)), L) is not None, name
