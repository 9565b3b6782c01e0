import pytest
from hypothesis import given, settings

from conftest import permutation_groups, posets
from exodromy.category import (FinCat, Functor, action_groupoid, all_functors, are_equivalent, comma,
                               coslice_category, is_equivalence, is_natural_transformation, product_category,
                               slice_category, validate_category)
from exodromy.errors import ValidationError
from exodromy.groups import FinGroup
from exodromy.poset import FinPoset


def monotone_maps(P, Q):
    from itertools import product
    return [m for m in product(range(len(Q)), repeat=len(P))
            if all(Q.le(m[a], m[b]) for a, b in P.relations())]


def test_poset_category():
    C = FinCat.from_poset(FinPoset.chain(2))
    assert validate_category(C) == []
    assert C.n_morphisms == 6
    assert C.compose(C.mor((1, 2)), C.mor((0, 1))) == C.mor((0, 2))


def test_broken_composition_is_reported():
    C = FinCat.from_poset(FinPoset.chain(1))
    table = dict(C.table)
    table.pop(next(iter(table)))
    with pytest.raises(ValidationError):
        FinCat(C.objects, C.mor_labels, C.src, C.tgt, C.identities, table)


def test_bad_functor_is_rejected():
    C = FinCat.from_poset(FinPoset.chain(1))
    with pytest.raises(ValidationError):
        Functor(C, C, [1, 0], [2, 1, 0])


def test_slice_and_coslice_of_chain():
    C = FinCat.from_poset(FinPoset.chain(2))
    assert slice_category(C, 2).category.n_objects == 3
    assert coslice_category(C, 2).category.n_objects == 1
    assert coslice_category(C, 0).category.n_objects == 3


def test_comma_of_group():
    BG = FinGroup.symmetric(3).classifying_category()
    K = comma(Functor.identity(BG), Functor.identity(BG))
    assert K.category.n_objects == 6
    assert validate_category(K.category) == []


def test_product_category():
    C = FinCat.from_poset(FinPoset.chain(1))
    P = product_category(C, C)
    assert P.n_objects == 4 and P.n_morphisms == 9
    assert validate_category(P) == []


def test_equivalence_of_groupoids():
    G = FinGroup.cyclic(3)
    BG = G.classifying_category()
    A = action_groupoid(3, G.elements)  # transitive free action: contractible
    assert are_equivalent(A, FinCat.discrete(["*"])) is not None
    assert are_equivalent(BG, FinGroup.cyclic(2).classifying_category()) is None
    # S3 acting on 3 points: one orbit, stabiliser of order 2
    S3 = FinGroup.symmetric(3)
    A3 = action_groupoid(3, S3.elements)
    witness = are_equivalent(A3, FinGroup.cyclic(2).classifying_category())
    assert witness is not None
    assert is_equivalence(witness.functor) and is_equivalence(witness.inverse)


def test_equivalence_witness_has_natural_unit():
    S3 = FinGroup.symmetric(3)
    A3 = action_groupoid(3, S3.elements)
    B = FinGroup.cyclic(2).classifying_category()
    w = are_equivalent(A3, B)
    round_trip = w.functor.then(w.inverse)
    assert is_natural_transformation(Functor.identity(A3), round_trip, w.unit)


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_functor_count_between_chains(n, m):
    P, Q = FinPoset.chain(n), FinPoset.chain(m)
    got = all_functors(FinCat.from_poset(P), FinCat.from_poset(Q))
    assert len(got) == len(monotone_maps(P, Q))


def test_endofunctors_of_bg_are_endomorphisms():
    G = FinGroup.symmetric(3)
    BG = G.classifying_category()
    # S3 has 10 endomorphisms: 6 automorphisms, 3 with image of order 2, 1 trivial
    assert len(all_functors(BG, BG)) == 10


@settings(max_examples=40, deadline=None)
@given(posets())
def test_poset_categories_validate(P):
    C = FinCat.from_poset(P)
    assert validate_category(C) == []
    assert C.n_morphisms == len(P.relations())
    assert validate_category(C.op()) == []


@settings(max_examples=30, deadline=None)
@given(posets(max_size=4))
def test_slice_sizes_match_down_sets(P):
    C = FinCat.from_poset(P)
    for x in P:
        assert slice_category(C, x).category.n_objects == len(P.down(x))
        assert coslice_category(C, x).category.n_objects == len(P.up(x))


@settings(max_examples=30, deadline=None)
@given(permutation_groups(max_degree=4))
def test_action_groupoids_are_groupoids(G):
    A = action_groupoid(G.degree, G.elements)
    assert validate_category(A) == []
    assert A.is_groupoid()
    assert A.n_morphisms == G.order() * G.degree


@settings(max_examples=30, deadline=None)
@given(posets(max_size=4))
def test_poset_equivalent_to_itself_only_by_isomorphism(P):
    C = FinCat.from_poset(P)
    w = are_equivalent(C, C)
    assert w is not None
    assert sorted(w.functor.obj_map) == list(range(len(P)))
