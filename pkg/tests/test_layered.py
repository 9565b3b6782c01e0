import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import permutation_groups, posets
from exodromy.category import FinCat, are_equivalent
from exodromy.corpus import dvr_triples
from exodromy.errors import NotComparable, UnknownPoint, ValidationError
from exodromy.galois import build_dvr, build_two_stratum
from exodromy.groups import FinGroup, GroupHom
from exodromy.layered import (LayeredCat, PresCat, coarsen, h0, hom_fiber, layered_equivalence, link, pullback,
                              realize, stratum, truncation_report)
from exodromy.poset import FinPoset, MonotoneMap


def test_non_conservative_labelling_is_rejected():
    C = FinCat.from_poset(FinPoset.chain(1))
    with pytest.raises(ValidationError):
        LayeredCat.over_point(C)


def test_dvr_shape():
    L = build_dvr()
    s, eta = L.base.index("s"), L.base.index("eta")
    assert stratum(L, s).n_morphisms == 2
    assert stratum(L, eta).n_morphisms == 6
    x, y = L.over(s)[0], L.over(eta)[0]
    assert len(L.cat.hom(x, y)) == 6
    assert not L.cat.hom(y, x)
    H, _ = h0(L)
    assert len(H) == 2 and H.height() == 1


@pytest.mark.parametrize("triple", dvr_triples(), ids=lambda t: t[0])
def test_two_stratum_hom_counts(triple):
    name, Gz, Gu, D, to_z, to_u, expected = triple
    L = build_two_stratum(Gz, Gu, D, to_z, to_u)
    assert len(L.cat.hom(L.over(0)[0], L.over(1)[0])) == expected


def test_link_of_dvr():
    L = build_dvr()
    lk = link(L, 0, 1)
    assert lk.groupoid.is_groupoid()
    assert lk.stratum_p.n_morphisms == 2 and lk.stratum_q.n_morphisms == 6
    assert len(hom_fiber(lk, 0, 0)) == 6
    with pytest.raises(NotComparable):
        link(L, 1, 0)
    with pytest.raises(UnknownPoint):
        stratum(L, 5)


def test_truncation_report():
    assert truncation_report(LayeredCat.from_poset(FinPoset.chain(2)))["is_posetal"]
    report = truncation_report(build_dvr())
    assert not report["is_posetal"]
    assert report["details"]["max_automorphism_order"] == 6


def test_prescat_validation():
    P = PresCat(["a", "b"], [("f", 0, 1)], [(0, ((0, -1),), ())])
    assert P.validate()
    Q = PresCat(["a", "b"], [("f", 0, 1), ("g", 0, 1)], [(0, ((0, 1),), ((1, 1),))])
    assert Q.validate() == []
    assert Q.pi0() == [[0, 1]]


def test_coarsening_inverts_morphisms_over_identities():
    X = FinPoset.chain(1)
    pres = coarsen(LayeredCat.from_poset(X), MonotoneMap.to_point(X))
    assert pres.inverted == frozenset({0})
    assert pres.validate() == []


@settings(max_examples=40, deadline=None)
@given(posets())
def test_h0_of_poset_is_the_poset(P):
    H, q = h0(LayeredCat.from_poset(P))
    assert H == P
    assert list(q.obj_map) == list(range(len(P)))


@settings(max_examples=30, deadline=None)
@given(posets(max_size=4))
def test_pullback_along_identity(P):
    L = LayeredCat.from_poset(P)
    assert layered_equivalence(pullback(L, MonotoneMap.identity(P)), L) is not None


@settings(max_examples=30, deadline=None)
@given(posets(max_size=4))
def test_realize_recovers_category(P):
    L = LayeredCat.from_poset(P)
    C = realize(coarsen(L, MonotoneMap.identity(P)))
    assert C.n_morphisms == L.cat.n_morphisms
    assert are_equivalent(C, L.cat) is not None


@st.composite
def group_with_subgroup(draw):
    G = draw(permutation_groups(max_degree=4))
    gens = draw(st.lists(st.sampled_from(G.elements), max_size=2))
    return G, FinGroup(G.degree, gens)


@settings(max_examples=30, deadline=None)
@given(group_with_subgroup())
def test_hom_count_is_coset_index(data):
    G, D = data
    triv = FinGroup.trivial(G.degree)
    L = build_two_stratum(triv, G, D, GroupHom.trivial(D, triv), GroupHom.inclusion(D, G))
    assert len(L.cat.hom(L.over(0)[0], L.over(1)[0])) == G.order() // D.order()


@settings(max_examples=30, deadline=None)
@given(group_with_subgroup(), group_with_subgroup())
def test_hom_count_when_link_injects(a, b):
    Gz, _ = a
    Gu, D = b
    # D maps to Gu by inclusion, so D -> Gz x Gu injects for any map to Gz
    L = build_two_stratum(Gz, Gu, D, GroupHom.trivial(D, Gz), GroupHom.inclusion(D, Gu))
    assert len(L.cat.hom(L.over(0)[0], L.over(1)[0])) == Gz.order() * Gu.order() // D.order()
