import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exodromy.category import Functor
from exodromy.corpus import curve_specs
from exodromy.errors import NotBaseCompatible, UnknownObject, ValidationError
from exodromy.galois import (INFINITY, CurveSpec, build_curve_level, build_dvr, classify_gal_morphism,
                             curve_point, curve_presentation, curve_quotient_functor, curve_tower_bond,
                             cyclic_curve_spec, localize_normalize, stratum_inclusion)
from exodromy.groups import FinGroup
from exodromy.layered import LayeredCat, h0
from exodromy.poset import FinPoset


def test_curve_presentation_shape():
    P = curve_presentation(2, 3)
    assert P.generators == ("a1", "b1", "a2", "b2", "c1", "c2")
    assert len(P.relators) == 3
    assert P.word_string(P.relators[2]) == "c2"
    with pytest.raises(ValueError):
        curve_presentation(0, 1)


def test_curve_spec_validation():
    with pytest.raises(ValidationError):
        build_curve_level(CurveSpec(1, 2, 3, [(0, 1, 2)]))


@pytest.mark.parametrize("name,spec", curve_specs(), ids=[n for n, _ in curve_specs()])
def test_curve_hom_counts_are_coset_indices(name, spec):
    L = build_curve_level(spec)
    Q = spec.group()
    top = curve_point(L, INFINITY)
    for i, gamma in enumerate(spec.gamma_images()):
        assert len(L.cat.hom(curve_point(L, i), top)) == Q.order() // FinGroup(spec.degree, [gamma]).order()
    assert len(L.cat.hom(top, top)) == Q.order()


def test_quotient_functor_is_full():
    a = build_curve_level(cyclic_curve_spec(1, 2, 4, [1, 0, 0]))
    b = build_curve_level(cyclic_curve_spec(1, 2, 2, [1, 0, 0]))
    F = curve_quotient_functor(a, b)
    assert F.validate() == []
    for x in range(a.cat.n_objects):
        for y in range(a.cat.n_objects):
            image = {F.mor_map[f] for f in a.cat.hom(x, y)}
            assert image == set(b.cat.hom(F.obj_map[x], F.obj_map[y]))


def test_tower_bond():
    spec = cyclic_curve_spec(1, 2, 5, [1, 0, 0])
    p, extended = curve_tower_bond(spec)
    assert p.assignment == (0, 1, 2, 2)
    assert extended.n == 3 and extended.validate() == []
    L = build_curve_level(extended)
    assert len(L.cat.hom(curve_point(L, 2), curve_point(L, INFINITY))) == 5


def test_dictionary_on_dvr_strata():
    L = build_dvr()
    closed, i = stratum_inclusion(L, L.base.index("s"))
    opened, j = stratum_inclusion(L, L.base.index("eta"))
    ti = classify_gal_morphism(closed, L, i)
    tj = classify_gal_morphism(opened, L, j)
    assert ti["immersion"] == "closed-immersion" and ti["finite_like"]
    assert tj["immersion"] == "open-immersion" and tj["etale_like"]


def test_functor_must_match_layered_categories():
    L = LayeredCat.from_poset(FinPoset.chain(1))
    other = LayeredCat.from_poset(FinPoset.chain(1))
    F = Functor.identity(L.cat)
    with pytest.raises(NotBaseCompatible):
        classify_gal_morphism(other, L, F)
    tags = classify_gal_morphism(L, L, F)
    assert tags["kan"] and tags["radicial_like"] and tags["h0_image"] == "clopen"


def test_localize_and_normalize_dvr():
    L = build_dvr()
    s, eta = L.over(0)[0], L.over(1)[0]
    low = localize_normalize(L, s)
    high = localize_normalize(L, eta)
    # objects of a coslice (slice) are the morphisms out of (into) the object
    assert low["coslice"].cat.n_objects == sum(len(L.cat.hom(s, y)) for y in range(L.cat.n_objects))
    assert high["slice"].cat.n_objects == sum(len(L.cat.hom(y, eta)) for y in range(L.cat.n_objects))
    assert low["weakly_initial"] and not low["weakly_terminal"]
    assert high["weakly_terminal"] and not high["weakly_initial"]
    assert low["weakly_initial_in_coslice"] and high["weakly_terminal_in_slice"]
    with pytest.raises(UnknownObject):
        localize_normalize(L, 7)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1), st.integers(2, 3), st.sampled_from([2, 3, 5]), st.data())
def test_random_cyclic_curves(g, n, order, data):
    k = 2 * g + n - 1
    exps = data.draw(st.lists(st.integers(0, order - 1), min_size=k, max_size=k))
    spec = cyclic_curve_spec(g, n, order, exps)
    L = build_curve_level(spec)
    H, _ = h0(L)
    assert len(H) == n + 1 and H.height() == 1
    Q = spec.group()
    for i, gamma in enumerate(spec.gamma_images()):
        want = Q.order() // FinGroup(spec.degree, [gamma]).order()
        assert len(L.cat.hom(curve_point(L, i), curve_point(L, INFINITY))) == want
