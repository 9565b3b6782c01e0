from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import posets
from exodromy.category import FinCat, Functor
from exodromy.errors import CapExceeded, NotASieve, ValidationError
from exodromy.galois import build_dvr
from exodromy.groups import FinGroup
from exodromy.layered import LayeredCat, PresCat
from exodromy.poset import FinPoset, MonotoneMap
from exodromy.sheaf import (SetFunctor, are_isomorphic, beck_chevalley_check, count_functor_iso_classes,
                            enumerate_set_functors, exodromy_check, iso_class_representatives, kan_counit,
                            limit_of_diagram, limit_of_set_functor, natural_transformations,
                            recollement_counts, recollement_round_trip, recollement_sweep,
                            right_kan_extension)


def brute_force_functors(C, k):
    """Every functor C -> sets of size <= k by trying all size vectors and all maps."""
    out = []
    for sizes in product(range(k + 1), repeat=C.n_objects):
        choices = [list(product(range(sizes[C.tgt[f]]), repeat=sizes[C.src[f]])) for f in range(C.n_morphisms)]
        for maps in product(*choices):
            F = SetFunctor(C, sizes, maps, check=False)
            if not F.validate():
                out.append(F)
    return out


def brute_force_classes(functors):
    """Iso classes via a canonical form: least relabelled map tuple."""
    keys = set()
    for F in functors:
        C = F.domain
        best = None
        for sigma in product(*[list(permutations(range(n))) for n in F.sizes]):
            maps = []
            for f in range(C.n_morphisms):
                s, t = C.src[f], C.tgt[f]
                new = [0] * F.sizes[s]
                for v, w in enumerate(F.maps[f]):
                    new[sigma[s][v]] = sigma[t][w]
                maps.append(tuple(new))
            maps = tuple(maps)
            if best is None or maps < best:
                best = maps
        keys.add((F.sizes, best))
    return len(keys)


def partitions(n):
    if n == 0:
        return 1
    count = [1] + [0] * n
    for part in range(1, n + 1):
        for m in range(part, n + 1):
            count[m] += count[m - part]
    return count[n]


def test_functor_validation():
    C = FinCat.from_poset(FinPoset.chain(1))
    with pytest.raises(ValidationError):
        SetFunctor(C, [2, 1], [(0, 1), (0, 1), (0,)])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_functors_on_interval(k):
    C = FinCat.from_poset(FinPoset.chain(1))
    want = sum(b ** a for a in range(k + 1) for b in range(k + 1))
    assert len(enumerate_set_functors(C, k)) == want


def test_group_sets():
    # Z/2-sets of size <= 2: empty, point, two fixed points, one free orbit
    n, _ = count_functor_iso_classes(FinGroup.cyclic(2).classifying_category(), 2)
    assert n == 4
    # S3-sets of size <= 3: sizes 0, 1 (1 each), 2 (2), 3 (3: trivial, 1+sign, S3/Z2)
    n, _ = count_functor_iso_classes(FinGroup.symmetric(3).classifying_category(), 3)
    assert n == 1 + 1 + 2 + 3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_permutation_classes_of_a_loop(k):
    loop = PresCat(["*"], [("t", 0, 0)], (), {0})
    n, _ = count_functor_iso_classes(loop, k)
    assert n == sum(partitions(m) for m in range(k + 1))


def test_caps():
    C = FinCat.discrete(range(7))
    with pytest.raises(CapExceeded):
        enumerate_set_functors(C, 1)
    with pytest.raises(CapExceeded):
        enumerate_set_functors(FinCat.discrete([0]), 4)


def test_limit_of_diagram():
    assert len(limit_of_diagram([2, 3], [])) == 6
    # equalizer of the identity and the swap on 2 points
    assert limit_of_diagram([2, 2], [(0, 1, (0, 1)), (0, 1, (1, 0))]) == []
    assert limit_of_diagram([3, 2], [(0, 1, (0, 0, 1))]) == [(0, 0), (1, 0), (2, 1)]


def test_limit_of_functor_with_initial_object():
    C = FinCat.from_poset(FinPoset.chain(2))
    for F in enumerate_set_functors(C, 2):
        assert len(limit_of_set_functor(C, F)) == F.sizes[0]


def test_kan_extension_along_open_point():
    L = LayeredCat.from_poset(FinPoset.chain(1))
    U, j = L.cat.full_subcategory([1])
    for F in enumerate_set_functors(U, 3):
        R = right_kan_extension(F, j)
        assert R.sizes == (F.sizes[0], F.sizes[0])
        assert R.validate() == []


def test_kan_extension_to_empty_comma_is_a_point():
    L = LayeredCat.from_poset(FinPoset.from_relations("ab", []))
    U, j = L.cat.full_subcategory([1])
    R = right_kan_extension(SetFunctor(U, [2], [(0, 1)]), j)
    assert R.sizes == (1, 2)


def test_natural_transformations_count():
    BG = FinGroup.cyclic(2).classifying_category()
    free = SetFunctor(BG, [2], [(0, 1), (1, 0)])
    fixed = SetFunctor(BG, [2], [(0, 1), (0, 1)])
    assert len(natural_transformations(free, free)) == 2
    assert len(natural_transformations(free, fixed)) == 2
    assert natural_transformations(fixed, free) == []
    assert not are_isomorphic(free, fixed)


def test_recollement_on_interval():
    L = LayeredCat.from_poset(FinPoset.chain(1))
    for F in enumerate_set_functors(L.cat, 2):
        rt = recollement_round_trip(L, {0}, F)
        A, B, g = rt["triple"]
        assert (A.sizes[0], B.sizes[0]) == F.sizes
        assert rt["ok"]
    c = recollement_counts(L, {0}, 2)
    assert c["sheaf_classes"] == c["triple_classes"] == 8
    with pytest.raises(NotASieve):
        recollement_counts(L, {1}, 2)


def test_recollement_on_dvr():
    L = build_dvr()
    s = L.base.index("s")
    assert not recollement_sweep(L, {s}, enumerate_set_functors(L.cat, 2))
    c = recollement_counts(L, {s}, 2)
    assert c["sheaf_classes"] == c["triple_classes"] == 12


def test_beck_chevalley_on_dvr():
    L = build_dvr()
    s = L.base.index("s")
    U, _ = L.cat.full_subcategory(L.over(L.base.index("eta")))
    functors = enumerate_set_functors(U, 3)
    assert len(functors) == 14
    for F in functors:
        ok, witness = beck_chevalley_check(L, {s}, F)
        assert ok
        assert all(sorted(w) == list(range(len(w))) for w in witness)


def test_exodromy_on_interval():
    X = FinPoset.chain(1)
    ok, a, b = exodromy_check(X, MonotoneMap.to_point(X), 2)
    assert ok and a == b == 3
    ok, a, b = exodromy_check(X, MonotoneMap.identity(X), 2)
    assert ok and a == b == 8


@settings(max_examples=25, deadline=None)
@given(posets(max_size=3), st.integers(0, 2))
def test_enumeration_matches_brute_force(P, k):
    C = FinCat.from_poset(P)
    got = enumerate_set_functors(C, k)
    want = brute_force_functors(C, k)
    assert sorted((F.sizes, F.maps) for F in got) == sorted((F.sizes, F.maps) for F in want)


@settings(max_examples=25, deadline=None)
@given(posets(max_size=3))
def test_iso_classes_match_canonical_forms(P):
    functors = enumerate_set_functors(FinCat.from_poset(P), 2)
    n = brute_force_classes(functors)
    assert len(iso_class_representatives(functors)) == n
    # the pairwise search path agrees with the orbit path
    assert len(iso_class_representatives(functors, iso=are_isomorphic)) == n


@settings(max_examples=20, deadline=None)
@given(posets(max_size=4))
def test_kan_extension_along_identity(P):
    C = FinCat.from_poset(P)
    ident = Functor.identity(C)
    for F in enumerate_set_functors(C, 1):
        R = right_kan_extension(F, ident)
        assert are_isomorphic(R, F)
        assert all(sorted(c) == list(range(len(c))) for c in kan_counit(R, F, ident))


@settings(max_examples=20, deadline=None)
@given(posets(max_size=4))
def test_recollement_round_trip_on_every_sieve(P):
    L = LayeredCat.from_poset(P)
    functors = enumerate_set_functors(L.cat, 2)
    for Z in P.sieves():
        assert recollement_sweep(L, Z, functors) == []


@settings(max_examples=15, deadline=None)
@given(posets(max_size=3))
def test_recollement_counts_agree(P):
    L = LayeredCat.from_poset(P)
    for Z in P.sieves():
        c = recollement_counts(L, Z, 2)
        assert c["sheaf_classes"] == c["triple_classes"]
