"""Fixed families of layered categories used by the checks and tests."""

import random
from itertools import combinations

from .category import FinCat
from .galois import build_curve_level, build_two_stratum, cyclic_curve_spec
from .groups import FinGroup, GroupHom
from .layered import LayeredCat
from .poset import FinPoset, posets_up_to_iso

RANDOM_SEED = 20240611


def poset_corpus(max_points=5):
    out = []
    for n in range(1, max_points + 1):
        for k, P in enumerate(posets_up_to_iso(n)):
            out.append(("poset-%d-%d" % (n, k), LayeredCat.from_poset(P)))
    return out


def dvr_triples():
    """(name, Gz, Gu, D, to_z, to_u, expected |Hom(s, eta)|)."""
    z2, z4, z3 = FinGroup.cyclic(2), FinGroup.cyclic(4), FinGroup.cyclic(3)
    out = []
    D = FinGroup.from_cycles(3, ["(0 1)"])
    out.append(("dvr-z2-s3", z2, FinGroup.symmetric(3), D,
                GroupHom(D, z2, [z2.generators[0]]), GroupHom.inclusion(D, FinGroup.symmetric(3)), 6))
    out.append(("dvr-z2-z4", z2, z4, z4, GroupHom(z4, z2, [z2.generators[0]]), GroupHom.inclusion(z4, z4), 2))
    t = FinGroup.trivial(1)
    t3 = FinGroup.trivial(3)
    out.append(("dvr-1-z3", t, z3, t3, GroupHom.trivial(t3, t), GroupHom.trivial(t3, z3), 3))
    return out


def dvr_corpus():
    return [(name, build_two_stratum(Gz, Gu, D, a, b)) for name, Gz, Gu, D, a, b, _ in dvr_triples()]


def curve_specs():
    """(g, n) in {0,1} x {2,3} with quotients Z/2 and Z/5."""
    out = []
    for g in (0, 1):
        for n in (2, 3):
            for order in (2, 5):
                k = 2 * g + n - 1
                exps = [1] + [0] * (k - 1) if g == 1 else [1] * k
                out.append(("curve-g%d-n%d-z%d" % (g, n, order), cyclic_curve_spec(g, n, order, exps)))
    return out


def curve_corpus():
    return [(name, build_curve_level(spec)) for name, spec in curve_specs()]


def action_layered(degree, generators, family):
    """X // G for a G-invariant family X of subsets of range(degree).

    Hom(x, y) = {g in G : g x is contained in y}; the base is the poset of orbits.
    """
    G = FinGroup(degree, generators)
    els = G.elements
    objs = sorted(family, key=lambda s: (len(s), s))
    morphisms = []
    for x in objs:
        for y in objs:
            for k, g in enumerate(els):
                if set(g[i] for i in x) <= set(y):
                    morphisms.append(((k, x, y), x, y))

    def compose(b, a):
        g, h = els[b[0]], els[a[0]]
        return (G.element_index(tuple(g[i] for i in h)), a[1], b[2])

    cat = FinCat.generate(objs, morphisms, lambda x: (0, x, x), compose)
    C = FinCat([tuple(x) for x in objs], [(k, tuple(x), tuple(y)) for k, x, y in cat.mor_labels],
               cat.src, cat.tgt, cat.identities, cat.table, check=False)
    reps = C.iso_classes()
    classes = sorted(set(reps))
    pos = {r: i for i, r in enumerate(classes)}
    base = FinPoset([C.objects[r] for r in classes], [[bool(C.hom(a, b)) for b in classes] for a in classes])
    return LayeredCat(C, base, [pos[reps[x]] for x in range(C.n_objects)])


def random_corpus(count=10, seed=RANDOM_SEED, max_objects=6, max_order=6):
    """Seeded random X // G categories over bases of height at most 2."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.choice((3, 4))
        gens = []
        for _ in range(rng.choice((1, 2))):
            p = list(range(m))
            rng.shuffle(p)
            gens.append(tuple(p))
        G = FinGroup(m, gens)
        if G.order() > max_order:
            continue
        subsets = [tuple(c) for r in range(m + 1) for c in combinations(range(m), r)]
        family = set()
        for s in rng.sample(subsets, rng.choice((2, 3))):
            for g in G.elements:
                family.add(tuple(sorted(g[i] for i in s)))
        sizes = {len(s) for s in family}
        if len(family) > max_objects or len(sizes) > 3:
            continue
        L = action_layered(m, gens, family)
        if L.base.height() > 2:
            continue
        out.append(("random-%d" % len(out), L))
    return out


def full_corpus():
    return poset_corpus() + dvr_corpus() + curve_corpus() + random_corpus()

