"""Builders for two-stratum and curve Galois categories, the morphism dictionary,
and strict localization / normalization."""

from dataclasses import dataclass

from .category import (Functor, classify_fibration, coslice_category, is_fully_faithful,
                       slice_category)
from .decollage import group_decollage, reassemble, reassemble_functor
from .errors import NotBaseCompatible, NotIsofibration, UnknownObject, ValidationError
from .groups import FinGroup, GroupHom, identity_perm, inv, mul
from .homology import GroupPresentation, commutator
from .layered import LayeredCat, h0
from .poset import FinPoset, MonotoneMap, classify_subposet

INFINITY = "inf"


# -- two strata -------------------------------------------------------------------

def build_two_stratum(Gz, Gu, D, to_z, to_u):
    """B Gz <- B D -> B Gu over [1], glued into a layered category."""
    P = FinPoset.from_relations(["s", "eta"], [("s", "eta")])
    dec = group_decollage(P, {0: Gz, 1: Gu}, {(0, 1): (D, to_z, to_u)})
    L = reassemble(dec)
    L.decollage = dec
    return L


def dvr_triple():
    """Z/2 <- <(0 1)> -> S_3 with the first map an isomorphism."""
    Gz, Gu = FinGroup.cyclic(2), FinGroup.symmetric(3)
    D = FinGroup.from_cycles(3, ["(0 1)"])
    return Gz, Gu, D, GroupHom(D, Gz, [Gz.generators[0]]), GroupHom.inclusion(D, Gu)


def build_dvr():
    return build_two_stratum(*dvr_triple())


# -- curves -----------------------------------------------------------------------

def curve_generators(g, n):
    return [x for j in range(1, g + 1) for x in ("a%d" % j, "b%d" % j)] + ["c%d" % i for i in range(1, n)]


def curve_relators(g, n):
    """gamma_0 = [a1,b1]...[ag,bg] (c1...c_{n-1})^-1 and gamma_i = c_i."""
    gamma0 = []
    for j in range(g):
        gamma0.extend(commutator(2 * j, 2 * j + 1))
    cs = [2 * g + i for i in range(n - 1)]
    gamma0.extend((c, -1) for c in reversed(cs))
    return [tuple(gamma0)] + [((c, 1),) for c in cs]


def curve_presentation(g, n):
    if g < 0 or n < 2:
        raise ValueError("need g >= 0 and n >= 2")
    return GroupPresentation(curve_generators(g, n), curve_relators(g, n))


@dataclass
class CurveSpec:
    """Images of a1, b1, ..., ag, bg, c1, ..., c_{n-1} as permutations of ``degree`` points."""
    g: int
    n: int
    degree: int
    images: tuple

    def __post_init__(self):
        self.images = tuple(tuple(x) for x in self.images)

    def validate(self):
        report = []
        if self.g < 0 or self.n < 2:
            report.append("need g >= 0 and n >= 2")
        want = 2 * self.g + self.n - 1
        if len(self.images) != want:
            report.append("expected %d generator images, got %d" % (want, len(self.images)))
        for x in self.images:
            if sorted(x) != list(range(self.degree)):
                report.append("%r is not a permutation of degree %d" % (x, self.degree))
        return report

    def group(self):
        return FinGroup(self.degree, self.images)

    def evaluate(self, word):
        out = identity_perm(self.degree)
        for gen, e in word:
            x = self.images[gen]
            out = mul(out, x if e == 1 else inv(x))
        return out

    def gamma_images(self):
        return [self.evaluate(w) for w in curve_relators(self.g, self.n)]


def curve_base(n):
    names = list(range(n)) + [INFINITY]
    return FinPoset.from_relations(names, [(i, INFINITY) for i in range(n)])


def build_curve_level(spec):
    """Points x_0..x_{n-1} below a B Q stratum; link at x_i is B<q(gamma_i)>."""
    report = spec.validate()
    if report:
        raise ValidationError(report, "curve spec")
    Q = spec.group()
    P = curve_base(spec.n)
    top = P.index(INFINITY)
    triv = FinGroup.trivial(spec.degree)
    point_groups = {P.index(i): triv for i in range(spec.n)}
    point_groups[top] = Q
    edges = {}
    for i, gamma in enumerate(spec.gamma_images()):
        D = FinGroup(spec.degree, [gamma])
        edges[(P.index(i), top)] = (D, GroupHom.trivial(D, triv), GroupHom.inclusion(D, Q))
    dec = group_decollage(P, point_groups, edges)
    L = reassemble(dec)
    L.decollage = dec
    L.spec = spec
    return L


def curve_point(L, i):
    """The object over the closed point i (or over ``INFINITY``)."""
    return L.over(L.base.index(i))[0]


def curve_quotient_functor(L1, L2):
    """Functor between curve levels induced by a compatible quotient of groups.

    The quotient sends the image of each generator in L1's group to its image
    in L2's; a :class:`ValidationError` is raised when this is not a homomorphism.
    """
    s1, s2 = L1.spec, L2.spec
    if (s1.g, s1.n) != (s2.g, s2.n):
        raise ValidationError(["curve levels have different (g, n)"], "quotient")
    Q1, Q2 = s1.group(), s2.group()
    hom = GroupHom(Q1, Q2, s2.images)
    d1, d2 = L1.decollage, L2.decollage
    components = {}
    for chain, V in d1.values.items():
        W = d2.values[chain]
        if V.n_morphisms == 1:
            components[chain] = Functor(V, W, [0], [W.identities[0]], check=False)
            continue
        if len(chain) == 1:
            G1, G2 = Q1, Q2
        else:
            i = L1.base.elements[chain[0]]
            G1 = FinGroup(s1.degree, [s1.gamma_images()[i]])
            G2 = FinGroup(s2.degree, [s2.gamma_images()[i]])
        mm = [G2.element_index(hom(x)) for x in G1.elements]
        components[chain] = Functor(V, W, [0], mm, check=False)
    return reassemble_functor(d1, L1, d2, L2, components)


def curve_tower_bond(spec):
    """The projection X_{n+1} -> X_n (new point to the generic point) and the
    level-(n+1) spec sending the new generator c_n to the identity."""
    src, dst = curve_base(spec.n + 1), curve_base(spec.n)
    assignment = {i: i for i in range(spec.n)}
    assignment[spec.n] = INFINITY
    assignment[INFINITY] = INFINITY
    p = MonotoneMap.from_labels(src, dst, assignment)
    extended = CurveSpec(spec.g, spec.n + 1, spec.degree, spec.images + (identity_perm(spec.degree),))
    return p, extended


def cyclic_curve_spec(g, n, order, exponents):
    """Spec with generator images powers of an order-``order`` rotation."""
    rot = tuple((i + 1) % order for i in range(order))
    images = []
    for e in exponents:
        x = identity_perm(order)
        for _ in range(e % order):
            x = mul(x, rot)
        images.append(x)
    return CurveSpec(g, n, order, images)


# -- the dictionary ---------------------------------------------------------------------

def _base_map(A, B, F):
    assignment = {}
    for x in range(A.cat.n_objects):
        p, q = A.labels[x], B.labels[F.obj_map[x]]
        if assignment.setdefault(p, q) != q:
            raise NotBaseCompatible("objects over %r land over different base points"
                                    % (A.base.elements[p],))
    for p in A.base:
        for p2 in A.base:
            if p in assignment and p2 in assignment and A.base.le(p, p2) \
                    and not B.base.le(assignment[p], assignment[p2]):
                raise NotBaseCompatible("base map is not monotone")
    return assignment


IMMERSION_TAGS = {"cosieve": "open-immersion", "sieve": "closed-immersion",
                  "clopen": "clopen-immersion", "interval": "locally-closed-immersion"}


def classify_gal_morphism(A, B, F):
    """Dictionary tags for a functor F: A.cat -> B.cat compatible with the bases.

    Immersion tags need F fully faithful and injective on isomorphism classes;
    they name the shape of the image in h0(B).  Fibration tags need an
    isofibration; all fibres are finite here.
    """
    if F.source is not A.cat or F.target is not B.cat:
        raise NotBaseCompatible("functor does not go between the given layered categories")
    base_map = _base_map(A, B, F)
    H, q = h0(B)
    image = sorted({q.obj_map[F.obj_map[x]] for x in range(A.cat.n_objects)})
    shape = classify_subposet(H, image)
    reps_a = A.cat.iso_classes()
    injective = len({q.obj_map[F.obj_map[x]] for x in set(reps_a)}) == len(set(reps_a))
    immersion = None
    if is_fully_faithful(F) and injective:
        immersion = IMMERSION_TAGS.get(shape)
    tags = {"base_map": {A.base.elements[p]: B.base.elements[v] for p, v in sorted(base_map.items())},
            "h0_image": shape, "immersion": immersion}
    try:
        fib = classify_fibration(F)
    except NotIsofibration:
        fib = None
    if fib is None:
        tags.update(isofibration=False, right=False, left=False, kan=False, fiber_sizes=None)
        tags.update(etale_like=False, finite_like=False, finite_etale_like=False, radicial_like=False)
        return tags
    tags.update(isofibration=True, right=fib["right"], left=fib["left"], kan=fib["kan"],
                fiber_sizes=fib["fiber_sizes"], finite_fibers=True)
    tags["etale_like"] = fib["left"]
    tags["finite_like"] = fib["right"]
    tags["finite_etale_like"] = fib["kan"]
    tags["radicial_like"] = all(n <= 1 for n in fib["fiber_sizes"])
    return tags


def stratum_inclusion(L, p):
    """The full subcategory over p, as a layered category over {p}, and its inclusion."""
    objs = L.over(p)
    sub, inc = L.cat.full_subcategory(objs)
    base = L.base.induced([p])
    return LayeredCat(sub, base, [0] * len(objs), check=False), inc


def sub_layered(L, points):
    """Full subcategory over a set of base points, layered over the induced subposet."""
    pts = sorted(points)
    objs = [x for x in range(L.cat.n_objects) if L.labels[x] in set(pts)]
    sub, inc = L.cat.full_subcategory(objs)
    pos = {p: k for k, p in enumerate(pts)}
    return LayeredCat(sub, L.base.induced(pts), [pos[L.labels[x]] for x in objs], check=False), inc


# -- localization and normalization -----------------------------------------------------

def _layered_comma(L, comma_data, pick, points):
    pts = sorted(points)
    pos = {p: k for k, p in enumerate(pts)}
    labels = [pos[L.labels[pick(t)]] for t in comma_data.triples]
    return LayeredCat(comma_data.category, L.base.induced(pts), labels, check=False)


def localize_normalize(L, x):
    """Coslice L_{x/} over up(p) and slice L_{/x} over down(p), with weak
    initiality and terminality of x in L.  ``x`` is an object index."""
    C = L.cat
    if not isinstance(x, int) or not 0 <= x < C.n_objects:
        raise UnknownObject(x)
    xi = x
    p = L.labels[xi]
    co = coslice_category(C, xi)
    sl = slice_category(C, xi)
    coslice = _layered_comma(L, co, lambda t: t[1], L.base.up(p))
    slice_ = _layered_comma(L, sl, lambda t: t[0], L.base.down(p))
    co_x = co.triples.index((0, xi, C.identities[xi]))
    sl_x = sl.triples.index((xi, 0, C.identities[xi]))
    return {
        "coslice": coslice,
        "slice": slice_,
        "weakly_initial": all(C.hom(xi, y) for y in range(C.n_objects)),
        "weakly_terminal": all(C.hom(y, xi) for y in range(C.n_objects)),
        "weakly_initial_in_coslice": all(co.category.hom(co_x, y) for y in range(co.category.n_objects)),
        "weakly_terminal_in_slice": all(sl.category.hom(y, sl_x) for y in range(sl.category.n_objects)),
    }


def describe_layered(L):
    """Short summary used by the command line."""
    H, _ = h0(L)
    return {
        "objects": L.cat.n_objects,
        "morphisms": L.cat.n_morphisms,
        "h0": [str(e) for e in H.elements],
        "strata": {str(L.base.elements[p]): len(L.over(p)) for p in L.base},
    }

