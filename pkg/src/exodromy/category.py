"""Finite categories with explicit composition tables.

Morphisms and objects are addressed by index.  ``compose(g, f)`` is ``g o f``
(apply ``f`` first) and is defined exactly when ``tgt(f) == src(g)``.
"""

from collections import deque
from dataclasses import dataclass
from itertools import product

from .errors import CapExceeded, NotIsofibration, ValidationError


class FinCat:
    def __init__(self, objects, mor_labels, src, tgt, identities, table, check=True):
        self.objects = tuple(objects)
        self.mor_labels = tuple(mor_labels)
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.identities = tuple(identities)
        self.table = dict(table)
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._mor_index = {m: i for i, m in enumerate(self.mor_labels)}
        self._homs = {}
        self._out = [[] for _ in self.objects]
        self._in = [[] for _ in self.objects]
        for f in range(len(self.mor_labels)):
            self._homs.setdefault((self.src[f], self.tgt[f]), []).append(f)
            self._out[self.src[f]].append(f)
            self._in[self.tgt[f]].append(f)
        self._inverse = None
        if check:
            report = validate_category(self)
            if report:
                raise ValidationError(report, "category")

    @classmethod
    def generate(cls, objects, morphisms, identity, compose, check=False):
        """Build from labels.

        ``morphisms`` is a list of ``(label, src_label, tgt_label)``;
        ``identity(obj_label)`` names the identity of an object (it must occur
        in ``morphisms``) and ``compose(g_label, f_label)`` names ``g o f``.
        """
        objects = list(objects)
        oidx = {o: i for i, o in enumerate(objects)}
        labels = [m for m, _, _ in morphisms]
        midx = {m: i for i, m in enumerate(labels)}
        src = [oidx[s] for _, s, _ in morphisms]
        tgt = [oidx[t] for _, _, t in morphisms]
        ids = [midx[identity(o)] for o in objects]
        by_src = {}
        for i, s in enumerate(src):
            by_src.setdefault(s, []).append(i)
        table = {}
        for f in range(len(labels)):
            for g in by_src.get(tgt[f], ()):
                table[(g, f)] = midx[compose(labels[g], labels[f])]
        return cls(objects, labels, src, tgt, ids, table, check=check)

    @classmethod
    def from_poset(cls, poset):
        rels = poset.relations()
        labels = [(poset.elements[a], poset.elements[b]) for a, b in rels]
        morphisms = [((a, b), a, b) for a, b in rels]
        cat = cls.generate(range(len(poset)), morphisms, lambda o: (o, o),
                           lambda g, f: (f[0], g[1]))
        return cls(poset.elements, labels, cat.src, cat.tgt, cat.identities, cat.table, check=False)

    @classmethod
    def discrete(cls, labels):
        labels = list(labels)
        return cls(labels, [("id", o) for o in labels], range(len(labels)), range(len(labels)),
                   range(len(labels)), {(i, i): i for i in range(len(labels))}, check=False)

    def __repr__(self):
        return "FinCat(%d objects, %d morphisms)" % (len(self.objects), len(self.mor_labels))

    def __eq__(self, other):
        return (isinstance(other, FinCat) and self.objects == other.objects
                and self.mor_labels == other.mor_labels and self.src == other.src
                and self.tgt == other.tgt and self.identities == other.identities
                and self.table == other.table)

    def __hash__(self):
        return hash((self.objects, self.mor_labels))

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.mor_labels)

    def obj(self, label):
        return self._obj_index[label]

    def mor(self, label):
        return self._mor_index[label]

    def hom(self, x, y):
        return self._homs.get((x, y), [])

    def out_of(self, x):
        return self._out[x]

    def into(self, x):
        return self._in[x]

    def compose(self, g, f):
        return self.table[(g, f)]

    def compose_path(self, path):
        """Compose ``path`` listed in order of application."""
        h = path[0]
        for g in path[1:]:
            h = self.table[(g, h)]
        return h

    def is_identity(self, f):
        return self.identities[self.src[f]] == f

    def _inverses(self):
        if self._inverse is None:
            inv = {}
            for f in range(self.n_morphisms):
                x, y = self.src[f], self.tgt[f]
                for g in self.hom(y, x):
                    if self.table.get((g, f)) == self.identities[x] and self.table.get((f, g)) == self.identities[y]:
                        inv[f] = g
                        break
            self._inverse = inv
        return self._inverse

    def inverse(self, f):
        return self._inverses().get(f)

    def is_iso(self, f):
        return f in self._inverses()

    def is_groupoid(self):
        return len(self._inverses()) == self.n_morphisms

    def isos_out(self, x):
        return [f for f in self._out[x] if self.is_iso(f)]

    def iso_classes(self):
        """Object index -> least index of an isomorphic object."""
        if getattr(self, "_reps", None) is None:
            self._reps = [min(self.tgt[f] for f in self.isos_out(x)) for x in range(self.n_objects)]
        return self._reps

    def iso_to_rep(self, x):
        """A chosen iso from ``x`` to its least isomorphic object."""
        r = self.iso_classes()[x]
        return next(f for f in self.hom(x, r) if self.is_iso(f))

    def full_subcategory(self, objs):
        """Full subcategory on ``objs`` plus its inclusion functor."""
        objs = sorted(objs)
        keep = set(objs)
        mors = [f for f in range(self.n_morphisms) if self.src[f] in keep and self.tgt[f] in keep]
        return self.subcategory(objs, mors)

    def subcategory(self, objs, mors):
        objs = sorted(objs)
        mors = sorted(mors)
        onew = {o: i for i, o in enumerate(objs)}
        mnew = {m: i for i, m in enumerate(mors)}
        table = {}
        for (g, f), h in self.table.items():
            if g in mnew and f in mnew:
                if h not in mnew:
                    raise ValidationError(["subcategory not closed under composition"], "subcategory")
                table[(mnew[g], mnew[f])] = mnew[h]
        sub = FinCat([self.objects[o] for o in objs], [self.mor_labels[m] for m in mors],
                     [onew[self.src[m]] for m in mors], [onew[self.tgt[m]] for m in mors],
                     [mnew[self.identities[o]] for o in objs], table, check=False)
        return sub, Functor(sub, self, objs, mors, check=False)

    def op(self):
        table = {(f, g): h for (g, f), h in self.table.items()}
        return FinCat(self.objects, self.mor_labels, self.tgt, self.src, self.identities, table, check=False)


def validate_category(C):
    """Empty list iff ``C`` satisfies the category axioms; otherwise one entry per violation."""
    report = []
    n, m = C.n_objects, C.n_morphisms
    if len(C.src) != m or len(C.tgt) != m:
        return ["src/tgt tables have the wrong length"]
    if len(C.identities) != n:
        return ["identity table has the wrong length"]
    for f in range(m):
        if not (0 <= C.src[f] < n and 0 <= C.tgt[f] < n):
            return ["morphism %r has endpoints out of range" % (C.mor_labels[f],)]
    for x, i in enumerate(C.identities):
        if not (0 <= i < m) or C.src[i] != x or C.tgt[i] != x:
            report.append("identity of %r is not an endomorphism of it" % (C.objects[x],))
    if report:
        return report
    label = C.mor_labels
    for f in range(m):
        for g in C.out_of(C.tgt[f]):
            h = C.table.get((g, f))
            if h is None:
                report.append("missing composite %r o %r" % (label[g], label[f]))
            elif not 0 <= h < m:
                report.append("composite %r o %r out of range" % (label[g], label[f]))
            elif C.src[h] != C.src[f] or C.tgt[h] != C.tgt[g]:
                report.append("composite %r o %r has wrong endpoints" % (label[g], label[f]))
    for (g, f) in C.table:
        if C.tgt[f] != C.src[g]:
            report.append("composite recorded for non-composable pair (%r, %r)" % (label[g], label[f]))
    if report:
        return report
    for f in range(m):
        if C.table[(C.identities[C.tgt[f]], f)] != f:
            report.append("left unit law fails for %r" % (label[f],))
        if C.table[(f, C.identities[C.src[f]])] != f:
            report.append("right unit law fails for %r" % (label[f],))
    for f in range(m):
        for g in C.out_of(C.tgt[f]):
            gf = C.table[(g, f)]
            for h in C.out_of(C.tgt[g]):
                if C.table[(h, gf)] != C.table[(C.table[(h, g)], f)]:
                    report.append("associativity fails for (%r, %r, %r)" % (label[h], label[g], label[f]))
    return report


class Functor:
    def __init__(self, source, target, obj_map, mor_map, check=True):
        self.source = source
        self.target = target
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)
        if check:
            report = self.validate()
            if report:
                raise ValidationError(report, "functor")

    def validate(self):
        S, T = self.source, self.target
        if len(self.obj_map) != S.n_objects or len(self.mor_map) != S.n_morphisms:
            return ["object or morphism map has the wrong length"]
        report = []
        for f in range(S.n_morphisms):
            g = self.mor_map[f]
            if T.src[g] != self.obj_map[S.src[f]] or T.tgt[g] != self.obj_map[S.tgt[f]]:
                report.append("endpoints not preserved at %r" % (S.mor_labels[f],))
        if report:
            return report
        for x in range(S.n_objects):
            if self.mor_map[S.identities[x]] != T.identities[self.obj_map[x]]:
                report.append("identity of %r not preserved" % (S.objects[x],))
        for (g, f), h in S.table.items():
            if T.table[(self.mor_map[g], self.mor_map[f])] != self.mor_map[h]:
                report.append("composition not preserved at %r o %r" % (S.mor_labels[g], S.mor_labels[f]))
        return report

    @classmethod
    def identity(cls, C):
        return cls(C, C, range(C.n_objects), range(C.n_morphisms), check=False)

    def __call__(self, x):
        return self.obj_map[x]

    def on_mor(self, f):
        return self.mor_map[f]

    def then(self, other):
        """other o self."""
        return Functor(self.source, other.target,
                       [other.obj_map[x] for x in self.obj_map],
                       [other.mor_map[f] for f in self.mor_map], check=False)

    def __repr__(self):
        return "Functor(%r -> %r)" % (self.source, self.target)


def is_natural_transformation(F, G, components):
    """``components[x]`` : F(x) -> G(x) in the common target, natural in x."""
    T = F.target
    for f in range(F.source.n_morphisms):
        x, y = F.source.src[f], F.source.tgt[f]
        if T.table[(components[y], F.mor_map[f])] != T.table[(G.mor_map[f], components[x])]:
            return False
    return True


def product_category(C, D):
    objects = [(a, b) for a in C.objects for b in D.objects]
    morphisms = [((C.mor_labels[f], D.mor_labels[g]), (C.objects[C.src[f]], D.objects[D.src[g]]),
                  (C.objects[C.tgt[f]], D.objects[D.tgt[g]]))
                 for f in range(C.n_morphisms) for g in range(D.n_morphisms)]
    return FinCat.generate(
        objects, morphisms,
        lambda o: (C.mor_labels[C.identities[C.obj(o[0])]], D.mor_labels[D.identities[D.obj(o[1])]]),
        lambda g, f: (C.mor_labels[C.compose(C.mor(g[0]), C.mor(f[0]))],
                      D.mor_labels[D.compose(D.mor(g[1]), D.mor(f[1]))]))


@dataclass
class Comma:
    category: FinCat
    proj_source: Functor
    proj_target: Functor
    triples: tuple  # object index -> (c, d, beta)


def comma(F, G):
    """The oriented fibre product of F: C -> E and G: D -> E.

    Objects are triples (c, d, beta: F(c) -> G(d)); a morphism (c, d, beta) ->
    (c', d', beta') is a pair (gamma, delta) with G(delta) o beta = beta' o F(gamma).
    """
    C, D, E = F.source, G.source, F.target
    triples = [(c, d, b) for c in range(C.n_objects) for d in range(D.n_objects)
               for b in E.hom(F.obj_map[c], G.obj_map[d])]
    tindex = {t: i for i, t in enumerate(triples)}
    src, tgt, labels, mors = [], [], [], []
    for i, (c, d, b) in enumerate(triples):
        for gamma in C.out_of(c):
            fg = F.mor_map[gamma]
            for delta in D.out_of(d):
                lhs = E.table[(G.mor_map[delta], b)]
                for b2 in E.hom(F.obj_map[C.tgt[gamma]], G.obj_map[D.tgt[delta]]):
                    if E.table[(b2, fg)] == lhs:
                        j = tindex[(C.tgt[gamma], D.tgt[delta], b2)]
                        mors.append((i, j, gamma, delta))
    mindex = {(i, gamma, delta): k for k, (i, _, gamma, delta) in enumerate(mors)}
    for (i, j, gamma, delta) in mors:
        src.append(i)
        tgt.append(j)
        labels.append((C.mor_labels[gamma], D.mor_labels[delta], E.mor_labels[triples[i][2]]))
    identities = [mindex[(i, C.identities[c], D.identities[d])] for i, (c, d, _) in enumerate(triples)]
    table = {}
    by_src = {}
    for k, (i, _, _, _) in enumerate(mors):
        by_src.setdefault(i, []).append(k)
    for k, (i, j, gamma, delta) in enumerate(mors):
        for k2 in by_src.get(j, ()):
            _, _, gamma2, delta2 = mors[k2]
            table[(k2, k)] = mindex[(i, C.table[(gamma2, gamma)], D.table[(delta2, delta)])]
    obj_labels = [(C.objects[c], D.objects[d], E.mor_labels[b]) for c, d, b in triples]
    cat = FinCat(obj_labels, labels, src, tgt, identities, table, check=False)
    p = Functor(cat, C, [t[0] for t in triples], [m[2] for m in mors], check=False)
    q = Functor(cat, D, [t[1] for t in triples], [m[3] for m in mors], check=False)
    return Comma(cat, p, q, tuple(triples))


def point_category(label="*"):
    return FinCat([label], [("id", label)], [0], [0], [0], {(0, 0): 0}, check=False)


def object_functor(C, x):
    """The functor from the point category picking out ``x``."""
    return Functor(point_category(C.objects[x]), C, [x], [C.identities[x]], check=False)


def slice_category(C, x):
    """C_{/x}: objects (c, f: c -> x)."""
    return comma(Functor.identity(C), object_functor(C, x))


def coslice_category(C, x):
    """C_{x/}: objects (x, f: x -> c)."""
    return comma(object_functor(C, x), Functor.identity(C))


def is_fully_faithful(F):
    S, T = F.source, F.target
    for x in range(S.n_objects):
        for y in range(S.n_objects):
            image = {F.mor_map[f] for f in S.hom(x, y)}
            if len(image) != len(S.hom(x, y)) or len(image) != len(T.hom(F.obj_map[x], F.obj_map[y])):
                return False
    return True


def is_essentially_surjective(F):
    T = F.target
    reps = T.iso_classes()
    hit = {reps[y] for y in F.obj_map}
    return all(reps[y] in hit for y in range(T.n_objects))


def is_equivalence(F):
    return is_fully_faithful(F) and is_essentially_surjective(F)


@dataclass
class Equivalence:
    functor: Functor
    inverse: Functor
    unit: tuple     # x -> inverse(functor(x)), iso in the source
    counit: tuple   # functor(inverse(y)) -> y, iso in the target


def _skeleton(C):
    reps = C.iso_classes()
    return sorted(set(reps))


def _object_candidates(C, D, sc, sd, obj_ok):
    """Object bijections sc -> sd respecting hom-set sizes."""
    hc = [[len(C.hom(a, b)) for b in sc] for a in sc]
    hd = [[len(D.hom(a, b)) for b in sd] for a in sd]
    n = len(sc)
    assign = [None] * n
    used = [False] * n

    def rec(i):
        if i == n:
            yield tuple(assign)
            return
        for j in range(n):
            if used[j] or hc[i][i] != hd[j][j]:
                continue
            if obj_ok is not None and not obj_ok(sc[i], sd[j]):
                continue
            if any(hc[i][k] != hd[j][assign[k]] or hc[k][i] != hd[assign[k]][j] for k in range(i)):
                continue
            assign[i] = j
            used[j] = True
            yield from rec(i + 1)
            used[j] = False
        assign[i] = None

    yield from rec(0)


def _morphism_bijections(C, D, omap, mors_c, budget):
    """Composition-preserving bijections on the full subcategories, by propagation."""
    mset = set(mors_c)
    image = {}
    used = set()
    for x, y in omap.items():
        image[C.identities[x]] = D.identities[y]
        used.add(D.identities[y])

    def assign(f, g, log):
        queue = deque([(f, g)])
        while queue:
            a, b = queue.popleft()
            if a in image:
                if image[a] != b:
                    return False
                continue
            if b in used:
                return False
            image[a] = b
            used.add(b)
            log.append(a)
            for c in list(image):
                if C.tgt[a] == C.src[c]:
                    h = C.table[(c, a)]
                    if h in mset:
                        queue.append((h, D.table[(image[c], b)]))
                if C.tgt[c] == C.src[a]:
                    h = C.table[(a, c)]
                    if h in mset:
                        queue.append((h, D.table[(b, image[c])]))
        return True

    order = [f for f in mors_c if f not in image]

    def rec(pos):
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded("equivalence search exceeded its node budget")
        while pos < len(order) and order[pos] in image:
            pos += 1
        if pos == len(order):
            yield dict(image)
            return
        f = order[pos]
        x, y = C.src[f], C.tgt[f]
        iso = C.is_iso(f)
        for g in D.hom(omap[x], omap[y]):
            if g in used or D.is_iso(g) != iso:
                continue
            log = []
            ok = assign(f, g, log)
            if ok:
                yield from rec(pos + 1)
            for a in log:
                used.discard(image.pop(a))

    yield from rec(0)


def are_equivalent(C, D, cap=200000, obj_ok=None):
    """Search for an equivalence C -> D.

    Equivalences are found as isomorphisms between the skeleta (least index in
    each isomorphism class), extended along chosen isomorphisms to every
    object.  ``obj_ok(x, y)`` restricts which objects may correspond, e.g. to
    insist on a base-preserving witness.  Returns an :class:`Equivalence` or
    ``None``; raises :class:`CapExceeded` once ``cap`` search nodes are spent.
    """
    sc, sd = _skeleton(C), _skeleton(D)
    if len(sc) != len(sd):
        return None
    if sorted(len(C.hom(a, b)) for a in sc for b in sc) != sorted(len(D.hom(a, b)) for a in sd for b in sd):
        return None
    budget = [cap]
    mors_c = [f for f in range(C.n_morphisms) if C.src[f] in set(sc) and C.tgt[f] in set(sc)]
    for assign in _object_candidates(C, D, sc, sd, obj_ok):
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded("equivalence search exceeded its node budget")
        omap = {sc[i]: sd[j] for i, j in enumerate(assign)}
        for mmap in _morphism_bijections(C, D, omap, mors_c, budget):
            return _extend_equivalence(C, D, omap, mmap)
    return None


def _extend_equivalence(C, D, omap, mmap):
    rep_c, rep_d = C.iso_classes(), D.iso_classes()
    to_rep_c = [C.iso_to_rep(x) for x in range(C.n_objects)]
    to_rep_d = [D.iso_to_rep(y) for y in range(D.n_objects)]
    inv_o = {v: k for k, v in omap.items()}
    inv_m = {v: k for k, v in mmap.items()}

    F_obj = [omap[rep_c[x]] for x in range(C.n_objects)]
    F_mor = []
    for f in range(C.n_morphisms):
        x, y = C.src[f], C.tgt[f]
        g = C.compose_path([C.inverse(to_rep_c[x]), f, to_rep_c[y]])
        F_mor.append(mmap[g])
    G_obj = [inv_o[rep_d[y]] for y in range(D.n_objects)]
    G_mor = []
    for g in range(D.n_morphisms):
        x, y = D.src[g], D.tgt[g]
        h = D.compose_path([D.inverse(to_rep_d[x]), g, to_rep_d[y]])
        G_mor.append(inv_m[h])
    F = Functor(C, D, F_obj, F_mor, check=False)
    G = Functor(D, C, G_obj, G_mor, check=False)
    unit = tuple(to_rep_c)
    counit = tuple(D.inverse(to_rep_d[y]) for y in range(D.n_objects))
    return Equivalence(F, G, unit, counit)


def is_isofibration(F):
    S, T = F.source, F.target
    for x in range(S.n_objects):
        lifts = {F.mor_map[f] for f in S.isos_out(x)}
        for g in T.isos_out(F.obj_map[x]):
            if g not in lifts:
                return False
    return True


def induced_slice_functor(F, x, coslice=False):
    """The comparison C_{/x} -> D_{/F(x)} (or the coslice version)."""
    S, T = F.source, F.target
    if coslice:
        A, B = coslice_category(S, x), coslice_category(T, F.obj_map[x])
    else:
        A, B = slice_category(S, x), slice_category(T, F.obj_map[x])
    bidx = {t: i for i, t in enumerate(B.triples)}
    obj_map = []
    for (c, d, b) in A.triples:
        if coslice:
            obj_map.append(bidx[(0, F.obj_map[d], F.mor_map[b])])
        else:
            obj_map.append(bidx[(F.obj_map[c], 0, F.mor_map[b])])
    Bc = B.category
    mor_map = []
    for k in range(A.category.n_morphisms):
        i = A.category.src[k]
        gamma = A.proj_source.mor_map[k]
        delta = A.proj_target.mor_map[k]
        # a comma morphism is determined by its source and its two components
        if coslice:
            proj, want = B.proj_target, F.mor_map[delta]
        else:
            proj, want = B.proj_source, F.mor_map[gamma]
        mor_map.append(next(m for m in Bc.out_of(obj_map[i]) if proj.mor_map[m] == want))
    return Functor(A.category, Bc, obj_map, mor_map, check=False)


def classify_fibration(F):
    """Right/left/Kan fibration flags plus strict fibre sizes.

    Refuses functors that are not isofibrations, since strict fibres only
    model homotopy fibres for those.
    """
    if not is_isofibration(F):
        raise NotIsofibration("functor is not an isofibration; strict fibres would be misleading")
    S, T = F.source, F.target
    right = all(is_equivalence(induced_slice_functor(F, x)) for x in range(S.n_objects))
    left = all(is_equivalence(induced_slice_functor(F, x, coslice=True)) for x in range(S.n_objects))
    sizes = tuple(sum(1 for x in F.obj_map if x == y) for y in range(T.n_objects))
    return {"right": right, "left": left, "kan": right and left, "fiber_sizes": sizes}


def strict_fiber(F, y):
    """Objects over ``y`` and morphisms over its identity."""
    S, T = F.source, F.target
    objs = [x for x in range(S.n_objects) if F.obj_map[x] == y]
    ident = T.identities[y]
    mors = [f for f in range(S.n_morphisms) if F.mor_map[f] == ident]
    return S.subcategory(objs, mors)[0]


def action_groupoid(n_points, perms, labels=None):
    """The action groupoid of a permutation group (given by all its elements) on range(n_points)."""
    perms = [tuple(p) for p in perms]
    pidx = {p: i for i, p in enumerate(perms)}
    ident = tuple(range(n_points))
    morphisms = [((i, x), x, perms[i][x]) for i in range(len(perms)) for x in range(n_points)]

    def comp(g, f):
        p, q = perms[g[0]], perms[f[0]]
        return (pidx[tuple(p[q[k]] for k in range(n_points))], f[1])

    return FinCat.generate(range(n_points), morphisms, lambda x: (pidx[ident], x), comp)


def all_functors(C, D, cap=10 ** 6):
    """Every functor C -> D (small inputs only)."""
    out = []
    count = [0]
    for omap in product(range(D.n_objects), repeat=C.n_objects):
        image = {}
        for x in range(C.n_objects):
            image[C.identities[x]] = D.identities[omap[x]]
        order = [f for f in range(C.n_morphisms) if f not in image]

        def rec(pos):
            count[0] += 1
            if count[0] > cap:
                raise CapExceeded("functor enumeration exceeded its budget")
            if pos == len(order):
                out.append(Functor(C, D, omap, [image[f] for f in range(C.n_morphisms)], check=False))
                return
            f = order[pos]
            for g in D.hom(omap[C.src[f]], omap[C.tgt[f]]):
                image[f] = g
                good = True
                for (a, b), h in C.table.items():
                    if a in image and b in image and h in image:
                        if D.table[(image[a], image[b])] != image[h]:
                            good = False
                            break
                if good:
                    rec(pos + 1)
                del image[f]

        rec(0)
    return out
