"""Layered categories: finite categories with a conservative functor to a finite poset.

Also holds presented categories (``PresCat``), which are what coarsening a
layered category produces, since a localization of a finite category need not
be finite.
"""

from collections import deque
from dataclasses import dataclass, field

from .category import FinCat, Functor, are_equivalent, validate_category
from .errors import CapExceeded, NotComparable, UnknownPoint, ValidationError
from .poset import FinPoset, MonotoneMap


class LayeredCat:
    """``cat`` stratified over ``base`` by the object labelling ``labels``.

    The stratification is stored strictly: object ``x`` lies over base element
    ``labels[x]`` and a morphism lies over the relation between its endpoints.
    """

    def __init__(self, cat, base, labels, check=True):
        self.cat = cat
        self.base = base
        self.labels = tuple(labels)
        if check:
            report = validate_layered(self)
            if report:
                raise ValidationError(report, "layered category")

    @classmethod
    def from_poset(cls, poset):
        """A poset stratified over itself."""
        return cls(FinCat.from_poset(poset), poset, range(len(poset)), check=False)

    @classmethod
    def over_point(cls, cat, label=0):
        return cls(cat, FinPoset([label], [[True]]), [0] * cat.n_objects)

    def __repr__(self):
        return "LayeredCat(%r over %d-element base)" % (self.cat, len(self.base))

    def over(self, p):
        return [x for x, q in enumerate(self.labels) if q == p]

    def strat_functor(self):
        P = FinCat.from_poset(self.base)
        rel = {P.mor_labels[i]: i for i in range(P.n_morphisms)}
        el = self.base.elements
        mors = [rel[(el[self.labels[self.cat.src[f]]], el[self.labels[self.cat.tgt[f]]])]
                for f in range(self.cat.n_morphisms)]
        return Functor(self.cat, P, self.labels, mors, check=False)


def validate_layered(L):
    """Empty iff the labelling is functorial and every morphism over an identity is invertible."""
    C, P = L.cat, L.base
    report = validate_category(C)
    if report:
        return report
    if len(L.labels) != C.n_objects:
        return ["labelling has %d entries for %d objects" % (len(L.labels), C.n_objects)]
    for x, p in enumerate(L.labels):
        if not 0 <= p < len(P):
            report.append("object %r labelled outside the base" % (C.objects[x],))
    if report:
        return report
    for f in range(C.n_morphisms):
        p, q = L.labels[C.src[f]], L.labels[C.tgt[f]]
        if not P.le(p, q):
            report.append("morphism %r goes from %r down to %r" % (C.mor_labels[f], P.elements[p], P.elements[q]))
        elif p == q and not C.is_iso(f):
            report.append("morphism %r lies over an identity but is not invertible" % (C.mor_labels[f],))
    return report


def _point(L, p):
    if isinstance(p, int) and 0 <= p < len(L.base):
        return p
    raise UnknownPoint(p)


def stratum(L, p):
    """Full subcategory over ``p`` with the morphisms over ``id_p`` (a groupoid)."""
    p = _point(L, p)
    objs = L.over(p)
    return L.cat.full_subcategory(objs)[0]


@dataclass
class Link:
    p: int
    q: int
    groupoid: FinCat
    source: Functor   # to stratum(p)
    target: Functor   # to stratum(q)
    stratum_p: FinCat
    stratum_q: FinCat


def link(L, p, q):
    """Groupoid of morphisms over p <= q with commuting squares of strata isos."""
    p, q = _point(L, p), _point(L, q)
    if not L.base.le(p, q):
        raise NotComparable("%r is not below %r" % (L.base.elements[p], L.base.elements[q]))
    C = L.cat
    Sp, Sq = stratum(L, p), stratum(L, q)
    pidx = {C.objects[x]: i for i, x in enumerate(L.over(p))}
    qidx = {C.objects[x]: i for i, x in enumerate(L.over(q))}
    sp_mor = {Sp.mor_labels[i]: i for i in range(Sp.n_morphisms)}
    sq_mor = {Sq.mor_labels[i]: i for i in range(Sq.n_morphisms)}
    phis = [f for f in range(C.n_morphisms) if L.labels[C.src[f]] == p and L.labels[C.tgt[f]] == q]
    phi_index = {f: i for i, f in enumerate(phis)}
    mors = []
    for phi in phis:
        for a in C.isos_out(C.src[phi]):
            for b in C.isos_out(C.tgt[phi]):
                target = C.compose_path([C.inverse(a), phi, b])
                mors.append((phi, a, b, target))
    mindex = {(phi, a, b): k for k, (phi, a, b, _) in enumerate(mors)}
    by_src = {}
    for k, m in enumerate(mors):
        by_src.setdefault(m[0], []).append(k)
    table = {}
    for k, (phi, a, b, t) in enumerate(mors):
        for k2 in by_src.get(t, ()):
            _, a2, b2, _ = mors[k2]
            table[(k2, k)] = mindex[(phi, C.compose(a2, a), C.compose(b2, b))]
    identities = [mindex[(phi, C.identities[C.src[phi]], C.identities[C.tgt[phi]])] for phi in phis]
    G = FinCat([C.mor_labels[f] for f in phis],
               [(C.mor_labels[phi], C.mor_labels[a], C.mor_labels[b]) for phi, a, b, _ in mors],
               [phi_index[m[0]] for m in mors], [phi_index[m[3]] for m in mors], identities, table, check=False)
    s = Functor(G, Sp, [pidx[C.objects[C.src[f]]] for f in phis],
                [sp_mor[C.mor_labels[m[1]]] for m in mors], check=False)
    t = Functor(G, Sq, [qidx[C.objects[C.tgt[f]]] for f in phis],
                [sq_mor[C.mor_labels[m[2]]] for m in mors], check=False)
    return Link(p, q, G, s, t, Sp, Sq)


def fiber_classes(E, s, t, x, y):
    """Connected components of the iso-comma fibre of (s, t): E -> A x B over (x, y).

    Objects of the fibre are triples (e, a: s(e) -> x, b: t(e) -> y); a morphism
    u: e -> e' connects (e, a, b) to (e', a o s(u)^-1, b o t(u)^-1).  Returns the
    components as sorted lists of triples, ordered by their least triple.
    """
    A, B = s.target, t.target
    triples = [(e, a, b) for e in range(E.n_objects)
               for a in A.hom(s.obj_map[e], x) for b in B.hom(t.obj_map[e], y)]
    parent = {tr: tr for tr in triples}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (e, a, b) in triples:
        for u in E.out_of(e):
            su, tu = s.mor_map[u], t.mor_map[u]
            a2 = A.compose(a, A.inverse(su))
            b2 = B.compose(b, B.inverse(tu))
            r1, r2 = find((e, a, b)), find((E.tgt[u], a2, b2))
            if r1 != r2:
                if r2 < r1:
                    r1, r2 = r2, r1
                parent[r2] = r1
    comps = {}
    for tr in triples:
        comps.setdefault(find(tr), []).append(tr)
    return [sorted(c) for _, c in sorted(comps.items())]


def hom_fiber(lk, x, y):
    """Components of the link fibre over (x, y); ``x``, ``y`` index the two strata."""
    return fiber_classes(lk.groupoid, lk.source, lk.target, x, y)


def h0(L):
    """Poset of isomorphism classes (least index representatives) and the quotient functor."""
    C = L.cat
    reps = C.iso_classes()
    classes = sorted(set(reps))
    cidx = {r: i for i, r in enumerate(classes)}
    leq = [[bool(C.hom(a, b)) for b in classes] for a in classes]
    P = FinPoset([C.objects[r] for r in classes], leq)
    PC = FinCat.from_poset(P)
    rel = {}
    for i in range(PC.n_morphisms):
        rel[(PC.src[i], PC.tgt[i])] = i
    q = Functor(C, PC, [cidx[reps[x]] for x in range(C.n_objects)],
                [rel[(cidx[reps[C.src[f]]], cidx[reps[C.tgt[f]]])] for f in range(C.n_morphisms)])
    return P, q


def truncation_report(L):
    """Posetality from link fibres; finite inputs are always 1-truncated and pi-finite."""
    sizes = {}
    for p, q in L.base.relations():
        if not L.over(p) or not L.over(q):
            continue
        lk = link(L, p, q)
        for x in range(lk.stratum_p.n_objects):
            for y in range(lk.stratum_q.n_objects):
                n = len(hom_fiber(lk, x, y))
                key = (L.base.elements[p], L.base.elements[q])
                sizes[key] = max(sizes.get(key, 0), n)
    pi0 = {L.base.elements[p]: len(set(stratum(L, p).iso_classes())) for p in L.base}
    aut = max((len(L.cat.hom(x, x)) for x in range(L.cat.n_objects)), default=0)
    return {
        "is_posetal": all(n <= 1 for n in sizes.values()),
        "is_1_truncated": True,
        "is_pi_finite": True,
        "details": {
            "max_hom_fiber": sizes,
            "stratum_components": pi0,
            "max_automorphism_order": aut,
            "n_objects": L.cat.n_objects,
            "n_morphisms": L.cat.n_morphisms,
        },
    }


def pullback(L, g):
    """Base change along a monotone map g: Q -> P."""
    C, Q = L.cat, g.source
    objects = [(x, q) for x in range(C.n_objects) for q in Q if L.labels[x] == g(q)]
    morphisms = []
    for (x, q) in objects:
        for f in C.out_of(x):
            for (y, q2) in objects:
                if y == C.tgt[f] and Q.le(q, q2):
                    morphisms.append(((f, q, q2), (x, q), (y, q2)))
    cat = FinCat.generate(objects, morphisms, lambda o: (C.identities[o[0]], o[1], o[1]),
                          lambda b, a: (C.compose(b[0], a[0]), a[1], b[2]))
    named = FinCat([(C.objects[x], Q.elements[q]) for x, q in objects],
                   [(C.mor_labels[f], Q.elements[a], Q.elements[b]) for f, a, b in cat.mor_labels],
                   cat.src, cat.tgt, cat.identities, cat.table, check=False)
    return LayeredCat(named, Q, [q for _, q in objects], check=False)


def layered_equivalence(A, B, cap=200000):
    """Base-preserving equivalence search between layered categories over equal bases."""
    if A.base != B.base:
        return None
    return are_equivalent(A.cat, B.cat, cap=cap, obj_ok=lambda x, y: A.labels[x] == B.labels[y])


# -- presentations ---------------------------------------------------------

@dataclass
class PresCat:
    """A category presented by generating morphisms and relations.

    Words are tuples of letters ``(generator, +1 or -1)`` in order of
    application; ``-1`` letters are only allowed on inverted generators.  A
    relation is ``(object, lhs, rhs)`` where ``object`` is the common source
    (needed to type empty words).
    """
    objects: tuple
    generators: tuple          # (label, src, tgt)
    relations: tuple = ()
    inverted: frozenset = frozenset()
    base: FinPoset = None
    labels: tuple = None
    _gindex: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.generators = tuple(tuple(g) for g in self.generators)
        self.relations = tuple((o, tuple(l), tuple(r)) for o, l, r in self.relations)
        self.inverted = frozenset(self.inverted)
        if self.labels is not None:
            self.labels = tuple(self.labels)

    def letter_ends(self, letter):
        g, e = letter
        _, s, t = self.generators[g]
        return (s, t) if e == 1 else (t, s)

    def word_ends(self, start, word):
        """Target of ``word`` read from ``start``, or None if not composable."""
        cur = start
        for letter in word:
            s, t = self.letter_ends(letter)
            if s != cur:
                return None
            cur = t
        return cur

    def validate(self):
        report = []
        n = len(self.objects)
        for k, (lab, s, t) in enumerate(self.generators):
            if not (0 <= s < n and 0 <= t < n):
                report.append("generator %r has endpoints out of range" % (lab,))
        for g in self.inverted:
            if not 0 <= g < len(self.generators):
                report.append("inverted generator %r is not a generator" % (g,))
        if report:
            return report
        for o, lhs, rhs in self.relations:
            for g, e in lhs + rhs:
                if not 0 <= g < len(self.generators):
                    report.append("relation uses unknown generator %r" % (g,))
                elif e == -1 and g not in self.inverted:
                    report.append("relation inverts non-inverted generator %r" % (self.generators[g][0],))
            if report:
                continue
            a, b = self.word_ends(o, lhs), self.word_ends(o, rhs)
            if a is None or b is None:
                report.append("relation words are not composable from %r" % (self.objects[o],))
            elif a != b:
                report.append("relation words are not parallel from %r" % (self.objects[o],))
        return report

    def pi0(self):
        """Connected components by union-find over generator endpoints."""
        parent = list(range(len(self.objects)))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for _, s, t in self.generators:
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps = {}
        for x in range(len(self.objects)):
            comps.setdefault(find(x), []).append(x)
        return [comps[k] for k in sorted(comps)]


def coarsen(L, f):
    """Presentation of the localization inverting everything sent to an identity of Q.

    Generators are the non-identity morphisms of ``L.cat``; relations are its
    composition table; inverted generators are those lying over identities of
    ``f.target``.
    """
    C = L.cat
    gens = [f_ for f_ in range(C.n_morphisms) if not C.is_identity(f_)]
    gidx = {m: i for i, m in enumerate(gens)}
    generators = [(C.mor_labels[m], C.src[m], C.tgt[m]) for m in gens]
    relations = []
    for (b, a), h in sorted(C.table.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if C.is_identity(a) or C.is_identity(b):
            continue
        lhs = ((gidx[a], 1), (gidx[b], 1))
        rhs = () if C.is_identity(h) else ((gidx[h], 1),)
        relations.append((C.src[a], lhs, rhs))
    new_labels = [f(L.labels[x]) for x in range(C.n_objects)]
    inverted = frozenset(i for i, m in enumerate(gens)
                         if new_labels[C.src[m]] == new_labels[C.tgt[m]])
    return PresCat(C.objects, generators, relations, inverted, f.target, new_labels)


def exit_path_of_stratified_poset(X, s):
    """The exit-path presentation of a poset X stratified by s: X -> P."""
    return coarsen(LayeredCat.from_poset(X), s)


def realize(pres, cap=5000):
    """Finite category presented by ``pres`` when it has no inverted generators.

    Relations are oriented shortlex (longer or lex-larger side rewrites to the
    other) and normal forms are enumerated breadth first.  The result is exact
    whenever the rewriting system is confluent, as it is for presentations
    carrying a full composition table.
    """
    if pres.inverted:
        raise ValueError("realize() only handles presentations without inverted generators")
    rules = []
    for o, lhs, rhs in pres.relations:
        a, b = tuple(g for g, _ in lhs), tuple(g for g, _ in rhs)
        if (len(a), a) < (len(b), b):
            a, b = b, a
        if a != b:
            rules.append((a, b))

    def normal(word):
        changed = True
        while changed:
            changed = False
            for a, b in rules:
                n = len(a)
                for i in range(len(word) - n + 1):
                    if word[i:i + n] == a:
                        word = word[:i] + b + word[i + n:]
                        changed = True
                        break
                if changed:
                    break
        return word

    forms = {}
    queue = deque()
    for x in range(len(pres.objects)):
        forms[(x, ())] = x
        queue.append((x, ()))
    while queue:
        x, w = queue.popleft()
        end = pres.word_ends(x, tuple((g, 1) for g in w))
        for g, (_, s, t) in enumerate(pres.generators):
            if s != end:
                continue
            nw = normal(w + (g,))
            if (x, nw) not in forms:
                forms[(x, nw)] = x
                if len(forms) > cap:
                    raise CapExceeded("presentation realization exceeded %d morphisms" % cap)
                queue.append((x, nw))
    keys = sorted(forms, key=lambda k: (k[0], len(k[1]), k[1]))

    def ends(k):
        x, w = k
        return x, pres.word_ends(x, tuple((g, 1) for g in w))

    morphisms = [(k, ends(k)[0], ends(k)[1]) for k in keys]
    cat = FinCat.generate(range(len(pres.objects)), morphisms, lambda x: (x, ()),
                          lambda g, f: (f[0], normal(f[1] + g[1])))

    def name(k):
        x, w = k
        if not w:
            return ("id", pres.objects[x])
        return tuple(pres.generators[g][0] for g in w) if len(w) > 1 else pres.generators[w[0]][0]

    return FinCat(pres.objects, [name(k) for k in keys], cat.src, cat.tgt, cat.identities, cat.table)
