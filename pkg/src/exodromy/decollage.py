"""Groupoid-valued presheaves on the string poset of a base, and their reassembly.

A décollage over P assigns a finite groupoid to every nonempty chain of P and
a restriction functor to every inclusion of chains, strictly functorially.
The Segal condition asks that the value on a long chain be equivalent to the
iterated fibre product of its edge values over the strata.
"""

from dataclasses import dataclass, field
from itertools import product

from .category import FinCat, Functor, validate_category
from .errors import AssociativityFailure, HeightExceeded, ValidationError
from .layered import LayeredCat, fiber_classes, stratum


def _subchains(chain):
    n = len(chain)
    out = []
    for mask in range(1, 2 ** n - 1):
        out.append(tuple(chain[i] for i in range(n) if mask >> i & 1))
    return out


@dataclass
class Decollage:
    base: object
    values: dict                 # chain -> FinCat
    restrictions: dict           # (chain, subchain) -> Functor
    strings: tuple = field(default=())

    def __post_init__(self):
        if not self.strings:
            self.strings = tuple(self.base.chains())

    def restrict(self, chain, sub):
        return self.restrictions[(chain, sub)]

    def edge_maps(self, p, q):
        e = (p, q)
        return self.values[e], self.restrictions[(e, (p,))], self.restrictions[(e, (q,))]


def nerve(L):
    """Chains of morphisms over each string of the base, with levelwise strata isos."""
    C = L.cat
    keys = {}
    values = {}
    for chain in L.base.chains():
        objs = []

        def dfs(pos, x, acc):
            if pos == len(chain):
                objs.append(acc)
                return
            for f in C.out_of(x):
                if L.labels[C.tgt[f]] == chain[pos]:
                    dfs(pos + 1, C.tgt[f], acc + (f,))

        for x0 in L.over(chain[0]):
            dfs(1, x0, (x0,))
        objs.sort()
        oidx = {o: i for i, o in enumerate(objs)}

        def points(o):
            return [o[0]] + [C.tgt[f] for f in o[1:]]

        mors = []
        for o in objs:
            for alphas in product(*[C.isos_out(x) for x in points(o)]):
                mors.append((alphas, o))
        mors.sort()
        midx = {m: i for i, m in enumerate(mors)}

        def target(alphas, o):
            new = [C.tgt[alphas[0]]]
            for i, f in enumerate(o[1:], start=1):
                new.append(C.compose_path([C.inverse(alphas[i - 1]), f, alphas[i]]))
            return tuple(new)

        src = [oidx[o] for _, o in mors]
        tgt = [oidx[target(a, o)] for a, o in mors]
        ids = [midx[(tuple(C.identities[x] for x in points(o)), o)] for o in objs]
        table = {}
        by_src = {}
        for k, (_, o) in enumerate(mors):
            by_src.setdefault(o, []).append(k)
        for k, (a, o) in enumerate(mors):
            for k2 in by_src.get(objs[tgt[k]], ()):
                b = mors[k2][0]
                table[(k2, k)] = midx[(tuple(C.compose(bi, ai) for ai, bi in zip(a, b)), o)]
        if len(chain) == 1:
            olabels = [C.objects[o[0]] for o in objs]
            mlabels = [C.mor_labels[a[0]] for a, _ in mors]
        else:
            olabels = [(C.objects[o[0]],) + tuple(C.mor_labels[f] for f in o[1:]) for o in objs]
            mlabels = [tuple(C.mor_labels[x] for x in a) + (olabels[oidx[o]],) for a, o in mors]
        values[chain] = FinCat(olabels, mlabels, src, tgt, ids, table, check=False)
        keys[chain] = (objs, oidx, mors, midx)

    restrictions = {}
    for chain in values:
        objs, _, mors, _ = keys[chain]
        for sub in _subchains(chain):
            pos = [chain.index(p) for p in sub]
            _, soidx, _, smidx = keys[sub]

            def restrict_obj(o):
                pts = [o[0]] + [C.tgt[f] for f in o[1:]]
                new = [pts[pos[0]]]
                for a, b in zip(pos, pos[1:]):
                    new.append(C.compose_path(list(o[a + 1:b + 1])))
                return tuple(new)

            omap = [soidx[restrict_obj(o)] for o in objs]
            mmap = [smidx[(tuple(a[i] for i in pos), restrict_obj(o))] for a, o in mors]
            restrictions[(chain, sub)] = Functor(values[chain], values[sub], omap, mmap, check=False)
    return Decollage(L.base, values, restrictions)


def _fp_homs(D, chain, src, dst):
    """Morphisms between objects of the iterated fibre product of the edge values of ``chain``.

    An object is ``(edges, thetas)`` with ``thetas[i]: t(edges[i]) -> s(edges[i+1])``
    in the value at ``chain[i+1]``; a morphism is a tuple of edge morphisms
    ``u_i`` with ``theta'_i o t(u_i) = s(u_{i+1}) o theta_i``.
    """
    (e, th), (e2, th2) = src, dst
    m = len(e)
    out = []

    def rec(i, acc):
        if i == m:
            out.append(tuple(acc))
            return
        E, s, t = D.edge_maps(chain[i], chain[i + 1])
        for u in E.hom(e[i], e2[i]):
            if i > 0:
                V = D.values[(chain[i],)]
                _, _, tprev = D.edge_maps(chain[i - 1], chain[i])
                lhs = V.compose(th2[i - 1], tprev.mor_map[acc[-1]])
                rhs = V.compose(s.mor_map[u], th[i - 1])
                if lhs != rhs:
                    continue
            rec(i + 1, acc + [u])

    rec(0, [])
    return out


def _fp_objects(D, chain):
    m = len(chain) - 1
    edges = [D.edge_maps(chain[i], chain[i + 1]) for i in range(m)]
    out = []
    for es in product(*[range(E.n_objects) for E, _, _ in edges]):
        thetas = []
        for i in range(m - 1):
            V = D.values[(chain[i + 1],)]
            thetas.append(V.hom(edges[i][2].obj_map[es[i]], edges[i + 1][1].obj_map[es[i + 1]]))
        for th in product(*thetas):
            out.append((es, th))
    return out


def _comparison(D, chain):
    """Objectwise and morphismwise Segal comparison out of the value at ``chain``."""
    W = D.values[chain]
    edges = [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    rs = [D.restrict(chain, e) for e in edges]
    ident = []
    for i in range(1, len(chain) - 1):
        ident.append(chain[i])

    def obj(w):
        es = tuple(r.obj_map[w] for r in rs)
        th = tuple(D.values[(p,)].identities[D.restrict(chain, (p,)).obj_map[w]] for p in ident)
        return (es, th)

    def mor(u):
        return tuple(r.mor_map[u] for r in rs)

    return W, obj, mor


def segal_report(D, chain):
    """Problems with the Segal comparison at ``chain`` (empty when it is an equivalence)."""
    if len(chain) < 3:
        return []
    W, cobj, cmor = _comparison(D, chain)
    report = []
    images = [cobj(w) for w in range(W.n_objects)]
    for o in _fp_objects(D, chain):
        if not any(_fp_homs(D, chain, img, o) for img in images):
            report.append("Segal: fibre-product object %r at %r not in the essential image" % (o, chain))
            break
    for w in range(W.n_objects):
        for w2 in range(W.n_objects):
            got = [cmor(u) for u in W.hom(w, w2)]
            want = _fp_homs(D, chain, images[w], images[w2])
            if len(set(got)) != len(got) or set(got) != set(want):
                report.append("Segal: comparison not fully faithful at %r" % (chain,))
                return report
    return report


def segal_section(D, chain, target):
    """Least object w of the value at a 3-chain and an iso c(w) -> target in the fibre product."""
    W, cobj, _ = _comparison(D, chain)
    for w in range(W.n_objects):
        homs = _fp_homs(D, chain, cobj(w), target)
        if homs:
            return w, homs[0]
    return None


def validate_decollage(D, check_associativity=True):
    """Itemized problems: values, restriction functoriality, edge faithfulness, Segal, associativity."""
    report = []
    P = D.base
    for chain in D.strings:
        V = D.values.get(chain)
        if V is None:
            report.append("missing value at %r" % (chain,))
            continue
        r = validate_category(V)
        if r:
            report.extend("value at %r: %s" % (chain, x) for x in r)
        elif not V.is_groupoid():
            report.append("value at %r is not a groupoid" % (chain,))
    if report:
        return report
    for chain in D.strings:
        for sub in _subchains(chain):
            F = D.restrictions.get((chain, sub))
            if F is None:
                report.append("missing restriction %r -> %r" % (chain, sub))
                continue
            if F.source is not D.values[chain] and F.source != D.values[chain]:
                report.append("restriction %r -> %r has the wrong source" % (chain, sub))
                continue
            if F.target is not D.values[sub] and F.target != D.values[sub]:
                report.append("restriction %r -> %r has the wrong target" % (chain, sub))
                continue
            r = F.validate()
            report.extend("restriction %r -> %r: %s" % (chain, sub, x) for x in r)
    if report:
        return report
    for chain in D.strings:
        for mid in _subchains(chain):
            for sub in _subchains(mid):
                a = D.restrict(chain, mid).then(D.restrict(mid, sub))
                b = D.restrict(chain, sub)
                if a.obj_map != b.obj_map or a.mor_map != b.mor_map:
                    report.append("restrictions do not compose: %r -> %r -> %r" % (chain, mid, sub))
    if report:
        return report
    for chain in D.strings:
        if len(chain) != 2:
            continue
        E, s, t = D.edge_maps(*chain)
        for e in range(E.n_objects):
            for e2 in range(E.n_objects):
                pairs = [(s.mor_map[u], t.mor_map[u]) for u in E.hom(e, e2)]
                if len(set(pairs)) != len(pairs):
                    report.append("edge %r: (source, target) is not faithful" % (chain,))
                    break
            else:
                continue
            break
    for chain in D.strings:
        report.extend(segal_report(D, chain))
    if report or not check_associativity:
        return report
    try:
        reassemble(D)
    except AssociativityFailure as exc:
        report.extend(exc.report)
    return report


def reassemble(D):
    """The layered category glued from a valid décollage.

    Objects are those of the singleton values; morphisms over p < q are the
    components of the iso-comma fibres of the edge value; composites across
    p < q < r are computed by lifting through the canonical Segal section and
    restricting to the outer edge.  The result is checked, never repaired:
    a non-associative composite raises :class:`AssociativityFailure`.
    """
    P = D.base
    objects, labels, owner = [], [], []
    local = {}
    for p in P:
        V = D.values[(p,)]
        for x in range(V.n_objects):
            local[(p, x)] = len(objects)
            objects.append(V.objects[x])
            labels.append(p)
            owner.append((p, x))
    if len(set(objects)) != len(objects):
        objects = [(P.elements[p], o) for (p, _), o in zip(owner, objects)]

    mlabels, src, tgt, kind = [], [], [], []
    strat_mor = {}
    for p in P:
        V = D.values[(p,)]
        for f in range(V.n_morphisms):
            strat_mor[(p, f)] = len(mlabels)
            mlabels.append(V.mor_labels[f])
            src.append(local[(p, V.src[f])])
            tgt.append(local[(p, V.tgt[f])])
            kind.append(("iso", p, f))
    class_of = {}
    for p, q in P.relations():
        if p == q:
            continue
        E, s, t = D.edge_maps(p, q)
        Vp, Vq = D.values[(p,)], D.values[(q,)]
        for x in range(Vp.n_objects):
            for y in range(Vq.n_objects):
                for k, comp in enumerate(fiber_classes(E, s, t, x, y)):
                    idx = len(mlabels)
                    mlabels.append((Vp.objects[x], Vq.objects[y], k))
                    src.append(local[(p, x)])
                    tgt.append(local[(q, y)])
                    kind.append(("cross", p, q, comp[0]))
                    for tr in comp:
                        class_of[(p, q, tr)] = idx
    identities = [strat_mor[(p, D.values[(p,)].identities[x])] for (p, x) in owner]

    def comp(g, f):
        kf, kg = kind[f], kind[g]
        if kf[0] == "iso" and kg[0] == "iso":
            return strat_mor[(kf[1], D.values[(kf[1],)].compose(kg[2], kf[2]))]
        if kf[0] == "iso":
            p, q, (e, a, b) = kg[1], kg[2], kg[3]
            V = D.values[(p,)]
            return class_of[(p, q, (e, V.compose(V.inverse(kf[2]), a), b))]
        if kg[0] == "iso":
            p, q, (e, a, b) = kf[1], kf[2], kf[3]
            V = D.values[(q,)]
            return class_of[(p, q, (e, a, V.compose(kg[2], b)))]
        p, q, (e1, a1, b1) = kf[1], kf[2], kf[3]
        q2, r, (e2, a2, b2) = kg[1], kg[2], kg[3]
        Vq = D.values[(q,)]
        theta = Vq.compose(Vq.inverse(a2), b1)
        chain = (p, q, r)
        found = segal_section(D, chain, ((e1, e2), (theta,)))
        if found is None:
            raise AssociativityFailure(["no Segal lift for a composable pair over %r" % (chain,)])
        w, (u1, u2) = found
        E1, s1, _ = D.edge_maps(p, q)
        E2, _, t2 = D.edge_maps(q, r)
        e3 = D.restrict(chain, (p, r)).obj_map[w]
        Vp, Vr = D.values[(p,)], D.values[(r,)]
        return class_of[(p, r, (e3, Vp.compose(a1, s1.mor_map[u1]), Vr.compose(b2, t2.mor_map[u2])))]

    table = {}
    by_src = {}
    for g in range(len(mlabels)):
        by_src.setdefault(src[g], []).append(g)
    for f in range(len(mlabels)):
        for g in by_src.get(tgt[f], ()):
            table[(g, f)] = comp(g, f)
    cat = FinCat(objects, mlabels, src, tgt, identities, table, check=False)
    report = validate_category(cat)
    if report:
        raise AssociativityFailure(report)
    L = LayeredCat(cat, P, labels, check=False)
    L.reassembly = {"local": local, "class_of": class_of, "strat_mor": strat_mor}
    return L


def reassemble_functor(D1, L1, D2, L2, components):
    """Functor L1 -> L2 induced by a décollage map over the same base.

    ``components[chain]`` is a functor ``D1.values[chain] -> D2.values[chain]``
    commuting strictly with restrictions; ``L1``, ``L2`` are the reassembled
    categories of ``D1``, ``D2``.
    """
    C1 = L1.cat
    r1, r2 = L1.reassembly, L2.reassembly
    owner = {v: k for k, v in r1["local"].items()}
    obj_map = []
    for x in range(C1.n_objects):
        p, lx = owner[x]
        obj_map.append(r2["local"][(p, components[(p,)].obj_map[lx])])
    strat_inv = {v: k for k, v in r1["strat_mor"].items()}
    cross_rep = {}
    for (p, q, tr), idx in r1["class_of"].items():
        cross_rep.setdefault(idx, (p, q, tr))
    mor_map = []
    for f in range(C1.n_morphisms):
        if f in strat_inv:
            p, lf = strat_inv[f]
            mor_map.append(r2["strat_mor"][(p, components[(p,)].mor_map[lf])])
        else:
            p, q, (e, a, b) = cross_rep[f]
            tr = (components[(p, q)].obj_map[e], components[(p,)].mor_map[a], components[(q,)].mor_map[b])
            mor_map.append(r2["class_of"][(p, q, tr)])
    return Functor(C1, L2.cat, obj_map, mor_map)


def constant_point(P):
    """The terminal décollage: every value a point."""
    values = {}
    for chain in P.chains():
        lab = tuple(P.elements[i] for i in chain)
        lab = lab[0] if len(lab) == 1 else lab
        values[chain] = FinCat([lab], [("id", lab)], [0], [0], [0], {(0, 0): 0}, check=False)
    restrictions = {(c, s): Functor(values[c], values[s], [0], [0], check=False)
                    for c in values for s in _subchains(c)}
    return Decollage(P, values, restrictions)


def group_decollage(P, point_groups, edge_groups):
    """Décollage of one-object groupoids over a base with no 3-chains.

    ``point_groups[p]`` is a :class:`FinGroup`; ``edge_groups[(p, q)]`` is a
    triple ``(D, to_p, to_q)`` of a group and homomorphisms, or ``None`` for an
    empty link.  Pairs p < q missing from ``edge_groups`` also get empty links.
    """
    if P.height() > 1:
        raise HeightExceeded("group décollages need a base without 3-chains")
    values, restrictions = {}, {}
    for p in P:
        values[(p,)] = point_groups[p].classifying_category(P.elements[p])
    for p, q in P.relations():
        if p == q:
            continue
        data = edge_groups.get((p, q))
        key = (p, q)
        if data is None:
            empty = FinCat([], [], [], [], [], {}, check=False)
            values[key] = empty
            restrictions[(key, (p,))] = Functor(empty, values[(p,)], [], [], check=False)
            restrictions[(key, (q,))] = Functor(empty, values[(q,)], [], [], check=False)
            continue
        D, to_p, to_q = data
        BD = D.classifying_category((P.elements[p], P.elements[q]))
        values[key] = BD
        for end, hom in ((p, to_p), (q, to_q)):
            G = point_groups[end]
            mm = [G.element_index(hom(x)) for x in D.elements]
            restrictions[(key, (end,))] = Functor(BD, values[(end,)], [0], mm, check=False)
    return Decollage(P, values, restrictions)


def objectwise_equivalent(D1, D2, cap=200000):
    """Whether every value of D1 is equivalent to the corresponding value of D2."""
    from .category import are_equivalent
    for chain in D1.strings:
        if are_equivalent(D1.values[chain], D2.values[chain], cap=cap) is None:
            return False
    return True
