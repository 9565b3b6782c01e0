"""Finite-set-valued functors: limits, Kan extensions, recollement and exodromy counting.

A set functor assigns ``range(n)`` to each object and an image tuple to each
morphism (or each generator, on a presented category).  Kan extensions also
record which family each element stands for in ``elements``.
"""

from collections import deque
from itertools import permutations, product
from math import factorial

from .category import FinCat, Functor, comma
from .errors import CapExceeded, NotASieve, ValidationError
from .layered import PresCat, exit_path_of_stratified_poset

DEFAULT_MAX_K = 3
DEFAULT_MAX_OBJECTS = 6


class SetFunctor:
    def __init__(self, domain, sizes, maps, elements=None, check=True):
        self.domain = domain
        self.sizes = tuple(sizes)
        self.maps = tuple(tuple(m) for m in maps)
        self.elements = elements
        if check:
            report = self.validate()
            if report:
                raise ValidationError(report, "set functor")

    @property
    def presented(self):
        return isinstance(self.domain, PresCat)

    def _arrows(self):
        d = self.domain
        if self.presented:
            return [(s, t) for _, s, t in d.generators]
        return list(zip(d.src, d.tgt))

    def validate(self):
        arrows = self._arrows()
        n_obj = len(self.domain.objects)
        if len(self.sizes) != n_obj or len(self.maps) != len(arrows):
            return ["functor data has the wrong shape"]
        report = []
        for k, (s, t) in enumerate(arrows):
            m = self.maps[k]
            if len(m) != self.sizes[s] or any(not 0 <= v < self.sizes[t] for v in m):
                report.append("map %d is not a function %d -> %d" % (k, self.sizes[s], self.sizes[t]))
        if report:
            return report
        if self.presented:
            for g in self.domain.inverted:
                if len(set(self.maps[g])) != len(self.maps[g]) or self.sizes[arrows[g][0]] != self.sizes[arrows[g][1]]:
                    report.append("inverted generator %r is not sent to a bijection" % (self.domain.generators[g][0],))
            if report:
                return report
            for o, lhs, rhs in self.domain.relations:
                if evaluate_word(self, o, lhs) != evaluate_word(self, o, rhs):
                    report.append("relation at %r fails" % (self.domain.objects[o],))
            return report
        C = self.domain
        for x in range(C.n_objects):
            if self.maps[C.identities[x]] != tuple(range(self.sizes[x])):
                report.append("identity of %r not sent to an identity" % (C.objects[x],))
        for (g, f), h in C.table.items():
            if tuple(self.maps[g][v] for v in self.maps[f]) != self.maps[h]:
                report.append("composition %r o %r not preserved" % (C.mor_labels[g], C.mor_labels[f]))
        return report

    def __eq__(self, other):
        return isinstance(other, SetFunctor) and self.sizes == other.sizes and self.maps == other.maps

    def __hash__(self):
        return hash((self.sizes, self.maps))

    def __repr__(self):
        return "SetFunctor(sizes=%r)" % (self.sizes,)

    def precompose(self, F):
        """The restriction self o F along a functor F into the domain."""
        return SetFunctor(F.source, [self.sizes[x] for x in F.obj_map],
                          [self.maps[f] for f in F.mor_map], check=False)


def evaluate_word(F, start, word):
    cur = tuple(range(F.sizes[start]))
    for g, e in word:
        m = F.maps[g]
        if e == -1:
            inv = [0] * len(m)
            for i, v in enumerate(m):
                inv[v] = i
            m = inv
        cur = tuple(m[v] for v in cur)
    return cur


def limit_of_diagram(sizes, arrows):
    """Compatible families for a diagram of sets ``range(sizes[i])`` with ``(i, j, map)`` arrows."""
    n = len(sizes)
    nbrs = [[] for _ in range(n)]
    for i, j, m in arrows:
        nbrs[i].append(j)
        nbrs[j].append(i)
    order, seen = [], set()
    for r in range(n):
        if r in seen:
            continue
        seen.add(r)
        queue = deque([r])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    pos = {v: k for k, v in enumerate(order)}
    checks = [[] for _ in range(n)]
    for i, j, m in arrows:
        checks[order[max(pos[i], pos[j])]].append((i, j, m))
    out = []
    fam = [None] * n

    def rec(k):
        if k == n:
            out.append(tuple(fam))
            return
        v = order[k]
        for val in range(sizes[v]):
            fam[v] = val
            if all(m[fam[i]] == fam[j] for i, j, m in checks[v]):
                rec(k + 1)
        fam[v] = None

    rec(0)
    out.sort()
    return out


def limit_of_set_functor(C, F):
    """Compatible families (x_c) with F(phi)(x_c) = x_c' for every morphism."""
    arrows = [(C.src[f], C.tgt[f], F.maps[f]) for f in range(C.n_morphisms)]
    return limit_of_diagram(F.sizes, arrows)


def comma_under(J, c):
    """Objects and arrows of c |J: objects (u, phi: c -> J u), arrows from U-morphisms."""
    U, C = J.source, J.target
    objs = [(u, phi) for u in range(U.n_objects) for phi in C.hom(c, J.obj_map[u])]
    index = {o: i for i, o in enumerate(objs)}
    arrows = []
    for i, (u, phi) in enumerate(objs):
        for psi in U.out_of(u):
            arrows.append((i, index[(U.tgt[psi], C.compose(J.mor_map[psi], phi))], psi))
    return objs, index, arrows


def right_kan_extension(F, J):
    """Pointwise right Kan extension of F: U -> Set along J: U -> C.

    (J_* F)(c) is the limit of F over the comma category c | J; a morphism
    g: c -> c' sends a family x to (x_{(u, phi' o g)})_{(u, phi')}.
    """
    C = J.target
    data = []
    for c in range(C.n_objects):
        objs, index, arrows = comma_under(J, c)
        fams = limit_of_diagram([F.sizes[u] for u, _ in objs],
                                [(i, j, F.maps[psi]) for i, j, psi in arrows])
        data.append((objs, index, fams, {f: k for k, f in enumerate(fams)}))
    maps = []
    for g in range(C.n_morphisms):
        c, c2 = C.src[g], C.tgt[g]
        objs, index, fams, _ = data[c]
        objs2, _, fams2, lookup2 = data[c2]
        m = []
        for fam in fams:
            new = tuple(fam[index[(u, C.compose(phi, g))]] for u, phi in objs2)
            m.append(lookup2[new])
        maps.append(tuple(m))
    out = SetFunctor(C, [len(d[2]) for d in data], maps, check=False)
    out.elements = [d[2] for d in data]
    out.comma_objects = [d[0] for d in data]
    return out


def kan_counit(R, F, J):
    """Components (J_* F)(J u) -> F(u), family -> its (u, id) entry."""
    C = J.target
    comps = []
    for u in range(J.source.n_objects):
        c = J.obj_map[u]
        k = R.comma_objects[c].index((u, C.identities[c]))
        comps.append(tuple(fam[k] for fam in R.elements[c]))
    return comps


# -- natural transformations and isomorphism classes --------------------------

def _domain_arrows(F):
    d = F.domain
    if isinstance(d, PresCat):
        return [(s, t, k) for k, (_, s, t) in enumerate(d.generators)]
    return [(d.src[f], d.tgt[f], f) for f in range(d.n_morphisms)]


def natural_transformations(F, G, bijective=False, first=False):
    """All (or the first) families sigma_c: F(c) -> G(c) with G(f) sigma = sigma F(f)."""
    n = len(F.sizes)
    arrows = _domain_arrows(F)
    nbrs = [[] for _ in range(n)]
    for s, t, _ in arrows:
        nbrs[s].append(t)
        nbrs[t].append(s)
    order, seen = [], set()
    for r in range(n):
        if r in seen:
            continue
        seen.add(r)
        queue = deque([r])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    pos = {v: k for k, v in enumerate(order)}
    checks = [[] for _ in range(n)]
    for s, t, k in arrows:
        checks[order[max(pos[s], pos[t])]].append((s, t, k))
    if bijective and F.sizes != G.sizes:
        return [] if not first else None
    out = []
    sigma = [None] * n

    def candidates(c):
        a, b = F.sizes[c], G.sizes[c]
        if bijective:
            return permutations(range(b))
        return product(range(b), repeat=a)

    def rec(k):
        if k == n:
            out.append(tuple(sigma))
            return first
        c = order[k]
        for cand in candidates(c):
            sigma[c] = cand
            good = True
            for s, t, f in checks[c]:
                fm, gm = F.maps[f], G.maps[f]
                ss, st = sigma[s], sigma[t]
                if any(gm[ss[v]] != st[fm[v]] for v in range(F.sizes[s])):
                    good = False
                    break
            if good and rec(k + 1):
                return True
        sigma[c] = None
        return False

    rec(0)
    if first:
        return out[0] if out else None
    return out


def are_isomorphic(F, G):
    return natural_transformations(F, G, bijective=True, first=True) is not None


def signature(F):
    """Relabelling-invariant data: sizes and, per arrow, the fibre-size multiset
    (plus the cycle type for endomorphisms)."""
    sig = [F.sizes]
    for s, t, k in _domain_arrows(F):
        m = F.maps[k]
        fib = [0] * F.sizes[t]
        for v in m:
            fib[v] += 1
        entry = (tuple(sorted(fib)),)
        if s == t:
            fixed = sum(1 for i, v in enumerate(m) if i == v)
            entry += (fixed, len(set(m)))
        sig.append(entry)
    return tuple(sig)


ORBIT_LIMIT = 720


def _relabellings(sizes):
    group = 1
    for n in sizes:
        group *= factorial(n)
    if group > ORBIT_LIMIT:
        return None
    return list(product(*[list(permutations(range(n))) for n in sizes]))


def relabel(F, sigma):
    """The functor isomorphic to F through the bijections sigma_c."""
    maps = []
    for s, t, k in _domain_arrows(F):
        m = F.maps[k]
        new = [0] * len(m)
        ss, st = sigma[s], sigma[t]
        for v, w in enumerate(m):
            new[ss[v]] = st[w]
        maps.append(tuple(new))
    return SetFunctor(F.domain, F.sizes, maps, check=False)


def iso_class_representatives(functors, iso=None, sig=signature):
    """One representative per isomorphism class, in first-seen order.

    Set functors whose relabelling group is small have their whole orbit
    recorded; otherwise candidates are bucketed by ``sig`` and compared with
    the representatives in their bucket using ``iso``.
    """
    buckets = {}
    seen = set()
    groups = {}
    reps = []
    for F in functors:
        if iso is None:
            if (F.sizes, F.maps) in seen:
                continue
            if F.sizes not in groups:
                groups[F.sizes] = _relabellings(F.sizes)
            sigmas = groups[F.sizes]
            if sigmas is not None:
                reps.append(F)
                for sigma in sigmas:
                    seen.add((F.sizes, relabel(F, sigma).maps))
                continue
        test = iso or are_isomorphic
        bucket = buckets.setdefault(sig(F), [])
        if not any(test(R, F) for R in bucket):
            bucket.append(F)
            reps.append(F)
    return reps


# -- enumeration --------------------------------------------------------------

def _check_caps(n_objects, k, max_objects, max_k):
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > max_k:
        raise CapExceeded("value bound k=%d exceeds cap %d" % (k, max_k))
    if n_objects > max_objects:
        raise CapExceeded("%d objects exceeds cap %d" % (n_objects, max_objects))


def enumerate_set_functors(C, k, max_objects=DEFAULT_MAX_OBJECTS, max_k=DEFAULT_MAX_K, cap=2 * 10 ** 6):
    """Every functor from a finite category into sets of size <= k (objects map to range(n))."""
    if isinstance(C, PresCat):
        return enumerate_presented_functors(C, k, max_objects, max_k, cap)
    _check_caps(C.n_objects, k, max_objects, max_k)
    out = []
    budget = [cap]
    nonid = [f for f in range(C.n_morphisms) if not C.is_identity(f)]
    for sizes in product(range(k + 1), repeat=C.n_objects):
        image = {C.identities[x]: tuple(range(sizes[x])) for x in range(C.n_objects)}

        def assign(f, m, log):
            queue = deque([(f, m)])
            while queue:
                a, ma = queue.popleft()
                if a in image:
                    if image[a] != ma:
                        return False
                    continue
                image[a] = ma
                log.append(a)
                for c in list(image):
                    mc = image[c]
                    if C.tgt[a] == C.src[c]:
                        queue.append((C.table[(c, a)], tuple(mc[v] for v in ma)))
                    if C.tgt[c] == C.src[a]:
                        queue.append((C.table[(a, c)], tuple(ma[v] for v in mc)))
            return True

        def rec(pos):
            budget[0] -= 1
            if budget[0] < 0:
                raise CapExceeded("functor enumeration exceeded its budget")
            while pos < len(nonid) and nonid[pos] in image:
                pos += 1
            if pos == len(nonid):
                out.append(SetFunctor(C, sizes, [image[f] for f in range(C.n_morphisms)], check=False))
                return
            f = nonid[pos]
            for m in product(range(sizes[C.tgt[f]]), repeat=sizes[C.src[f]]):
                log = []
                if assign(f, m, log):
                    rec(pos + 1)
                for a in log:
                    del image[a]

        rec(0)
    return out


def enumerate_presented_functors(pres, k, max_objects=DEFAULT_MAX_OBJECTS, max_k=DEFAULT_MAX_K, cap=2 * 10 ** 6):
    """Functors out of a presentation: generator images honouring relations, with
    inverted generators sent to bijections.  Solved as a constraint search."""
    _check_caps(len(pres.objects), k, max_objects, max_k)
    gens = pres.generators
    ng = len(gens)
    rel_letters = [set(g for g, _ in lhs + rhs) for _, lhs, rhs in pres.relations]
    out = []
    budget = [cap]
    for sizes in product(range(k + 1), repeat=len(pres.objects)):
        if any(sizes[s] != sizes[t] for g, (_, s, t) in enumerate(gens) if g in pres.inverted):
            continue
        maps = [None] * ng
        F = SetFunctor(pres, sizes, [()] * ng, check=False)

        def word(o, w):
            F.maps = maps
            return evaluate_word(F, o, w)

        def consistent(log):
            changed = True
            while changed:
                changed = False
                for r, (o, lhs, rhs) in enumerate(pres.relations):
                    missing = [g for g in rel_letters[r] if maps[g] is None]
                    if not missing:
                        if word(o, lhs) != word(o, rhs):
                            return False
                        continue
                    if len(missing) != 1:
                        continue
                    g = missing[0]
                    for side, other in ((lhs, rhs), (rhs, lhs)):
                        if side == ((g, 1),) and all(maps[h] is not None for h, _ in other):
                            val = word(o, other)
                            if g in pres.inverted and len(set(val)) != len(val):
                                return False
                            maps[g] = val
                            log.append(g)
                            changed = True
                            break
            return True

        def rec(g):
            budget[0] -= 1
            if budget[0] < 0:
                raise CapExceeded("presented functor enumeration exceeded its budget")
            while g < ng and maps[g] is not None:
                g += 1
            if g == ng:
                out.append(SetFunctor(pres, sizes, list(maps), check=False))
                return
            _, s, t = gens[g]
            if g in pres.inverted:
                cands = permutations(range(sizes[t]))
            else:
                cands = product(range(sizes[t]), repeat=sizes[s])
            for m in cands:
                maps[g] = tuple(m)
                log = [g]
                if consistent(log):
                    rec(g + 1)
                for h in log:
                    maps[h] = None

        log = []
        if consistent(log):
            rec(0)
    return out


def count_functor_iso_classes(C, k, max_objects=DEFAULT_MAX_OBJECTS, max_k=DEFAULT_MAX_K):
    """Number of isomorphism classes of functors into sets of size <= k, with representatives."""
    reps = iso_class_representatives(enumerate_set_functors(C, k, max_objects, max_k))
    reps.sort(key=lambda F: (F.sizes, F.maps))
    return len(reps), reps


# -- constructibility, recollement, Beck-Chevalley ------------------------------

def is_constructible(X, s, F):
    """F on the poset X sends every specialization inside one stratum to a bijection."""
    C = F.domain
    for f in range(C.n_morphisms):
        a, b = C.src[f], C.tgt[f]
        if s(a) == s(b) and (F.sizes[a] != F.sizes[b] or len(set(F.maps[f])) != F.sizes[a]):
            return False
    return True


def _split(L, Z):
    Z = set(Z)
    if not L.base.is_sieve(Z):
        raise NotASieve("%r is not a sieve" % (sorted(L.base.elements[p] for p in Z),))
    zobjs = [x for x in range(L.cat.n_objects) if L.labels[x] in Z]
    uobjs = [x for x in range(L.cat.n_objects) if L.labels[x] not in Z]
    CZ, i = L.cat.full_subcategory(zobjs)
    CU, j = L.cat.full_subcategory(uobjs)
    return CZ, i, CU, j


def _glue_map(F, R, i, j):
    """Components F(z) -> (J_* F|U)(z) sending a to (F(phi)(a))_{(u, phi)}."""
    comps = []
    for z in range(i.source.n_objects):
        c = i.obj_map[z]
        lookup = {fam: k for k, fam in enumerate(R.elements[c])}
        comp = []
        for a in range(F.sizes[c]):
            fam = tuple(F.maps[phi][a] for _, phi in R.comma_objects[c])
            comp.append(lookup[fam])
        comps.append(tuple(comp))
    return tuple(comps)


def glue(L, i, j, A, B, R, glue_maps):
    """Rebuild a functor on L from (A on Z, B on U, glue: A -> i* J_* B)."""
    C = L.cat
    sizes = [0] * C.n_objects
    zpos = {x: k for k, x in enumerate(i.obj_map)}
    upos = {x: k for k, x in enumerate(j.obj_map)}
    for x, k in zpos.items():
        sizes[x] = A.sizes[k]
    for x, k in upos.items():
        sizes[x] = B.sizes[k]
    zmor = {f: k for k, f in enumerate(i.mor_map)}
    umor = {f: k for k, f in enumerate(j.mor_map)}
    maps = []
    for f in range(C.n_morphisms):
        if f in zmor:
            maps.append(A.maps[zmor[f]])
        elif f in umor:
            maps.append(B.maps[umor[f]])
        else:
            z, u = C.src[f], C.tgt[f]
            col = R.comma_objects[z].index((upos[u], f))
            maps.append(tuple(R.elements[z][glue_maps[zpos[z]][a]][col] for a in range(A.sizes[zpos[z]])))
    return SetFunctor(C, sizes, maps, check=False)


def recollement_round_trip(L, Z, F, split=None, kan=None):
    """Decompose F into (F|Z, F|U, glue) and reassemble; ``ok`` iff the result is isomorphic to F.

    ``split`` and ``kan`` (a dict keyed by the open part) let sweeps reuse work.
    """
    CZ, i, CU, j = split or _split(L, Z)
    A, B = F.precompose(i), F.precompose(j)
    key = (B.sizes, B.maps)
    R = None if kan is None else kan.get(key)
    if R is None:
        R = right_kan_extension(B, j)
        if kan is not None:
            kan[key] = R
    g = _glue_map(F, R, i, j)
    G = glue(L, i, j, A, B, R, g)
    return {"triple": (A, B, g), "reassembled": G, "ok": are_isomorphic(G, F)}


def recollement_sweep(L, Z, functors):
    """Round trip every functor in ``functors`` along Z; returns the list of failures."""
    split = _split(L, Z)
    kan = {}
    return [F for F in functors if not recollement_round_trip(L, Z, F, split, kan)["ok"]]


def _triple_iso(t1, t2, R1, R2, i):
    A1, B1, g1 = t1
    A2, B2, g2 = t2
    if A1.sizes != A2.sizes or B1.sizes != B2.sizes:
        return False
    bs = natural_transformations(B1, B2, bijective=True)
    if not bs:
        return False
    as_ = natural_transformations(A1, A2, bijective=True)
    for b in bs:
        induced = []
        for z in range(len(A1.sizes)):
            c = i.obj_map[z]
            lookup = {fam: k for k, fam in enumerate(R2.elements[c])}
            cols = R1.comma_objects[c]
            induced.append([lookup[tuple(b[u][v] for (u, _), v in zip(cols, fam))] for fam in R1.elements[c]])
        for a in as_:
            if all(induced[z][g1[z][v]] == g2[z][a[z][v]] for z in range(len(A1.sizes)) for v in range(A1.sizes[z])):
                return True
    return False


def recollement_counts(L, Z, k, max_objects=DEFAULT_MAX_OBJECTS, max_k=DEFAULT_MAX_K, sheaves=None):
    """Isomorphism-class counts of functors on L and of gluing triples, values <= k.

    Triples are enumerated directly: every A on Z, every B on U and every
    natural transformation A -> i* J_* B.  ``sheaves`` may pass in the
    (count, class count) pair for L, which does not depend on Z.
    """
    _check_caps(L.cat.n_objects, k, max_objects, max_k)
    CZ, i, CU, j = _split(L, Z)
    if sheaves is None:
        Fs = enumerate_set_functors(L.cat, k, max_objects, max_k)
        sheaves = (len(Fs), len(iso_class_representatives(Fs)))
    n_all, n_sheaves = sheaves
    As = enumerate_set_functors(CZ, k, max_objects, max_k)
    Bs = enumerate_set_functors(CU, k, max_objects, max_k)
    kan = {}
    for B in Bs:
        R = right_kan_extension(B, j)
        R.lookup = [{fam: n for n, fam in enumerate(R.elements[c])} for c in range(L.cat.n_objects)]
        kan[(B.sizes, B.maps)] = R
    triples = []
    for B in Bs:
        R = kan[(B.sizes, B.maps)]
        RZ = SetFunctor(CZ, [R.sizes[c] for c in i.obj_map], [R.maps[f] for f in i.mor_map], check=False)
        for A in As:
            for g in natural_transformations(A, RZ):
                triples.append((A, B, g, R))
    n_triples = _count_triple_classes(triples, i, kan)
    return {"sheaves": n_all, "sheaf_classes": n_sheaves,
            "triples": len(triples), "triple_classes": n_triples}


def _relabel_triple(t, sz, su, i, kan):
    A, B, g, R = t
    A2, B2 = relabel(A, sz), relabel(B, su)
    R2 = kan[(B2.sizes, B2.maps)]
    g2 = []
    for z, comp in enumerate(g):
        c = i.obj_map[z]
        cols = R.comma_objects[c]
        fams = R.elements[c]
        new = [0] * len(comp)
        for a, v in enumerate(comp):
            moved = tuple(su[u][w] for (u, _), w in zip(cols, fams[v]))
            new[sz[z][a]] = R2.lookup[c][moved]
        g2.append(tuple(new))
    return (A2, B2, tuple(g2), R2)


def _count_triple_classes(triples, i, kan):
    """Isomorphism classes of gluing triples (A, B, g).

    A pair of relabellings (of A and of B) acts on triples, transporting g
    through the induced map on Kan extensions; small groups are handled by
    recording whole orbits, larger ones by pairwise search.
    """
    def key(t):
        return (t[0].sizes, t[0].maps, t[1].sizes, t[1].maps, t[2])

    seen = set()
    groups = {}
    fallback = []
    count = 0
    for t in triples:
        if key(t) in seen:
            continue
        sizes = (t[0].sizes, t[1].sizes)
        if sizes not in groups:
            gz, gu = _relabellings(sizes[0]), _relabellings(sizes[1])
            groups[sizes] = None if gz is None or gu is None or len(gz) * len(gu) > ORBIT_LIMIT else (gz, gu)
        group = groups[sizes]
        if group is None:
            fallback.append(t)
            continue
        count += 1
        for sz in group[0]:
            for su in group[1]:
                seen.add(key(_relabel_triple(t, sz, su, i, kan)))

    def sig(t):
        A, B, g, _ = t
        fibres = tuple(tuple(sorted(c.count(v) for v in set(c))) for c in g)
        return (signature(A), signature(B), fibres)

    def iso(t1, t2):
        return _triple_iso(t1[:3], t2[:3], t1[3], t2[3], i)

    return count + len(iso_class_representatives(fallback, iso=iso, sig=sig))


def beck_chevalley_check(L, Z, F):
    """Compare i*(J_* F) with p_*(q* F) across the oriented fibre product Z |_L U.

    ``F`` is a set functor on the full subcategory over the cosieve U.  The
    comparison at z sends a family over z | J to the family over z | p whose
    entry at ((z', u, phi), psi: z -> z') is the entry at (u, phi o psi).
    Returns ``(ok, witness)`` with the componentwise comparison maps.
    """
    CZ, i, CU, j = _split(L, Z)
    C = L.cat
    R = right_kan_extension(F, j)
    K = comma(i, j)
    qF = F.precompose(K.proj_target)
    S = right_kan_extension(qF, K.proj_source)
    witness = []
    ok = True
    for z in range(CZ.n_objects):
        c = i.obj_map[z]
        src_cols = {o: k for k, o in enumerate(R.comma_objects[c])}
        lookup = {fam: k for k, fam in enumerate(S.elements[z])}
        comp = []
        for fam in R.elements[c]:
            new = []
            for (kobj, psi) in S.comma_objects[z]:
                z2, u, phi = K.triples[kobj]
                new.append(fam[src_cols[(u, C.compose(phi, i.mor_map[psi]))]])
            comp.append(lookup.get(tuple(new)))
        if None in comp or len(set(comp)) != len(S.elements[z]) or len(comp) != len(S.elements[z]):
            ok = False
        witness.append(tuple(comp))
    if ok:
        # naturality in Z
        for f in range(CZ.n_morphisms):
            a, b = CZ.src[f], CZ.tgt[f]
            Rm = R.maps[i.mor_map[f]]
            Sm = S.maps[f]
            if any(witness[b][Rm[v]] != Sm[witness[a][v]] for v in range(len(witness[a]))):
                ok = False
                break
    return ok, witness


def exodromy_check(X, s, k, max_objects=DEFAULT_MAX_OBJECTS, max_k=DEFAULT_MAX_K, side_a_reps=None):
    """Constructible functors on X versus functors on the exit-path presentation of (X, s).

    Constructibility is invariant under isomorphism, so side A counts the
    constructible representatives among all functors on X; these can be
    passed in as ``side_a_reps`` when sweeping many stratifications of X.
    """
    if side_a_reps is None:
        side_a_reps = count_functor_iso_classes(FinCat.from_poset(X), k, max_objects, max_k)[1]
    count_a = sum(1 for F in side_a_reps if is_constructible(X, s, F))
    count_b, _ = count_functor_iso_classes(exit_path_of_stratified_poset(X, s), k, max_objects, max_k)
    return count_a == count_b, count_a, count_b


def exodromy_sweep(max_points=5, ks=(1, 2)):
    """Run exodromy_check over every nondegenerate stratification of every poset
    with at most ``max_points`` elements; yields (X, s, k, ok, count_a, count_b)."""
    from .poset import enumerate_stratifications, posets_up_to_iso
    for n in range(1, max_points + 1):
        for X in posets_up_to_iso(n):
            for k in ks:
                reps = count_functor_iso_classes(FinCat.from_poset(X), k)[1]
                for s in enumerate_stratifications(X):
                    ok, a, b = exodromy_check(X, s, k, side_a_reps=reps)
                    yield X, s, k, ok, a, b
