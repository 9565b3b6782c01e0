"""Finite posets, their Alexandroff spaces, subdivisions, towers and stratifications.

Elements are addressed by index; labels are carried along for display and
serialization only.  Every enumeration returns results in lexicographic order
of element indices so that outputs are deterministic.
"""

from functools import lru_cache
from itertools import combinations, permutations, product

from .errors import NotT0, ValidationError


def _closure(n, pairs):
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        leq[a][b] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                row_k = leq[k]
                row_i = leq[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return leq


class FinPoset:
    """A finite partial order stored as a full boolean relation matrix."""

    def __init__(self, elements, leq, check=True):
        self.elements = tuple(elements)
        self.leq = tuple(tuple(bool(x) for x in row) for row in leq)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValidationError(["duplicate element labels"], "poset")
        if check:
            report = self.validate()
            if report:
                raise ValidationError(report, "poset")

    @classmethod
    def from_relations(cls, elements, relations):
        """Build from ``a <= b`` label pairs, taking the reflexive-transitive closure."""
        elements = list(elements)
        index = {e: i for i, e in enumerate(elements)}
        try:
            pairs = [(index[a], index[b]) for a, b in relations]
        except KeyError as exc:
            raise ValidationError(["unknown element %r in relation" % (exc.args[0],)], "poset")
        return cls(elements, _closure(len(elements), pairs))

    @classmethod
    def chain(cls, n):
        """The ordinal [n] = {0 < 1 < ... < n}."""
        return cls(range(n + 1), [[i <= j for j in range(n + 1)] for i in range(n + 1)])

    @classmethod
    def discrete(cls, n, labels=None):
        labels = list(range(n)) if labels is None else list(labels)
        return cls(labels, [[i == j for j in range(n)] for i in range(n)])

    @classmethod
    def point(cls):
        return cls.discrete(1)

    def validate(self):
        n = len(self.elements)
        report = []
        if any(len(row) != n for row in self.leq) or len(self.leq) != n:
            return ["relation matrix is not %dx%d" % (n, n)]
        for i in range(n):
            if not self.leq[i][i]:
                report.append("not reflexive at %r" % (self.elements[i],))
        for i in range(n):
            for j in range(i + 1, n):
                if self.leq[i][j] and self.leq[j][i]:
                    report.append("not antisymmetric: %r, %r" % (self.elements[i], self.elements[j]))
        for i in range(n):
            for j in range(n):
                if self.leq[i][j]:
                    for k in range(n):
                        if self.leq[j][k] and not self.leq[i][k]:
                            report.append("not transitive: %r <= %r <= %r" % (
                                self.elements[i], self.elements[j], self.elements[k]))
        return report

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(range(len(self.elements)))

    def __repr__(self):
        return "FinPoset(%r, covers=%r)" % (
            list(self.elements), [(self.elements[a], self.elements[b]) for a, b in self.covers()])

    def __eq__(self, other):
        return isinstance(other, FinPoset) and self.elements == other.elements and self.leq == other.leq

    def __hash__(self):
        return hash((self.elements, self.leq))

    def index(self, label):
        return self._index[label]

    def le(self, i, j):
        return self.leq[i][j]

    def lt(self, i, j):
        return i != j and self.leq[i][j]

    def up(self, i):
        return frozenset(j for j in self if self.leq[i][j])

    def down(self, i):
        return frozenset(j for j in self if self.leq[j][i])

    def relations(self):
        return [(i, j) for i in self for j in self if self.leq[i][j]]

    def covers(self):
        out = []
        for i in self:
            for j in self:
                if self.lt(i, j) and not any(self.lt(i, k) and self.lt(k, j) for k in self):
                    out.append((i, j))
        return out

    def is_sieve(self, subset):
        s = set(subset)
        return all(i in s for j in s for i in self.down(j))

    def is_cosieve(self, subset):
        s = set(subset)
        return all(j in s for i in s for j in self.up(i))

    def is_interval(self, subset):
        s = set(subset)
        for p in s:
            for r in s:
                if self.leq[p][r]:
                    for q in self:
                        if self.leq[p][q] and self.leq[q][r] and q not in s:
                            return False
        return True

    def cosieves(self):
        n = len(self)
        return [frozenset(c) for r in range(n + 1) for c in combinations(range(n), r)
                if self.is_cosieve(c)]

    def sieves(self):
        n = len(self)
        return [frozenset(c) for r in range(n + 1) for c in combinations(range(n), r)
                if self.is_sieve(c)]

    def chains(self):
        """Nonempty totally ordered subsets as bottom-to-top index tuples, in lex order."""
        order = sorted(self, key=lambda i: (len(self.down(i)), i))
        out = []

        def extend(chain, start):
            for pos in range(start, len(order)):
                i = order[pos]
                if not chain or self.lt(chain[-1], i):
                    new = chain + (i,)
                    out.append(new)
                    extend(new, pos + 1)

        extend((), 0)
        return sorted(out)

    def height(self):
        """Length of the longest chain minus one (-1 for the empty poset)."""
        return max((len(c) for c in self.chains()), default=0) - 1

    def induced(self, subset):
        idx = sorted(subset)
        return FinPoset([self.elements[i] for i in idx],
                        [[self.leq[i][j] for j in idx] for i in idx], check=False)

    def op(self):
        n = len(self)
        return FinPoset(self.elements, [[self.leq[j][i] for j in range(n)] for i in range(n)], check=False)

    def minimal(self):
        return [i for i in self if not any(self.lt(j, i) for j in self)]

    def maximal(self):
        return [i for i in self if not any(self.lt(i, j) for j in self)]

    def canonical_form(self):
        """Lexicographically least relation bit-string over all relabelings."""
        n = len(self)
        best = None
        for perm in permutations(range(n)):
            bits = tuple(self.leq[perm[i]][perm[j]] for i in range(n) for j in range(n))
            if best is None or bits < best:
                best = bits
        return (n, best)

    def isomorphism(self, other):
        """An order isomorphism self -> other as an index tuple, or None."""
        n = len(self)
        if n != len(other):
            return None
        up_sig = sorted((len(self.up(i)), len(self.down(i))) for i in self)
        if up_sig != sorted((len(other.up(i)), len(other.down(i))) for i in other):
            return None
        for perm in permutations(range(n)):
            if all(self.leq[i][j] == other.leq[perm[i]][perm[j]] for i in range(n) for j in range(n)):
                return perm
        return None


class MonotoneMap:
    """An order-preserving map between finite posets, as an index assignment."""

    def __init__(self, source, target, assignment, check=True):
        self.source = source
        self.target = target
        self.assignment = tuple(assignment)
        if check:
            report = self.validate()
            if report:
                raise ValidationError(report, "monotone map")

    @classmethod
    def from_labels(cls, source, target, mapping):
        return cls(source, target, [target.index(mapping[e]) for e in source.elements])

    @classmethod
    def identity(cls, poset):
        return cls(poset, poset, range(len(poset)))

    @classmethod
    def to_point(cls, poset, label=0):
        return cls(poset, FinPoset([label], [[True]]), [0] * len(poset))

    def validate(self):
        if len(self.assignment) != len(self.source):
            return ["assignment has %d entries for %d elements" % (len(self.assignment), len(self.source))]
        report = []
        for a in self.assignment:
            if not 0 <= a < len(self.target):
                report.append("image %r out of range" % (a,))
        if report:
            return report
        for i, j in self.source.relations():
            if not self.target.le(self.assignment[i], self.assignment[j]):
                report.append("not monotone on %r <= %r" % (self.source.elements[i], self.source.elements[j]))
        return report

    def __call__(self, i):
        return self.assignment[i]

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self.assignment == other.assignment
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash(self.assignment)

    def __repr__(self):
        return "MonotoneMap(%r)" % ({self.source.elements[i]: self.target.elements[a]
                                     for i, a in enumerate(self.assignment)},)

    def compose(self, first):
        """self o first."""
        return MonotoneMap(first.source, self.target, [self.assignment[a] for a in first.assignment])

    def fiber(self, q):
        return [i for i, a in enumerate(self.assignment) if a == q]

    def is_surjective(self):
        return set(self.assignment) == set(range(len(self.target)))

    def is_nondegenerate(self):
        """Every stratum is nonempty, and p <= q puts stratum p inside the closure of stratum q."""
        if not self.is_surjective():
            return False
        src = self.source
        for p, q in self.target.relations():
            for x in self.fiber(p):
                if not any(src.le(x, y) for y in self.fiber(q)):
                    return False
        return True


class FiniteSpace:
    """A finite topological space given by its family of open sets (index sets)."""

    def __init__(self, points, opens, check=True):
        self.points = tuple(points)
        self.opens = frozenset(frozenset(u) for u in opens)
        if check:
            report = self.validate()
            if report:
                raise ValidationError(report, "finite space")

    def validate(self):
        n = len(self.points)
        full = frozenset(range(n))
        report = []
        if frozenset() not in self.opens:
            report.append("empty set is not open")
        if full not in self.opens:
            report.append("whole space is not open")
        for u in self.opens:
            if not u <= full:
                report.append("open set %r has unknown points" % (sorted(u),))
        opens = list(self.opens)
        for u, v in combinations(opens, 2):
            if u | v not in self.opens:
                report.append("union of %r and %r is not open" % (sorted(u), sorted(v)))
            if u & v not in self.opens:
                report.append("intersection of %r and %r is not open" % (sorted(u), sorted(v)))
        return report

    def neighborhoods(self, x):
        return frozenset(u for u in self.opens if x in u)

    def is_t0(self):
        nbhd = [self.neighborhoods(x) for x in range(len(self.points))]
        return len(set(nbhd)) == len(nbhd)

    def closure(self, subset):
        s = set(subset)
        hidden = set()
        for u in self.opens:
            if not (u & s):
                hidden |= u
        return frozenset(range(len(self.points))) - hidden

    def sorted_opens(self):
        return sorted(self.opens, key=lambda u: (len(u), sorted(u)))


def alexandroff(poset):
    """The Alexandroff space of ``poset``: opens are exactly the cosieves."""
    return FiniteSpace(poset.elements, poset.cosieves(), check=False)


def specialization_poset(space):
    """x <= y iff x lies in the closure of {y}.  Requires a T0 space."""
    if not space.is_t0():
        raise NotT0("points share neighborhood families; specialization preorder is not a poset")
    n = len(space.points)
    closures = [space.closure([y]) for y in range(n)]
    return FinPoset(space.points, [[x in closures[y] for y in range(n)] for x in range(n)])


def subdivision(poset):
    """The poset of nonempty chains of ``poset`` ordered by inclusion."""
    chains = poset.chains()
    sets = [frozenset(c) for c in chains]
    labels = [tuple(poset.elements[i] for i in c) for c in chains]
    leq = [[a <= b for b in sets] for a in sets]
    sd = FinPoset(labels, leq, check=False)
    sd.strings = tuple(chains)
    return sd


def classify_subposet(poset, subset):
    """Strongest of ``clopen``, ``sieve``, ``cosieve``, ``interval``, ``none``."""
    s = set(subset)
    sieve = poset.is_sieve(s)
    cosieve = poset.is_cosieve(s)
    if sieve and cosieve:
        return "clopen"
    if sieve:
        return "sieve"
    if cosieve:
        return "cosieve"
    if poset.is_interval(s):
        return "interval"
    return "none"


class PosetTower:
    """An inverse system of finite posets.

    ``bonds[(i, j)]`` for index relations i <= j is a monotone map
    ``nodes[j] -> nodes[i]``.  Bonds may be supplied on cover relations only;
    the remaining ones are composed and every path is checked to agree.
    """

    def __init__(self, index, nodes, bonds, check=True):
        self.index = index
        self.nodes = dict(nodes)
        self.bonds = dict(bonds)
        for i in index:
            self.bonds.setdefault((i, i), MonotoneMap.identity(self.nodes[i]))
        report = self._complete()
        if check:
            report += self.validate()
            if report:
                raise ValidationError(report, "tower")

    def _complete(self):
        report = []
        changed = True
        while changed:
            changed = False
            for (i, j), b_ij in list(self.bonds.items()):
                for (j2, k), b_jk in list(self.bonds.items()):
                    if j2 != j:
                        continue
                    comp = b_ij.compose(b_jk)
                    have = self.bonds.get((i, k))
                    if have is None:
                        self.bonds[(i, k)] = comp
                        changed = True
                    elif have.assignment != comp.assignment:
                        msg = "bonds disagree on %r <= %r" % (self.index.elements[i], self.index.elements[k])
                        if msg not in report:
                            report.append(msg)
        return report

    def validate(self):
        report = []
        for i, j in self.index.relations():
            b = self.bonds.get((i, j))
            if b is None:
                report.append("missing bond for %r <= %r" % (self.index.elements[i], self.index.elements[j]))
            elif b.source is not self.nodes[j] and b.source != self.nodes[j]:
                report.append("bond %r <= %r has wrong source" % (self.index.elements[i], self.index.elements[j]))
        for key in self.bonds:
            if not self.index.le(*key):
                report.append("bond on non-relation %r" % (key,))
        return report


def tower_limit(tower):
    """Compatible families (p_i) ordered componentwise."""
    index = tower.index
    order = sorted(index, key=lambda i: (-len(index.up(i)), i))
    families = []

    def search(pos, fam):
        if pos == len(order):
            families.append(tuple(fam[i] for i in index))
            return
        i = order[pos]
        for p in range(len(tower.nodes[i])):
            ok = True
            for j, q in fam.items():
                if index.le(i, j) and tower.bonds[(i, j)](q) != p:
                    ok = False
                    break
                if index.le(j, i) and tower.bonds[(j, i)](p) != q:
                    ok = False
                    break
            if ok:
                fam[i] = p
                search(pos + 1, fam)
                del fam[i]

    search(0, {})
    families.sort()
    labels = [tuple(tower.nodes[i].elements[f[i]] for i in index) for f in families]
    if len(index) == 1:
        labels = [lab[0] for lab in labels]
    leq = [[all(tower.nodes[i].le(a[i], b[i]) for i in index) for b in families] for a in families]
    return FinPoset(labels, leq)


def set_partitions(n):
    """Set partitions of range(n) as block-index assignments in restricted-growth form."""
    out = []

    def rec(i, assign, nblocks):
        if i == n:
            out.append(tuple(assign))
            return
        for b in range(nblocks + 1):
            assign.append(b)
            rec(i + 1, assign, max(nblocks, b + 1))
            assign.pop()

    rec(0, [], 0)
    return out


@lru_cache(maxsize=None)
def labeled_partial_orders(k):
    """Every partial order on range(k), as frozensets of strict pairs."""
    pairs = list(combinations(range(k), 2))
    out = []
    for choice in product((0, 1, 2), repeat=len(pairs)):
        rel = set()
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                rel.add((a, b))
            elif c == 2:
                rel.add((b, a))
        if all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c and a != d):
            out.append(frozenset(rel))
    return tuple(out)


def enumerate_stratifications(poset, nondegenerate=True):
    """All stratifications of ``poset`` up to isomorphism of the target.

    A stratification is a monotone surjection onto a finite poset.  With
    ``nondegenerate`` (the default) every target relation p <= q must also put
    each point of stratum p below some point of stratum q.  Strata are labelled
    by the tuple of their members (or the member itself for singletons), so two
    results never differ by a relabelling of the target.
    """
    n = len(poset)
    results = []
    for assign in set_partitions(n):
        k = max(assign, default=-1) + 1
        blocks = [[i for i in range(n) if assign[i] == b] for b in range(k)]
        induced = {(assign[i], assign[j]) for i, j in poset.relations() if assign[i] != assign[j]}
        if nondegenerate:
            closed = _closure(k, induced)
            rel = {(a, b) for a in range(k) for b in range(k) if a != b and closed[a][b]}
            if any((b, a) in rel for a, b in rel):
                continue
            candidates = [frozenset(rel)]
        else:
            candidates = [r for r in labeled_partial_orders(k) if induced <= r]
        for rel in candidates:
            leq = [[a == b or (a, b) in rel for b in range(k)] for a in range(k)]
            labels = [tuple(poset.elements[i] for i in blk) if len(blk) > 1 else poset.elements[blk[0]]
                      for blk in blocks]
            target = FinPoset(labels, leq, check=False)
            if target.validate():
                continue
            f = MonotoneMap(poset, target, assign, check=False)
            if f.validate():
                continue
            if nondegenerate and not f.is_nondegenerate():
                continue
            results.append(f)
    results.sort(key=lambda f: (f.assignment, f.target.leq))
    return results


@lru_cache(maxsize=None)
def _naturally_labeled(n):
    pairs = list(combinations(range(n), 2))
    out = []
    for bits in product((False, True), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c):
            out.append(frozenset(rel))
    return out


def posets_up_to_iso(n):
    """One representative per isomorphism class of posets on n elements (labels 0..n-1)."""
    seen = {}
    for rel in _naturally_labeled(n):
        P = FinPoset(range(n), [[i == j or (i, j) in rel for j in range(n)] for i in range(n)], check=False)
        key = P.canonical_form()
        if key not in seen:
            seen[key] = P
    return [seen[k] for k in sorted(seen)]
