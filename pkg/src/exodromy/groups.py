"""Permutation groups with on-demand element tables.

A permutation of degree n is a tuple ``p`` with ``p[i]`` the image of ``i``.
Products compose right to left: ``mul(p, q)`` applies ``q`` first.
"""

import re
from collections import deque
from functools import cached_property

from .category import FinCat
from .errors import CapExceeded, ParseError, ValidationError

DEFAULT_ORDER_CAP = 5040


def mul(p, q):
    return tuple(p[i] for i in q)


def inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def identity_perm(n):
    return tuple(range(n))


def parse_cycles(text, degree):
    """Parse cycle notation like ``"(0 1 2)(3 4)"`` or ``"()"`` into a permutation."""
    perm = list(range(degree))
    stripped = text.replace(" ", "").replace(",", "")
    if stripped in ("", "()", "1", "e", "id"):
        return tuple(perm)
    seen = set()
    for m in re.finditer(r"\(([^()]*)\)|(\S)", text):
        if m.group(2) is not None and m.group(2) != ",":
            raise ParseError("unexpected character %r in cycle notation" % m.group(2), m.start())
        if m.group(1) is None:
            continue
        body = m.group(1).replace(",", " ").split()
        try:
            cyc = [int(x) for x in body]
        except ValueError:
            raise ParseError("non-integer point in cycle %r" % m.group(0), m.start())
        for a in cyc:
            if not 0 <= a < degree:
                raise ParseError("point %d out of range for degree %d" % (a, degree), m.start())
            if a in seen:
                raise ParseError("point %d repeated in cycle notation" % a, m.start())
            seen.add(a)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


def format_cycles(perm):
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(str(a) for a in cyc) + ")")
    return "".join(parts) or "()"


class FinGroup:
    """The subgroup of Sym(degree) generated by ``generators``."""

    def __init__(self, degree, generators, order_cap=DEFAULT_ORDER_CAP):
        self.degree = degree
        self.generators = tuple(tuple(g) for g in generators)
        self.order_cap = order_cap
        for g in self.generators:
            if sorted(g) != list(range(degree)):
                raise ValidationError(["%r is not a permutation of degree %d" % (g, degree)], "group")

    @classmethod
    def cyclic(cls, n):
        return cls(n, [tuple((i + 1) % n for i in range(n))] if n > 1 else [])

    @classmethod
    def symmetric(cls, n):
        gens = []
        if n > 1:
            gens.append(tuple([1, 0] + list(range(2, n))))
        if n > 2:
            gens.append(tuple(list(range(1, n)) + [0]))
        return cls(n, gens)

    @classmethod
    def trivial(cls, degree=1):
        return cls(degree, [])

    @classmethod
    def from_cycles(cls, degree, generator_texts):
        return cls(degree, [parse_cycles(t, degree) for t in generator_texts])

    def __repr__(self):
        return "FinGroup(degree=%d, gens=%s)" % (self.degree, [format_cycles(g) for g in self.generators])

    @cached_property
    def _bfs(self):
        """Elements in breadth-first order from the identity, with their spanning-tree words."""
        e = identity_perm(self.degree)
        elements = [e]
        words = {e: ()}
        queue = deque([e])
        while queue:
            h = queue.popleft()
            for k, g in enumerate(self.generators):
                x = mul(h, g)
                if x not in words:
                    words[x] = words[h] + (k,)
                    elements.append(x)
                    if len(elements) > self.order_cap:
                        raise CapExceeded("group order exceeds cap %d" % self.order_cap)
                    queue.append(x)
        return elements, words

    @property
    def elements(self):
        return self._bfs[0]

    def word(self, x):
        """Generator indices whose product (left to right) is ``x``."""
        return self._bfs[1][x]

    @cached_property
    def _index(self):
        return {x: i for i, x in enumerate(self.elements)}

    def order(self):
        return len(self.elements)

    def __contains__(self, x):
        return tuple(x) in self._index

    def identity(self):
        return identity_perm(self.degree)

    def subgroup(self, generators):
        return FinGroup(self.degree, generators, self.order_cap)

    def is_abelian(self):
        gens = self.generators
        return all(mul(a, b) == mul(b, a) for a in gens for b in gens)

    def classifying_category(self, label="*"):
        """B G: one object, one morphism per element."""
        els = self.elements
        idx = self._index
        table = {(i, j): idx[mul(els[i], els[j])] for i in range(len(els)) for j in range(len(els))}
        labels = [format_cycles(x) for x in els]
        return FinCat([label], labels, [0] * len(els), [0] * len(els), [0], table, check=False)

    def element_index(self, x):
        return self._index[tuple(x)]


class GroupHom:
    """A homomorphism given by generator images; validated on the Cayley graph."""

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = tuple(tuple(x) for x in images)
        if len(self.images) != len(source.generators):
            raise ValidationError(["expected %d generator images, got %d"
                                   % (len(source.generators), len(self.images))], "homomorphism")
        if check:
            report = self.validate()
            if report:
                raise ValidationError(report, "homomorphism")

    @classmethod
    def inclusion(cls, sub, group):
        return cls(sub, group, sub.generators)

    @classmethod
    def trivial(cls, source, target):
        return cls(source, target, [target.identity()] * len(source.generators))

    @cached_property
    def table(self):
        e = self.target.identity()
        out = {}
        for x in self.source.elements:
            y = e
            for k in self.source.word(x):
                y = mul(y, self.images[k])
            out[x] = y
        return out

    def validate(self):
        """Every Cayley-graph edge h -> h*g maps to an edge; equivalently the
        relators of the Cayley presentation hold on the images."""
        report = []
        for x in self.images:
            if x not in self.target:
                report.append("image %s is not in the target group" % format_cycles(x))
        if report:
            return report
        tab = self.table
        for h in self.source.elements:
            for k, g in enumerate(self.source.generators):
                if tab[mul(h, g)] != mul(tab[h], self.images[k]):
                    report.append("relation violated at %s * gen %d" % (format_cycles(h), k))
                    return report
        return report

    def __call__(self, x):
        return self.table[tuple(x)]

    def is_injective(self):
        return len(set(self.table.values())) == self.source.order()

    def image_order(self):
        return len(set(self.table.values()))
