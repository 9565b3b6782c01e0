"""Graphviz output for posets, categories and layered categories.

Nodes are numbered by index so the text depends only on the structure and
its labels.  Categories draw every non-identity morphism; layered categories
put each stratum in its own cluster.
"""

from .category import FinCat
from .errors import UnsupportedKind
from .layered import LayeredCat
from .poset import FinPoset


def _quote(x):
    s = str(x).replace("\\", "\\\\").replace('"', '\\"')
    return '"%s"' % s


def poset_dot(P, name="poset"):
    lines = ["digraph %s {" % name, "  rankdir=BT;"]
    for i in P:
        lines.append("  n%d [label=%s];" % (i, _quote(P.elements[i])))
    for a, b in P.covers():
        lines.append("  n%d -> n%d;" % (a, b))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _edges(C, lines):
    for f in range(C.n_morphisms):
        if not C.is_identity(f):
            lines.append("  n%d -> n%d [label=%s];" % (C.src[f], C.tgt[f], _quote(C.mor_labels[f])))


def category_dot(C, name="category"):
    lines = ["digraph %s {" % name]
    for x in range(C.n_objects):
        lines.append("  n%d [label=%s];" % (x, _quote(C.objects[x])))
    _edges(C, lines)
    lines.append("}")
    return "\n".join(lines) + "\n"


def layered_dot(L, name="layered"):
    C = L.cat
    lines = ["digraph %s {" % name, "  rankdir=LR;"]
    for p in L.base:
        lines.append("  subgraph cluster_%d {" % p)
        lines.append("    label=%s;" % _quote(L.base.elements[p]))
        for x in L.over(p):
            lines.append("    n%d [label=%s];" % (x, _quote(C.objects[x])))
        lines.append("  }")
    _edges(C, lines)
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(value):
    if isinstance(value, FinPoset):
        return poset_dot(value)
    if isinstance(value, LayeredCat):
        return layered_dot(value)
    if isinstance(value, FinCat):
        return category_dot(value)
    raise UnsupportedKind("DOT output needs a poset, category or layered category, not %s"
                          % type(value).__name__)
