"""JSON documents for every structure the command line reads or writes.

A document is ``{"kind": ..., "version": 1, ...payload}``.  Objects are
referred to by label, morphisms by their index in the ``morphisms`` list
(labels need not be unique).  Tuples become JSON lists and come back as
tuples.  Output is canonical: sorted keys, two-space indent, LF endings.
"""

import json
from dataclasses import dataclass

from .category import FinCat, Functor, validate_category
from .decollage import Decollage, validate_decollage
from .errors import ParseError, UnsupportedKind, ValidationError
from .galois import CurveSpec
from .groups import FinGroup, format_cycles, parse_cycles
from .homology import GroupPresentation
from .layered import LayeredCat, PresCat
from .poset import FiniteSpace, FinPoset, MonotoneMap, PosetTower
from .sheaf import SetFunctor

FORMAT_VERSION = 1
KINDS = ("poset", "space", "category", "layered", "decollage", "sheaf", "tower",
         "group", "curve", "presentation", "functor")


@dataclass
class Document:
    kind: str
    value: object


def encode_label(x):
    if isinstance(x, tuple):
        return [encode_label(v) for v in x]
    return x


def decode_label(x):
    if isinstance(x, list):
        return tuple(decode_label(v) for v in x)
    return x


def _need(payload, key, kind):
    if not isinstance(payload, dict) or key not in payload:
        raise ParseError("%s document is missing %r" % (kind, key))
    return payload[key]


def _element(P, label, what):
    try:
        return P.index(label)
    except (KeyError, TypeError):
        raise ParseError("unknown %s %r" % (what, label))


def _index_of(mapping, label, what):
    try:
        return mapping[label]
    except (KeyError, TypeError):
        raise ParseError("unknown %s %r" % (what, label))


# -- posets, spaces, towers ----------------------------------------------------------

def poset_payload(P):
    rels = [[encode_label(P.elements[a]), encode_label(P.elements[b])]
            for a, b in P.relations() if a != b]
    return {"elements": [encode_label(e) for e in P.elements], "relations": rels}


def load_poset(d):
    elements = [decode_label(e) for e in _need(d, "elements", "poset")]
    rels = [tuple(decode_label(v) for v in r) for r in d.get("relations", [])]
    if any(len(r) != 2 for r in rels):
        raise ParseError("poset relations must be pairs")
    return FinPoset.from_relations(elements, rels)


def space_payload(X):
    opens = [[encode_label(X.points[i]) for i in sorted(u)] for u in X.sorted_opens()]
    return {"points": [encode_label(p) for p in X.points], "opens": opens}


def load_space(d):
    points = [decode_label(p) for p in _need(d, "points", "space")]
    index = {p: i for i, p in enumerate(points)}
    opens = [[_index_of(index, decode_label(p), "point") for p in u] for u in _need(d, "opens", "space")]
    return FiniteSpace(points, opens)


def tower_payload(T):
    idx = T.index
    nodes = [{"at": encode_label(idx.elements[i]), "poset": poset_payload(T.nodes[i])} for i in idx]
    bonds = []
    for (i, j), b in sorted(T.bonds.items()):
        if i == j:
            continue
        bonds.append({"lower": encode_label(idx.elements[i]), "upper": encode_label(idx.elements[j]),
                      "assignment": [encode_label(b.target.elements[v]) for v in b.assignment]})
    return {"index": poset_payload(idx), "nodes": nodes, "bonds": bonds}


def load_tower(d):
    idx = load_poset(_need(d, "index", "tower"))
    nodes = {}
    for n in _need(d, "nodes", "tower"):
        nodes[_element(idx, decode_label(_need(n, "at", "tower node")), "index element")] = \
            load_poset(_need(n, "poset", "tower node"))
    if sorted(nodes) != list(idx):
        raise ParseError("tower needs exactly one node per index element")
    bonds = {}
    for b in d.get("bonds", []):
        i = _element(idx, decode_label(_need(b, "lower", "bond")), "index element")
        j = _element(idx, decode_label(_need(b, "upper", "bond")), "index element")
        src, dst = nodes[j], nodes[i]
        assignment = [decode_label(v) for v in _need(b, "assignment", "bond")]
        if len(assignment) != len(src):
            raise ParseError("bond assignment has the wrong length")
        bonds[(i, j)] = MonotoneMap(src, dst, [_element(dst, v, "element") for v in assignment])
    return PosetTower(idx, nodes, bonds)


# -- categories ------------------------------------------------------------------------

def category_payload(C):
    ident = set(C.identities)
    compose = [[g, f, h] for (g, f), h in sorted(C.table.items()) if g not in ident and f not in ident]
    return {
        "objects": [encode_label(o) for o in C.objects],
        "morphisms": [[encode_label(C.mor_labels[f]), encode_label(C.objects[C.src[f]]),
                       encode_label(C.objects[C.tgt[f]])] for f in range(C.n_morphisms)],
        "identities": list(C.identities),
        "compose": compose,
    }


def load_category(d):
    objects = [decode_label(o) for o in _need(d, "objects", "category")]
    oidx = {o: i for i, o in enumerate(objects)}
    if len(oidx) != len(objects):
        raise ParseError("duplicate object labels")
    labels, src, tgt = [], [], []
    for m in _need(d, "morphisms", "category"):
        if not isinstance(m, list) or len(m) != 3:
            raise ParseError("morphisms are [label, source, target] triples")
        labels.append(decode_label(m[0]))
        src.append(_index_of(oidx, decode_label(m[1]), "object"))
        tgt.append(_index_of(oidx, decode_label(m[2]), "object"))
    n = len(labels)
    identities = _need(d, "identities", "category")
    if len(identities) != len(objects) or any(not isinstance(i, int) or not 0 <= i < n for i in identities):
        raise ParseError("identities must list one morphism index per object")
    table = {}
    for x, i in enumerate(identities):
        for f in range(n):
            if tgt[f] == x:
                table[(i, f)] = f
            if src[f] == x:
                table[(f, i)] = f
    for entry in d.get("compose", []):
        if not isinstance(entry, list) or len(entry) != 3 or any(
                not isinstance(v, int) or not 0 <= v < n for v in entry):
            raise ParseError("compose entries are [g, f, g o f] morphism indices")
        table[(entry[0], entry[1])] = entry[2]
    C = FinCat(objects, labels, src, tgt, identities, table, check=False)
    report = validate_category(C)
    if report:
        raise ValidationError(report, "category")
    return C


def layered_payload(L):
    return {"category": category_payload(L.cat), "base": poset_payload(L.base),
            "labels": [encode_label(L.base.elements[p]) for p in L.labels]}


def load_layered(d):
    if "base" not in d:
        return LayeredCat.over_point(load_category(d))
    C = load_category(_need(d, "category", "layered"))
    P = load_poset(d["base"])
    labels = [_element(P, decode_label(p), "base element") for p in _need(d, "labels", "layered")]
    if len(labels) != C.n_objects:
        raise ParseError("layered document needs one base label per object")
    return LayeredCat(C, P, labels)


def functor_payload(F, source=None, target=None):
    """Payload for F; ``source``/``target`` are layered structures on its ends, if any."""
    def side(cat, L):
        return layered_payload(L) if L is not None else category_payload(cat)

    return {"source": side(F.source, source), "target": side(F.target, target),
            "objects": [encode_label(F.target.objects[y]) for y in F.obj_map],
            "morphisms": list(F.mor_map)}


def load_functor(d):
    """Returns (source layered cat, target layered cat, functor)."""
    A = load_layered(_need(d, "source", "functor"))
    B = load_layered(_need(d, "target", "functor"))
    oidx = {o: i for i, o in enumerate(B.cat.objects)}
    obj_map = [_index_of(oidx, decode_label(o), "object") for o in _need(d, "objects", "functor")]
    mor_map = _need(d, "morphisms", "functor")
    if len(obj_map) != A.cat.n_objects or len(mor_map) != A.cat.n_morphisms or any(
            not isinstance(v, int) or not 0 <= v < B.cat.n_morphisms for v in mor_map):
        raise ParseError("functor maps have the wrong shape")
    return A, B, Functor(A.cat, B.cat, obj_map, mor_map)


# -- décollages and sheaves ----------------------------------------------------------------

def _chain_labels(P, chain):
    return [encode_label(P.elements[i]) for i in chain]


def decollage_payload(D):
    P = D.base
    values = [{"chain": _chain_labels(P, ch), "category": category_payload(D.values[ch])}
              for ch in sorted(D.values)]
    restrictions = []
    for (ch, sub), F in sorted(D.restrictions.items()):
        restrictions.append({"chain": _chain_labels(P, ch), "sub": _chain_labels(P, sub),
                             "objects": list(F.obj_map), "morphisms": list(F.mor_map)})
    return {"base": poset_payload(P), "values": values, "restrictions": restrictions}


def load_decollage(d):
    P = load_poset(_need(d, "base", "decollage"))

    def chain(labels):
        return tuple(_element(P, decode_label(v), "base element") for v in labels)

    values = {}
    for v in _need(d, "values", "decollage"):
        values[chain(_need(v, "chain", "value"))] = load_category(_need(v, "category", "value"))
    restrictions = {}
    for r in _need(d, "restrictions", "decollage"):
        ch, sub = chain(_need(r, "chain", "restriction")), chain(_need(r, "sub", "restriction"))
        if ch not in values or sub not in values:
            raise ParseError("restriction between unknown chains %r -> %r" % (ch, sub))
        restrictions[(ch, sub)] = Functor(values[ch], values[sub], _need(r, "objects", "restriction"),
                                          _need(r, "morphisms", "restriction"))
    D = Decollage(P, values, restrictions)
    if set(values) != set(P.chains()):
        raise ValidationError(["values must be given on exactly the chains of the base"], "décollage")
    report = validate_decollage(D)
    if report:
        raise ValidationError(report, "décollage")
    return D


def sheaf_payload(F):
    return {"domain": category_payload(F.domain), "sizes": list(F.sizes), "maps": [list(m) for m in F.maps]}


def load_sheaf(d):
    C = load_category(_need(d, "domain", "sheaf"))
    return SetFunctor(C, _need(d, "sizes", "sheaf"), _need(d, "maps", "sheaf"))


# -- groups and presentations ----------------------------------------------------------------

def group_payload(G):
    return {"degree": G.degree, "generators": [format_cycles(g) for g in G.generators]}


def _perms(texts, degree):
    if not isinstance(degree, int) or degree < 1:
        raise ParseError("degree must be a positive integer")
    return [parse_cycles(t, degree) for t in texts]


def load_group(d):
    degree = _need(d, "degree", "group")
    return FinGroup(degree, _perms(_need(d, "generators", "group"), degree))


def curve_payload(spec):
    return {"g": spec.g, "n": spec.n, "degree": spec.degree, "images": [format_cycles(x) for x in spec.images]}


def load_curve(d):
    degree = _need(d, "degree", "curve")
    spec = CurveSpec(_need(d, "g", "curve"), _need(d, "n", "curve"), degree,
                     _perms(_need(d, "images", "curve"), degree))
    report = spec.validate()
    if report:
        raise ValidationError(report, "curve spec")
    return spec


def _word_payload(word, names):
    return [[encode_label(names[g]), e] for g, e in word]


def _load_word(word, index):
    out = []
    for letter in word:
        if not isinstance(letter, list) or len(letter) != 2 or letter[1] not in (1, -1):
            raise ParseError("letters are [generator, 1 or -1] pairs")
        out.append((_index_of(index, decode_label(letter[0]), "generator"), letter[1]))
    return tuple(out)


def presentation_payload(P):
    if isinstance(P, GroupPresentation):
        return {"generators": list(P.generators),
                "relators": [_word_payload(r, P.generators) for r in P.relators]}
    names = [g[0] for g in P.generators]
    out = {
        "objects": [encode_label(o) for o in P.objects],
        "generators": [[encode_label(lab), encode_label(P.objects[s]), encode_label(P.objects[t])]
                       for lab, s, t in P.generators],
        "relations": [{"at": encode_label(P.objects[o]), "lhs": _word_payload(l, names),
                       "rhs": _word_payload(r, names)} for o, l, r in P.relations],
        "inverted": [encode_label(names[g]) for g in sorted(P.inverted)],
    }
    if P.base is not None:
        out["base"] = poset_payload(P.base)
        out["labels"] = [encode_label(P.base.elements[p]) for p in P.labels]
    return out


def load_presentation(d):
    gens = _need(d, "generators", "presentation")
    if "objects" not in d:
        index = {g: i for i, g in enumerate(gens)}
        P = GroupPresentation(gens, [_load_word(r, index) for r in d.get("relators", [])])
        report = P.validate()
        if report:
            raise ValidationError(report, "presentation")
        return P
    objects = [decode_label(o) for o in d["objects"]]
    oidx = {o: i for i, o in enumerate(objects)}
    generators = [(decode_label(g[0]), _index_of(oidx, decode_label(g[1]), "object"),
                   _index_of(oidx, decode_label(g[2]), "object")) for g in gens]
    gidx = {g[0]: i for i, g in enumerate(generators)}
    if len(gidx) != len(generators):
        raise ParseError("generator labels of a presented category must be distinct")
    relations = [(_index_of(oidx, decode_label(_need(r, "at", "relation")), "object"),
                  _load_word(_need(r, "lhs", "relation"), gidx), _load_word(_need(r, "rhs", "relation"), gidx))
                 for r in d.get("relations", [])]
    inverted = [_index_of(gidx, decode_label(g), "generator") for g in d.get("inverted", [])]
    base = labels = None
    if "base" in d:
        base = load_poset(d["base"])
        labels = [_element(base, decode_label(p), "base element") for p in _need(d, "labels", "presentation")]
    P = PresCat(objects, generators, relations, inverted, base, labels)
    report = P.validate()
    if report:
        raise ValidationError(report, "presented category")
    return P


# -- dispatch --------------------------------------------------------------------------------

LOADERS = {
    "poset": load_poset, "space": load_space, "category": load_category, "layered": load_layered,
    "decollage": load_decollage, "sheaf": load_sheaf, "tower": load_tower, "group": load_group,
    "curve": load_curve, "presentation": load_presentation, "functor": load_functor,
}


def kind_of(value):
    if isinstance(value, tuple) and len(value) == 3 and isinstance(value[2], Functor):
        return "functor"
    for cls, kind in ((FinPoset, "poset"), (FiniteSpace, "space"), (FinCat, "category"),
                      (LayeredCat, "layered"), (Decollage, "decollage"), (SetFunctor, "sheaf"),
                      (PosetTower, "tower"), (FinGroup, "group"), (CurveSpec, "curve"),
                      (GroupPresentation, "presentation"), (PresCat, "presentation")):
        if isinstance(value, cls):
            return kind
    raise UnsupportedKind("no document kind for %s" % type(value).__name__)


def to_payload(value, kind=None):
    kind = kind or kind_of(value)
    payload = {
        "poset": poset_payload, "space": space_payload, "category": category_payload,
        "layered": layered_payload, "decollage": decollage_payload, "sheaf": sheaf_payload,
        "tower": tower_payload, "group": group_payload, "curve": curve_payload,
        "presentation": presentation_payload,
        "functor": lambda v: functor_payload(v[2], v[0], v[1]),
    }[kind](value)
    payload["kind"] = kind
    payload["version"] = FORMAT_VERSION
    return payload


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_document(value, kind=None):
    return dumps(to_payload(value, kind))


def parse_document(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, "line %d column %d" % (exc.lineno, exc.colno))
    if not isinstance(data, dict):
        raise ParseError("a document must be a JSON object")
    kind = data.get("kind")
    if kind not in LOADERS:
        raise ParseError("unknown document kind %r" % (kind,))
    if data.get("version") != FORMAT_VERSION:
        raise ParseError("unsupported format version %r" % (data.get("version"),))
    try:
        return Document(kind, LOADERS[kind](data))
    except (TypeError, AttributeError, IndexError) as exc:
        raise ParseError("malformed %s document: %s" % (kind, exc))


def load_document(path_or_text):
    """Parse a document from a path or from its text."""
    text = path_or_text
    if not path_or_text.lstrip().startswith("{"):
        try:
            with open(path_or_text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError("cannot read %s: %s" % (path_or_text, exc.strerror))
    return parse_document(text)
