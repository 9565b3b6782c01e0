"""Command line entry point.

Exit status: 0 on success, 1 when a structure fails validation, a cap is hit
or a check fails, 2 on unreadable input or bad usage.
"""

import argparse
import json
import sys

from . import __version__
from .category import FinCat
from .decollage import nerve, reassemble
from .dot import emit_dot
from .errors import ExodromyError, ParseError
from .galois import (build_curve_level, build_dvr, classify_gal_morphism, curve_presentation,
                     describe_layered, localize_normalize)
from .homology import (format_group, format_homology, grothendieck, homology_groups, nerve_complex,
                       presentation_h1, van_kampen_check)
from .io import FORMAT_VERSION, decode_label, dumps, emit_document, encode_label, load_document, to_payload
from .layered import LayeredCat, PresCat, coarsen
from .poset import (MonotoneMap, alexandroff, classify_subposet, enumerate_stratifications,
                    specialization_poset, subdivision, tower_limit)
from .sheaf import (beck_chevalley_check, count_functor_iso_classes, enumerate_set_functors,
                    exodromy_check, recollement_counts, recollement_sweep)


class CheckFailed(Exception):
    pass


def parse_label(text):
    try:
        return decode_label(json.loads(text))
    except ValueError:
        return text


def parse_labels(text):
    if text.strip().startswith("["):
        try:
            return [decode_label(v) for v in json.loads(text)]
        except ValueError as exc:
            raise ParseError("bad label list: %s" % exc)
    return [parse_label(t.strip()) for t in text.split(",") if t.strip()]


def _expect(doc, *kinds):
    if doc.kind not in kinds:
        raise ParseError("expected a %s document, got %s" % (" or ".join(kinds), doc.kind))
    return doc.value


def _points(P, labels):
    out = []
    for lab in labels:
        try:
            out.append(P.index(lab))
        except KeyError:
            raise ParseError("unknown base element %r" % (lab,))
    return out


def as_layered(doc):
    if doc.kind == "poset":
        return LayeredCat.from_poset(doc.value)
    if doc.kind == "category":
        return LayeredCat.over_point(doc.value)
    return _expect(doc, "layered")


def _stratification(X, args):
    """--target/--assign, or the map to a point."""
    if args.target is None:
        if args.assign:
            raise ParseError("--assign needs --target")
        return MonotoneMap.to_point(X)
    P = _expect(load_document(args.target), "poset")
    if not args.assign:
        raise ParseError("--target needs --assign")
    mapping = {}
    for part in args.assign.split(","):
        if "=" not in part:
            raise ParseError("--assign entries look like element=target")
        a, b = part.split("=", 1)
        mapping[parse_label(a.strip())] = parse_label(b.strip())
    try:
        return MonotoneMap.from_labels(X, P, mapping)
    except KeyError as exc:
        raise ParseError("--assign misses or names an unknown element: %r" % (exc.args[0],))


# -- commands ------------------------------------------------------------------------

def cmd_validate(args, out):
    doc = load_document(args.document)  # loading runs the validator for its kind
    out("ok: valid %s" % doc.kind)


def cmd_alexandroff(args, out):
    out(emit_document(alexandroff(_expect(load_document(args.document), "poset"))), raw=True)


def cmd_specialize(args, out):
    out(emit_document(specialization_poset(_expect(load_document(args.document), "space"))), raw=True)


def cmd_sd(args, out):
    out(emit_document(subdivision(_expect(load_document(args.document), "poset"))), raw=True)


def cmd_classify_subposet(args, out):
    P = _expect(load_document(args.document), "poset")
    out(classify_subposet(P, _points(P, parse_labels(args.subset))))


def cmd_stratifications(args, out):
    P = _expect(load_document(args.document), "poset")
    items = []
    for s in enumerate_stratifications(P, nondegenerate=not args.all):
        items.append({"target": to_payload(s.target), "assignment":
                      [encode_label(s.target.elements[v]) for v in s.assignment]})
    out(dumps({"count": len(items), "stratifications": items}), raw=True)


def cmd_tower_limit(args, out):
    out(emit_document(tower_limit(_expect(load_document(args.document), "tower"))), raw=True)


def cmd_nerve(args, out):
    out(emit_document(nerve(as_layered(load_document(args.document)))), raw=True)


def cmd_reassemble(args, out):
    out(emit_document(reassemble(_expect(load_document(args.document), "decollage"))), raw=True)


def cmd_coarsen(args, out):
    L = as_layered(load_document(args.document))
    if args.target is None and not args.assign:
        f = MonotoneMap.to_point(L.base)
    else:
        f = _stratification(L.base, args)
    out(emit_document(coarsen(L, f)), raw=True)


def cmd_exodromy(args, out):
    X = _expect(load_document(args.document), "poset")
    ok, a, b = exodromy_check(X, _stratification(X, args), args.k, args.max_objects)
    if not ok:
        raise CheckFailed("mismatch: %d != %d" % (a, b))
    out("ok: %d = %d" % (a, b))


def _sieve(L, args):
    if args.sieve is None:
        raise ParseError("--sieve is required")
    return set(_points(L.base, parse_labels(args.sieve)))


def cmd_recollement(args, out):
    L = as_layered(load_document(args.document))
    Z = _sieve(L, args)
    bad = recollement_sweep(L, Z, enumerate_set_functors(L.cat, args.k, args.max_objects))
    counts = recollement_counts(L, Z, args.k, args.max_objects)
    if bad or counts["sheaf_classes"] != counts["triple_classes"]:
        raise CheckFailed("mismatch: %d round trips failed; classes %d != %d"
                          % (len(bad), counts["sheaf_classes"], counts["triple_classes"]))
    out("ok: %d sheaf classes = %d triple classes" % (counts["sheaf_classes"], counts["triple_classes"]))


def cmd_beck_chevalley(args, out):
    L = as_layered(load_document(args.document))
    Z = _sieve(L, args)
    objs = [x for x in range(L.cat.n_objects) if L.labels[x] not in Z]
    U, _ = L.cat.full_subcategory(objs)
    functors = enumerate_set_functors(U, args.k, args.max_objects)
    failed = sum(1 for F in functors if not beck_chevalley_check(L, Z, F)[0])
    if failed:
        raise CheckFailed("mismatch: %d of %d functors fail" % (failed, len(functors)))
    out("ok: %d functors" % len(functors))


def _category_of(doc):
    if doc.kind == "poset":
        return FinCat.from_poset(doc.value)
    if doc.kind == "layered":
        return doc.value.cat
    return _expect(doc, "category")


def cmd_homology(args, out):
    C = _category_of(load_document(args.document))
    K = nerve_complex(C, args.max_dim)
    out(format_homology([homology_groups(K, n) for n in range(args.max_dim)]))


def cmd_h1_presentation(args, out):
    doc = load_document(args.document)
    if doc.kind == "curve":
        P = curve_presentation(doc.value.g, doc.value.n)
    else:
        P = _expect(doc, "presentation")
    out("H1=%s" % format_group(*presentation_h1(P)))


def cmd_grothendieck(args, out):
    out(emit_document(grothendieck(_expect(load_document(args.document), "decollage"))), raw=True)


def cmd_vankampen(args, out):
    L = as_layered(load_document(args.document))
    ok, lhs, rhs = van_kampen_check(L)
    if not ok:
        raise CheckFailed("mismatch: %s vs %s" % (format_homology(lhs), format_homology(rhs)))
    out("ok: %s" % format_homology(lhs))


def cmd_curve(args, out):
    spec = _expect(load_document(args.document), "curve")
    if args.presentation:
        out(emit_document(curve_presentation(spec.g, spec.n)), raw=True)
    else:
        out(emit_document(build_curve_level(spec)), raw=True)


def cmd_dvr(args, out):
    out(emit_document(build_dvr()), raw=True)


def cmd_classify_morphism(args, out):
    A, B, F = _expect(load_document(args.document), "functor")
    tags = classify_gal_morphism(A, B, F)
    tags["base_map"] = [[encode_label(k), encode_label(v)] for k, v in tags["base_map"].items()]
    out(dumps(tags), raw=True)


def _localize(args, out, key, flag):
    L = as_layered(load_document(args.document))
    if args.object is None:
        raise ParseError("--object is required")
    label = parse_label(args.object)
    try:
        x = L.cat.obj(label)
    except KeyError:
        raise ParseError("unknown object %r" % (label,))
    res = localize_normalize(L, x)
    if args.summary:
        info = describe_layered(res[key])
        info[flag] = res[flag]
        info["weakly_initial"] = res["weakly_initial"]
        info["weakly_terminal"] = res["weakly_terminal"]
        out(dumps(info), raw=True)
    else:
        out(emit_document(res[key]), raw=True)


def cmd_localize(args, out):
    _localize(args, out, "coslice", "weakly_initial_in_coslice")


def cmd_normalize(args, out):
    _localize(args, out, "slice", "weakly_terminal_in_slice")


def cmd_count_functors(args, out):
    doc = load_document(args.document)
    C = doc.value if doc.kind == "presentation" and isinstance(doc.value, PresCat) else _category_of(doc)
    n, _ = count_functor_iso_classes(C, args.k, args.max_objects)
    out(str(n))


def cmd_dot(args, out):
    doc = load_document(args.document)
    out(emit_dot(doc.value), raw=True)


COMMANDS = {
    "validate": (cmd_validate, "load a document and run its validator"),
    "alexandroff": (cmd_alexandroff, "open sets of the Alexandroff topology of a poset"),
    "specialize": (cmd_specialize, "specialization poset of a finite T0 space"),
    "sd": (cmd_sd, "poset of nonempty chains"),
    "classify-subposet": (cmd_classify_subposet, "sieve, cosieve, interval, clopen or none"),
    "stratifications": (cmd_stratifications, "stratifications of a poset up to isomorphism"),
    "tower-limit": (cmd_tower_limit, "limit of a tower of posets"),
    "nerve": (cmd_nerve, "décollage of a layered category"),
    "reassemble": (cmd_reassemble, "layered category glued from a décollage"),
    "coarsen": (cmd_coarsen, "presentation after inverting morphisms over coarser strata"),
    "exodromy": (cmd_exodromy, "compare constructible sheaf and exit-path functor counts"),
    "recollement": (cmd_recollement, "check decomposition and gluing of set functors"),
    "beck-chevalley": (cmd_beck_chevalley, "check the base change comparison across a sieve"),
    "homology": (cmd_homology, "integral homology of the nerve"),
    "h1-presentation": (cmd_h1_presentation, "abelianization of a presentation"),
    "grothendieck": (cmd_grothendieck, "total category of a décollage"),
    "vankampen": (cmd_vankampen, "compare H0, H1 of a layered category and its décollage"),
    "curve": (cmd_curve, "curve-level category (or presentation) from a curve document"),
    "dvr": (cmd_dvr, "the two-stratum category of Z/2 <- Z/2 -> S_3"),
    "classify-morphism": (cmd_classify_morphism, "immersion and fibration tags of a functor"),
    "localize": (cmd_localize, "coslice under an object"),
    "normalize": (cmd_normalize, "slice over an object"),
    "count-functors": (cmd_count_functors, "isomorphism classes of functors to small sets"),
    "dot": (cmd_dot, "Graphviz rendering"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="exodromy", description="Finite stratified categories and their sheaves.")
    parser.add_argument("--version", action="version",
                        version="%%(prog)s %s (document format %d)" % (__version__, FORMAT_VERSION))
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        if name != "dvr":
            p.add_argument("document", help="path to a JSON document (or the JSON text itself)")
        if name in ("exodromy", "recollement", "beck-chevalley", "count-functors"):
            p.add_argument("--k", type=int, default=2, help="largest set size (default 2)")
            p.add_argument("--max-objects", "--cap", dest="max_objects", type=int, default=6,
                           help="object cap (default 6)")
        if name in ("exodromy", "coarsen"):
            p.add_argument("--target", help="poset document for the stratification target")
            p.add_argument("--assign", help="element=target pairs separated by commas")
        if name in ("recollement", "beck-chevalley"):
            p.add_argument("--sieve", help="closed base elements, comma separated or a JSON list")
        if name == "classify-subposet":
            p.add_argument("--subset", required=True, help="elements, comma separated or a JSON list")
        if name == "stratifications":
            p.add_argument("--all", action="store_true", help="include degenerate stratifications")
        if name == "homology":
            p.add_argument("--max-dim", type=int, default=3, help="top nerve degree, at most 3 (default 3)")
        if name == "curve":
            p.add_argument("--presentation", action="store_true", help="emit the group presentation instead")
        if name in ("localize", "normalize"):
            p.add_argument("--object", help="object label (JSON for non-string labels)")
            p.add_argument("--summary", action="store_true", help="print sizes and flags instead of the document")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    def out(text, raw=False):
        sys.stdout.write(text if raw else text + "\n")

    handler = COMMANDS[args.command][0]
    try:
        handler(args, out)
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(str(exc))
        return 1
    except ExodromyError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
