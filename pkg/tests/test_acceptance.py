"""Acceptance checks, one test per criterion, each under its own time limit.

Every test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -s``
or ``-rP``) before asserting.
"""

import contextlib
import io
import json
import time

import pytest

from exodromy.category import Functor, action_groupoid, classify_fibration, point_category
from exodromy.cli import main
from exodromy.corpus import full_corpus
from exodromy.decollage import nerve, reassemble
from exodromy.galois import (INFINITY, build_curve_level, build_dvr, curve_point, curve_presentation,
                             cyclic_curve_spec, stratum_inclusion, classify_gal_morphism)
from exodromy.groups import FinGroup
from exodromy.homology import category_homology, homology_groups, nerve_complex, presentation_h1, \
    van_kampen_check
from exodromy.io import emit_document, load_document
from exodromy.layered import LayeredCat, layered_equivalence
from exodromy.poset import FinPoset, MonotoneMap, alexandroff, posets_up_to_iso, specialization_poset
from exodromy.sheaf import (beck_chevalley_check, enumerate_set_functors, exodromy_check, exodromy_sweep,
                            iso_class_representatives, recollement_counts, recollement_sweep)

pytestmark = pytest.mark.acceptance


def report(number, title, limit, body):
    start = time.perf_counter()
    detail = ""
    try:
        ok, detail = body()
    except Exception as exc:
        ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < limit
    print("%s criterion %2d %-28s %7.2fs (limit %ds) %s"
          % ("PASS" if passed else "FAIL", number, title, elapsed, limit, detail))
    assert ok, detail
    assert elapsed < limit, "took %.1fs, limit %ds" % (elapsed, limit)


def pseudo_circle():
    return FinPoset.from_relations(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def test_alexandroff_round_trip():
    def body():
        count = 0
        for n in range(1, 6):
            for P in posets_up_to_iso(n):
                Q = specialization_poset(alexandroff(P))
                if P.isomorphism(Q) is None:
                    return False, "mismatch on %r" % (P,)
                count += 1
        return count == 87, "%d posets" % count
    report(1, "alexandroff round trip", 5, body)


def test_decollage_round_trip():
    def body():
        corpus = full_corpus()
        bad = [name for name, L in corpus if layered_equivalence(reassemble(nerve(L)), L) is None]
        return len(corpus) >= 30 and not bad, "%d items, failures %s" % (len(corpus), bad)
    report(2, "decollage round trip", 60, body)


def test_recollement_bijection():
    def body():
        items = [(name, L) for name, L in full_corpus() if L.base.height() <= 1]
        checks = 0
        for name, L in items:
            functors = enumerate_set_functors(L.cat, 2)
            sheaves = (len(functors), len(iso_class_representatives(functors)))
            for Z in L.base.sieves():
                if not 0 < len(Z) < len(L.base):
                    continue
                if recollement_sweep(L, Z, functors):
                    return False, "round trip failed on %s along %s" % (name, sorted(Z))
                c = recollement_counts(L, Z, 2, sheaves=sheaves)
                if c["sheaf_classes"] != c["triple_classes"]:
                    return False, "%s along %s: %r" % (name, sorted(Z), c)
                checks += 1
        return True, "%d items, %d sieves" % (len(items), checks)
    report(3, "recollement bijection", 60, body)


def test_beck_chevalley():
    def body():
        L = build_dvr()
        s = L.base.index("s")
        U, _ = L.cat.full_subcategory([x for x in range(L.cat.n_objects) if L.labels[x] != s])
        functors = enumerate_set_functors(U, 3)
        bad = [F for F in functors if not beck_chevalley_check(L, {s}, F)[0]]
        return not bad and len(functors) == 14, "%d functors, %d failures" % (len(functors), len(bad))
    report(4, "beck-chevalley", 30, body)


def test_exodromy_counting():
    def body():
        X = pseudo_circle()
        ok, a, b = exodromy_check(X, MonotoneMap.to_point(X), 2)
        if not (ok and a == b == 4):
            return False, "pseudo-circle gave %d, %d" % (a, b)
        results = list(exodromy_sweep(5, (1, 2)))
        bad = [(X, s, k, a, b) for X, s, k, ok, a, b in results if not ok]
        return not bad, "%d checks, pseudo-circle 4 = 4, failures %d" % (len(results), len(bad))
    report(5, "exodromy counting", 120, body)


def test_curve_van_kampen():
    def body():
        got = {(g, n): presentation_h1(curve_presentation(g, n)) for g in range(4) for n in (2, 3, 4)}
        bad = {k: v for k, v in got.items() if v != (2 * k[0], [])}
        return not bad, "12 presentations, failures %s" % bad
    report(6, "curve van kampen", 5, body)


def test_curve_hom_counts():
    def body():
        spec = cyclic_curve_spec(1, 2, 5, [1, 0, 0])
        L = build_curve_level(spec)
        Q = spec.group()
        top = curve_point(L, INFINITY)
        got, want = [], []
        for i, gamma in enumerate(spec.gamma_images()):
            got.append(len(L.cat.hom(curve_point(L, i), top)))
            want.append(Q.order() // FinGroup(spec.degree, [gamma]).order())
        return got == want == [5, 5], "Hom counts %s, coset oracle %s" % (got, want)
    report(7, "curve hom counts", 1, body)


def test_fibration_dictionary():
    def body():
        L = LayeredCat.from_poset(FinPoset.chain(1))
        closed, i = stratum_inclusion(L, 0)
        opened, j = stratum_inclusion(L, 1)
        ti, tj = classify_gal_morphism(closed, L, i), classify_gal_morphism(opened, L, j)
        sieve_ok = ti["h0_image"] == "sieve" and ti["right"] and not ti["left"]
        cosieve_ok = tj["h0_image"] == "cosieve" and tj["left"] and not tj["right"]

        G = FinGroup.cyclic(2)
        swap = action_groupoid(2, G.elements)
        # a morphism (k, x) of the action groupoid lies over the k-th group element
        mm = [swap.mor_labels[f][0] for f in range(swap.n_morphisms)]
        kan = classify_fibration(Functor(swap, G.classifying_category(), [0, 0], mm))
        kan_ok = kan["kan"] and kan["fiber_sizes"] == (2,)

        C = L.cat
        pt = point_category()
        proj = classify_fibration(Functor(C, pt, [0] * C.n_objects, [0] * C.n_morphisms))
        none_ok = not proj["right"] and not proj["left"]
        ok = sieve_ok and cosieve_ok and kan_ok and none_ok
        return ok, "sieve %s, cosieve %s, swap %s, projection %s" % (sieve_ok, cosieve_ok, kan_ok, none_ok)
    report(8, "fibration dictionary", 1, body)


def test_homology_oracles():
    def body():
        X = pseudo_circle()
        h1_circle = homology_groups(nerve_complex(LayeredCat.from_poset(X).cat), 1)
        K = nerve_complex(FinGroup.cyclic(2).classifying_category())
        h1, h2 = homology_groups(K, 1), homology_groups(K, 2)
        if h1_circle != (1, []) or h1 != (0, [2]) or h2 != (0, []):
            return False, "oracles gave %r %r %r" % (h1_circle, h1, h2)
        dvr = category_homology(build_dvr().cat)
        if dvr != [(1, []), (0, [2])]:
            return False, "DVR homology %r" % (dvr,)
        bad = [name for name, L in full_corpus() if not van_kampen_check(L)[0]]
        return not bad, "oracles ok, DVR H1 = Z/2, van Kampen failures %s" % bad
    report(9, "homology oracles", 60, body)


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue()


def test_cli_stability(tmp_path):
    def body():
        docs = []
        for name, L in full_corpus()[::9]:
            docs.append(emit_document(L))
        docs.append(emit_document(FinGroup.symmetric(3)))
        docs.append(emit_document(cyclic_curve_spec(1, 2, 5, [1, 0, 0])))
        docs.append(emit_document(curve_presentation(2, 3)))
        for text in docs:
            if emit_document(load_document(text).value, load_document(text).kind) != text:
                return False, "library round trip not byte-stable"
            path = tmp_path / "doc.json"
            path.write_text(text)
            code, out = run_cli(["validate", str(path)])
            if code != 0:
                return False, "validate exited %d" % code

        circle = tmp_path / "circle.json"
        circle.write_text(emit_document(pseudo_circle()))
        bad_poset = tmp_path / "bad.json"
        payload = json.loads(emit_document(FinPoset.chain(1)))
        payload["relations"] = [[0, 1], [1, 0]]
        bad_poset.write_text(json.dumps(payload))
        garbage = tmp_path / "garbage.json"
        garbage.write_text("not json at all")
        dvr = tmp_path / "dvr.json"
        code, text = run_cli(["dvr"])
        dvr.write_text(text)
        big = tmp_path / "big.json"
        big.write_text(emit_document(FinPoset.discrete(7)))

        scenarios = [
            (["validate", str(circle)], 0),
            (["exodromy", str(circle), "--k", "2"], 0),
            (["recollement", str(dvr), "--sieve", "s"], 0),
            (["homology", str(circle)], 0),
            (["dot", str(circle)], 0),
            (["validate", str(bad_poset)], 1),
            (["count-functors", str(big), "--k", "2"], 1),
            (["recollement", str(dvr), "--sieve", "eta"], 1),
            (["validate", str(garbage)], 2),
            (["no-such-command"], 2),
        ]
        got = [run_cli(argv)[0] for argv, _ in scenarios]
        want = [code for _, code in scenarios]
        if got != want:
            return False, "exit codes %s, expected %s" % (got, want)

        code, first = run_cli(["alexandroff", str(circle)])
        again = tmp_path / "space.json"
        again.write_text(first)
        code2, second = run_cli(["specialize", str(again)])
        if code or code2 or second != circle.read_text():
            return False, "alexandroff/specialize round trip not byte-stable"
        return True, "%d documents, %d exit-code scenarios" % (len(docs), len(scenarios))
    report(10, "cli stability", 5, body)
