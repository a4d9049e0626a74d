"""Acceptance criteria, one test each.

Each test prints a single ``criterion N: PASS|FAIL`` line.  Run as a script
(``python3 tests/test_acceptance.py``) to print all eight without pytest.
"""
from __future__ import annotations

import contextlib
import io
import sys
import time
from functools import lru_cache
from pathlib import Path
from unittest import mock

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DATA, GOLDEN  # noqa: E402
from scheme_forge import cli  # noqa: E402
from scheme_forge.classify import (  # noqa: E402
    candidate_sets,
    canonical_labeling,
    crosscheck,
    oracle_enumerate,
    theorem1_classify,
)
from scheme_forge.closure import (  # noqa: E402
    closure,
    one_class_scheme,
    quotient_scheme,
    subscheme,
    wreath_decompositions,
    wreath_product,
)
from scheme_forge.digraph import (  # noqa: E402
    arc_union,
    cayley_digraph,
    directed_cycle,
    empty_graph,
    lexicographic_product,
    transpose,
)
from scheme_forge.errors import SchemeForgeError  # noqa: E402
from scheme_forge.generators import corpus, paley_tournament, quadratic_residues, thin_cyclic  # noqa: E402
from scheme_forge.scheme import corrupt_tensor, relabel, relation_profile, verify_identities  # noqa: E402
from scheme_forge.wdrd import attached_scheme, distance_regular_test, same_partition  # noqa: E402

TIME_LIMIT = 60.0


@lru_cache(maxsize=1)
def full_corpus():
    start = time.perf_counter()
    schemes = corpus()
    return schemes, time.perf_counter() - start


def one_pair(s):
    return relation_profile(s).nonsymmetric_pair_count == 1


def applicable(schemes):
    return [s for s in schemes if 2 <= s.d <= 4 and one_pair(s)]


# -- criteria ----------------------------------------------------------------

def crit_corpus_crosscheck():
    start = time.perf_counter()
    schemes, build = full_corpus()
    targets = applicable(schemes)
    failed = [s.name for s in targets if not crosscheck(s).passed]
    elapsed = build + time.perf_counter() - start
    ok = not failed and elapsed < TIME_LIMIT and len(targets) > 0
    return ok, f"{len(targets)} schemes, {len(failed)} disagreements, {elapsed:.1f}s (limit {TIME_LIMIT:.0f}s)"


def crit_pinned():
    z3, z4, p7 = thin_cyclic(3), thin_cyclic(4), paley_tournament(7)
    wr = wreath_product(thin_cyclic(3), one_class_scheme(2))
    problems = []
    # the oracle is consulted before the classifier is trusted
    expected = {"Z3": (z3, [(1,), (2,)]), "Paley7": (p7, [(1,), (2,)]),
                "Z4": (z4, [(1, 3), (2, 3)]), "wreath": (wr, [(1, 3), (2, 3)])}
    for name, (s, want) in expected.items():
        if oracle_enumerate(s) != want:
            problems.append(f"oracle {name}")
        rep = theorem1_classify(s)
        if rep.admissible != want or rep.admissible_original != want:
            problems.append(f"classifier {name}")
    w = theorem1_classify(z4).verdict((1,)).witness
    if w.get("kind") != "p_polynomial":
        problems.append("Z4 witness")
    w = theorem1_classify(wr).verdict((1,)).witness
    if w.get("kind") != "wedge" or w.get("closed_subset") != [0, 1, 2]:
        problems.append("wreath witness")
    return not problems, "4 pinned schemes" if not problems else ", ".join(problems)


def crit_identities():
    schemes, _ = full_corpus()
    bad, lemma_checked, lemma_bad = [], 0, []
    for s in schemes:
        try:
            if not verify_identities(s).passed:
                bad.append(s.name)
        except SchemeForgeError:
            bad.append(s.name)
        if s.d == 2 and one_pair(s):
            lemma_checked += 1
            if s.p[1, 1, 2] != 1 + s.p[1, 2, 1]:
                lemma_bad.append(s.name)
    ok = not bad and not lemma_bad and lemma_checked > 0
    return ok, (f"{len(schemes) - len(bad)}/{len(schemes)} schemes pass; "
                f"p[1][1][2] = 1 + p[1][2][1] on {lemma_checked - len(lemma_bad)}/{lemma_checked} 2-class schemes")


def _distance_regular_digraphs():
    bases = [(f"C{n}", directed_cycle(n)) for n in range(3, 13)]
    bases += [(f"Paley{q}", cayley_digraph(q, quadratic_residues(q))) for q in (7, 11)]
    for name, g in bases:
        for m in (1, 2, 3):
            yield f"lex({name},{m})", lexicographic_product(g, empty_graph(m))
    schemes, _ = full_corpus()
    for s in schemes:
        for i in range(1, s.d + 1):
            if s.star[i] != i:
                yield f"{s.name}:R{i}", arc_union(s, {i})


def crit_dichotomy():
    found, long_ok, failures = 0, 0, []
    for name, g in _distance_regular_digraphs():
        try:
            r = distance_regular_test(g)
        except SchemeForgeError as exc:
            failures.append(f"{name}: {exc}")
            continue
        if r is None:
            if name.startswith("lex("):
                failures.append(f"{name}: not recognised")
            continue
        found += 1
        if r.diameter not in (r.girth - 1, r.girth):
            failures.append(name)
        if r.type == "long":
            outer, inner = r.decomposition
            order = [v for b in r.blocks for v in b]
            rebuilt = lexicographic_product(outer, inner)
            if np.array_equal(rebuilt.arcs, g.arcs[np.ix_(order, order)]):
                long_ok += 1
            else:
                failures.append(f"{name}: reconstruction")
    return not failures, f"{found} distance-regular digraphs, {long_ok} long-type reconstructions, {len(failures)} failures"


def crit_transpose():
    schemes, _ = full_corpus()
    checked, failures = 0, []
    for s in schemes:
        if s.d > 4:
            continue
        for T in candidate_sets(s.d):
            g = arc_union(s, T)
            a, b = attached_scheme(g), attached_scheme(transpose(g))
            checked += 1
            if (a is None) != (b is None):
                failures.append((s.name, T))
                continue
            if a is None:
                continue
            swapped = sorted((y, x) for x, y in a.cell_labels.values())
            if not same_partition(a.scheme.labels, b.scheme.labels.T) or swapped != sorted(b.cell_labels.values()):
                failures.append((s.name, T))
    return not failures, f"{checked} digraphs, {len(failures)} failures"


def crit_constructions():
    schemes, _ = full_corpus()
    built, failures = 0, []
    for s in schemes:
        try:
            for i in range(1, s.d + 1):
                F = closure(s, {i})
                if len(F.indices) == s.d + 1:
                    continue
                for fiber in F.fibers:
                    built += verify_identities(subscheme(s, F, fiber[0])).passed
                built += verify_identities(quotient_scheme(s, F)).passed
            for dec in wreath_decompositions(s):
                built += verify_identities(dec.quotient).passed
        except SchemeForgeError as exc:
            failures.append(f"{s.name}: {exc}")
    factors = [thin_cyclic(3), thin_cyclic(4), paley_tournament(7)] + [one_class_scheme(m) for m in (2, 3, 4)]
    rounds = 0
    for inner in factors:
        for outer in factors:
            w = wreath_product(inner, outer)
            F = closure(w, range(inner.d + 1))
            subs_ok = all(subscheme(w, F, f[0]).same_as(inner) for f in F.fibers)
            if not (verify_identities(w).passed and subs_ok and quotient_scheme(w, F).same_as(outer)):
                failures.append(f"wreath({inner.name},{outer.name})")
            rounds += 1
    return not failures, f"{built} validated subschemes/quotients, {rounds} wreath round trips, {len(failures)} failures"


def crit_higman_lemma35():
    schemes, _ = full_corpus()
    noncomm, d3, bad = [], 0, []
    for s in schemes:
        if s.d <= 4 and not relation_profile(s).commutative:
            noncomm.append(s.name)
        if s.d == 3 and one_pair(s):
            t = relabel(s, canonical_labeling(s))
            d3 += 1
            if t.p[1, 1, t.star[1]] == 0 and t.p[1, 1, 3] == 0:
                bad.append(s.name)
    ok = not noncomm and not bad and d3 > 0
    return ok, f"{len(noncomm)} non-commutative with d<=4; {d3 - len(bad)}/{d3} d=3 schemes satisfy the nonzero condition"


def _cli(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        status = cli.main(list(argv))
    return status, out.getvalue()


def crit_cli():
    problems = []
    compared = 0
    for verb in ("verify", "classify", "crosscheck"):
        for name in ("z3", "z4", "paley7", "wreath-z3-k2"):
            for fmt, ext in (("json", "json"), ("text", "txt")):
                status, out = _cli(verb, str(DATA / f"{name}.json"), "--format", fmt)
                compared += 1
                if status != 0 or out != (GOLDEN / f"{verb}-{name}.{ext}").read_text(encoding="utf-8"):
                    problems.append(f"{verb} {name} {fmt}")
    if _cli("verify", str(DATA / "broken.json"))[0] != 2:
        problems.append("broken input")
    if _cli("verify", str(DATA / "no-such-file.json"))[0] != 2:
        problems.append("missing file")
    if _cli("classify")[0] != 2:
        problems.append("usage error")

    def flipped(s):
        rep = theorem1_classify(s)
        for v in rep.candidates:
            v.admissible = not v.admissible
        return rep

    with mock.patch.object(cli, "crosscheck", lambda s: crosscheck(s, classifier=flipped)):
        if _cli("crosscheck", str(DATA / "z4.json"))[0] != 1:
            problems.append("crosscheck negative control")
    with mock.patch.object(cli, "verify_identities", lambda s: verify_identities(corrupt_tensor(s, 1, 1, 2))):
        if _cli("verify", str(DATA / "z4.json"))[0] != 1:
            problems.append("verify negative control")
    return not problems, f"{compared} golden outputs, exit codes 0/1/2" if not problems else ", ".join(problems)


CRITERIA = [
    (1, "corpus crosscheck", crit_corpus_crosscheck),
    (2, "pinned classifications", crit_pinned),
    (3, "identity suite", crit_identities),
    (4, "distance-regular dichotomy", crit_dichotomy),
    (5, "transpose invariance", crit_transpose),
    (6, "construction closure", crit_constructions),
    (7, "commutativity and nonzero-count checks", crit_higman_lemma35),
    (8, "CLI contract", crit_cli),
]


def line(num, title, ok, detail):
    return f"criterion {num} ({title}): {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, title, check in CRITERIA:
        ok, detail = check()
        results.append(ok)
        print(line(num, title, ok, detail))
    raise SystemExit(0 if all(results) else 1)
