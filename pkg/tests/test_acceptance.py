"""Acceptance criteria 1-9.  Each test appends one PASS/FAIL line to the
acceptance log (printed at the end of the run) and then asserts it.

Common settings: F_32003, seeds 0-4, support boxes inside [-2,2]^arity,
at most 3 dimensions per degree, exact equality everywhere.
"""
import itertools
from collections import Counter

from polycomplex.bicomplex import (Bicomplex, Dot, Square, ZRight, ZUp, cohomology, decompose,
                                   page_census, rank_census, reassemble, spectral_page,
                                   stable_page_index, total_cohomology)
from polycomplex.core import Field
from polycomplex.sampling import conjugate, random_module
from polycomplex.tricomplex import SUITES, apply_word, fingerprint, functor_G
from polycomplex.tricomplex import functors
from polycomplex.tricomplex.verify import trial_rng
from polycomplex.zigzag import AComplex, build_algebra, projective

F = Field(32003)
SEEDS = range(5)
MAX_DIM = 3


def record(log, n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    log.append(line)
    print(line)
    return ok


def planted(rng):
    """A conjugated sum of random standard summands that fits the box, with its census."""
    while True:
        labels = []
        for _ in range(int(rng.integers(1, 5))):
            kind = int(rng.integers(4))
            i, j = (int(x) for x in rng.integers(-2, 3, size=2))
            if kind == 0:
                labels.append(Dot(i, j))
            elif kind == 1:
                labels.append(Square(i, j))
            else:
                cls = ZRight if kind == 2 else ZUp
                labels.append(cls(i, j, int(rng.integers(1, 5))))
        b = reassemble(labels, F)
        lo, hi = b.space.bounding_box()
        if min(lo) >= -2 and max(hi) <= 2 and max(b.space.dims.values()) <= MAX_DIM:
            return conjugate(b, rng), Counter(labels)


def bicomplexes():
    """100 in total, 20 per seed: half quotients of free modules, half planted sums
    (the quotient family alone almost never produces zigzags longer than 2)."""
    for seed in SEEDS:
        for t in range(20):
            rng = trial_rng(seed, t)
            if t % 2:
                b, census = planted(rng)
            else:
                b = random_module(Bicomplex, F, rng, (-2, -2), (2, 2), max_dim=MAX_DIM,
                                  n_gens=int(rng.integers(3, 9)))
                census = None
            yield b, census


def run_suite(name, **kw):
    checks = []
    for seed in SEEDS:
        checks += SUITES[name](F, seed=seed, max_dim=MAX_DIM, **kw)
    return checks


def summarize(checks):
    bad = [c for c in checks if not c.passed]
    first = f", first failure {bad[0].name} {bad[0].detail}" if bad else ""
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} checks{first}"


def test_criterion_1_decomposition(acceptance_log):
    n = bad = 0
    for b, census in bicomplexes():
        dec = decompose(b)
        n += 1
        if not (dec.verify() and rank_census(dec.reassembled()) == rank_census(b)):
            bad += 1
        elif census is not None and Counter(dec.summands) != census:
            bad += 1
    ok = record(acceptance_log, 1, bad == 0 and n == 100, f"{n - bad}/{n} bicomplexes reassemble exactly")
    assert ok


def test_criterion_2_spectral_pages(acceptance_log):
    n = bad = 0
    for b, _ in bicomplexes():
        n += 1
        h2 = cohomology(b, 2)
        e1_ok = spectral_page(b, 1) == dict(sorted(h2.space.dims.items()))
        e2_ok = spectral_page(b, 2) == dict(sorted(cohomology(h2, 1).space.dims.items()))
        labels = decompose(b).summands
        collapsed = Counter()
        for (i, j), m in page_census(labels, stable_page_index(labels)).items():
            collapsed[i + j] += m
        tot_ok = dict(sorted(collapsed.items())) == total_cohomology(b)
        if not (e1_ok and e2_ok and tot_ok):
            bad += 1
    fixtures = (page_census([ZRight(0, 0, 1)], 1) == {(0, 0): 1, (1, 0): 1}
                and page_census([ZRight(0, 0, 1)], 2) == {}
                and page_census([ZRight(0, 0, 3)], 2) == {(0, 0): 1, (2, -1): 1}
                and page_census([ZRight(0, 0, 3)], 3) == {})
    ok = record(acceptance_log, 2, bad == 0 and fixtures,
                f"{n - bad}/{n} bicomplexes, page fixtures {'ok' if fixtures else 'wrong'}")
    assert ok


def test_criterion_3_U_relations(acceptance_log):
    ok, detail = summarize(run_suite("tl", trials=25))
    assert record(acceptance_log, 3, ok, detail)


def test_criterion_4_invertibility(acceptance_log):
    ok, detail = summarize(run_suite("inverse", trials=25))
    assert record(acceptance_log, 4, ok, detail)


def test_criterion_5_braid_relations(acceptance_log):
    checks = run_suite("braid", trials=10)
    unknown = sum(c.detail.get("outcome") == "unknown" for c in checks)
    ok, detail = summarize(checks)
    assert record(acceptance_log, 5, ok and unknown == 0, f"{detail}, {unknown} unknown")


def test_criterion_6_bridge(acceptance_log):
    checks = []
    for seed in SEEDS:
        checks += SUITES["bridge"](F, seed=seed, trials=10, window=(-4, 4), span=2)
    ok, detail = summarize(checks)
    assert record(acceptance_log, 6, ok, detail)


def test_criterion_7_hom_tables(acceptance_log):
    checks = SUITES["homtable"](F, window=(-2, 2), span=2)
    nonzero = Counter(c.detail["expected"] for c in checks)
    ok, detail = summarize(checks)
    ok = ok and nonzero[1] > 0 and nonzero[0] > 0
    assert record(acceptance_log, 7, ok, f"{detail}, {nonzero[1]} nonzero entries")


def positive_words(max_len=4):
    for n in range(1, max_len + 1):
        yield from itertools.product((0, 1), repeat=n)


def test_criterion_8_faithfulness_probe(acceptance_log):
    alg = build_algebra(F, -4, 4)
    X = functor_G(AComplex.from_module(projective(alg, 0, 0)))
    base = fingerprint(X)
    same = [w for w in positive_words() if fingerprint(apply_word(list(w), X)) == base]
    total = sum(1 for _ in positive_words())
    ok = record(acceptance_log, 8, not same,
                f"{total - len(same)}/{total} words change the fingerprint of G(P_0)"
                + (f", unchanged: {same[:3]}" if same else ""))
    assert ok


def test_criterion_9_mutation(acceptance_log, monkeypatch):
    clean = list(functors.OUT_SIGNS)
    caught = []
    for idx in range(len(clean)):
        signs = list(clean)
        signs[idx] = -signs[idx]
        monkeypatch.setattr(functors, "OUT_SIGNS", signs)
        fails = {}
        for name, trials in (("tl", 25), ("inverse", 25), ("braid", 10)):
            checks = SUITES[name](F, seed=0, trials=trials, max_dim=MAX_DIM)
            fails[name] = sum(not c.passed for c in checks)
        caught.append(sum(fails.values()))
    monkeypatch.setattr(functors, "OUT_SIGNS", clean)
    ok = all(caught)
    assert record(acceptance_log, 9, ok, f"failures per flipped out sign {caught}")
