"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Heavy shared objects (the relator families, tree balls) are session
fixtures.  Two of the stated expectations are mathematically impossible
and their tests fail by design, with the reasoning inline: the k=3 spread
generating set admits the length-6 relation [x1, x3^-1 x2] for every n,
and the root-to-sphere threshold estimate increases with the ball radius
(deeper spheres are harder to reach), so it cannot decrease.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from freelike.cayley import build_ball, cheeger_upper_bound, sub_ball_family
from freelike.cert import (
    GeneratingSet,
    almost_identity_for_girth_bound,
    free_subgroup_scan,
    girth_scan,
    girth_witness_mod_n,
    high_girth_generators,
)
from freelike.cli import main
from freelike.finitegrp import (
    is_identity,
    quaternion_group,
    symmetric_3,
    verify_almost_identity,
)
from freelike.oracle import GroupOracle
from freelike.percolation import (
    PercGraph,
    clusters,
    compare_quotient_vs_tree,
    crossing_probability,
    exact_crossing_small,
    from_ball,
    pc_reference,
    sample_open_edges,
    threshold_estimate,
    wilson_sigma,
)
from freelike.smallcancel import (
    Presentation,
    dehn_trivial,
    independent_relators,
    ladder_relators,
    scan_short_words,
)
from freelike.words import Word, enumerate_words, exp_sum, parse_word, substitute

SIXTH = Fraction(1, 6)
SEED = 7


def record(number: int, label: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:02d} {label}: {status}{suffix}")
    return ok


@pytest.fixture(scope="session")
def family123():
    return Presentation(2, ladder_relators({1, 2, 3})).verify_c_prime(SIXTH)


@pytest.fixture(scope="session")
def family1():
    return Presentation(2, ladder_relators({1})).verify_c_prime(SIXTH)


@pytest.fixture(scope="session")
def free_pair():
    return GeneratingSet((Word([1], 2), Word([2], 2)), label="free basis")


@pytest.fixture(scope="session")
def tree_thresholds(free_pair):
    """Radius-indexed threshold estimates on 4-regular tree balls (seed 7)."""
    oracle = GroupOracle.free(2)
    out = {}
    for radius in (6, 8, 10):
        ball = build_ball(oracle, free_pair, radius)
        out[radius] = threshold_estimate(
            from_ball(ball), 2000, target=0.5, seed=SEED, workers=4
        )
    return out


@pytest.fixture(scope="session")
def runner():
    return CliRunner()


# -- 1: small-cancellation conditions ------------------------------------------


def test_criterion_01_family_conditions(runner, tmp_path_factory):
    tmp = tmp_path_factory.mktemp("fam")
    path = tmp / "family.txt"
    t0 = time.monotonic()
    res = runner.invoke(
        main,
        ["family-gen", "--j", "1", "--j", "2", "--j", "3", "--out", str(path)],
    )
    assert res.exit_code == 0
    res = runner.invoke(main, ["check-sc", "--file", str(path), "--lambda", "1/6"])
    elapsed = time.monotonic() - t0
    payload = json.loads(res.output)
    flags = payload["result"]
    all_true = res.exit_code == 0 and all(
        flags[key]
        for key in (
            "closed_under_shifts", "c_prime_ok", "forbidden_prefix_ok",
            "min_length_ok", "positive_ok",
        )
    )
    mutated = tmp / "mutated.txt"
    lines = path.read_text().rstrip("\n").splitlines()
    lines[1] += "a"  # append a single letter to one relator
    mutated.write_text("\n".join(lines) + "\n")
    res2 = runner.invoke(main, ["check-sc", "--file", str(mutated)])
    flags2 = json.loads(res2.output)["result"]
    flipped = res2.exit_code == 1 and not (
        flags2["forbidden_prefix_ok"] and flags2["c_prime_ok"]
    )
    ok = all_true and elapsed < 60 and flipped
    assert record(1, "C'(1/6) and girth-family conditions", ok, f"{elapsed:.1f}s")


# -- 2: Dehn soundness/completeness --------------------------------------------


def test_criterion_02_dehn_desk_scale(family1):
    t0 = time.monotonic()
    rng = random.Random(SEED)
    symmetrized = sorted(family1.symmetrized, key=lambda w: w.data)

    for _ in range(200):
        w = Word((), 2)
        for _ in range(rng.randint(1, 3)):
            relator = rng.choice(symmetrized)
            g = Word([rng.choice([1, -1]) * rng.randint(1, 2) for _ in range(3)], 2)
            w = w * relator.conjugate(g)
        assert dehn_trivial(w, family1)

    scan = scan_short_words(family1, 20, workers=4)
    assert scan.words_scanned == sum(4 * 3 ** (i - 1) for i in range(1, 21))
    assert not scan.trivial_words

    for _ in range(200):
        w = Word(
            [rng.choice([1, -1]) * rng.randint(1, 2) for _ in range(rng.randint(1, 1000))],
            2,
        )
        if w:
            assert not dehn_trivial(w, family1)

    elapsed = time.monotonic() - t0
    assert record(
        2,
        "Dehn soundness (200 relator products) and completeness (exhaustive <= 20)",
        elapsed < 120,
        f"{elapsed:.1f}s, {scan.words_scanned} words scanned",
    )


# -- 3: girth certification ------------------------------------------------------


@pytest.mark.parametrize("k,n", [(2, 6), (2, 10)])
def test_criterion_03_girth_certification(family123, k, n):
    t0 = time.monotonic()
    oracle = GroupOracle.small_cancellation(family123)
    cert = girth_scan(oracle, high_girth_generators(k, n), n)
    elapsed = time.monotonic() - t0
    ok = cert.shortest_relation is None and cert.girth_at_least == n + 1 and elapsed < 600
    assert record(3, f"girth >= {n + 1} for (k={k}, n={n})", ok, f"{elapsed:.1f}s")


def test_criterion_03_girth_certification_k3_unattainable(family123):
    # Stated criterion: no relation for (k, n) = (3, 6).  That cannot hold:
    # x2^-1 x3 = a^-n b^-1 b a^2n = a^n is a power of x1, so the commutator
    # [x1, x3^-1 x2] (length 6) maps to the empty word already in F(a, b),
    # for every n.  The scan is correct to report it; this test keeps the
    # criterion as stated and fails.
    oracle = GroupOracle.small_cancellation(family123)
    cert = girth_scan(oracle, high_girth_generators(3, 6), 6)
    if cert.shortest_relation is not None:
        u, length = cert.shortest_relation
        witness = substitute(u, high_girth_generators(3, 6).words)
        assert not witness  # the scanner is right: a genuine free relation
        record(
            3,
            "girth >= 7 for (k=3, n=6)",
            False,
            f"relation {u} of length {length} exists for every n",
        )
    assert cert.shortest_relation is None, (
        "[x1, x3^-1 x2] is a free-group relation of length 6 among "
        "{a, ba^n, ba^2n}, so girth(spread(3, n)) <= 6 for every n; "
        "the stated expectation is unattainable"
    )


# -- 4: free-subgroup bounded certificate ---------------------------------------


@pytest.mark.parametrize("n", [6, 10])
def test_criterion_04_free_subgroup(family123, n):
    oracle = GroupOracle.small_cancellation(family123)
    pair = (parse_word("a^4", rank=2), parse_word(f"ba^{n}"))
    cert = free_subgroup_scan(oracle, pair, 8)
    ok = cert.shortest_relation is None
    assert record(4, f"no relation of length <= 8 in <a^4, ba^{n}>", ok)


# -- 5: relator independence -----------------------------------------------------


def test_criterion_05_independence(family123):
    report = independent_relators(family123)
    ok = report.independent and report.orbit_count == 3
    assert record(5, "ladder relators j in {1,2,3} independent", ok)


# -- 6: tree combinatorics -------------------------------------------------------


def test_criterion_06_tree_counts_and_cheeger(free_pair):
    ball = build_ball(GroupOracle.free(2), free_pair, 6)
    counts_ok = ball.vertex_count == 2 * 3**6 - 1 == 1457
    report = cheeger_upper_bound(ball, sub_ball_family(ball))
    by_label = {label: ratio for label, _, _, ratio in report.candidates}
    ratios_ok = all(
        by_label[f"ball<=#{s}"] == Fraction(4 * 3 ** (s - 1), 2 * 3**s - 1)
        for s in range(1, 6)
    )
    best_ok = report.best_ratio == Fraction(324, 485)
    ok = counts_ok and ratios_ok and best_ok
    assert record(6, "tree ball counts and exact sub-ball Cheeger ratios", ok)


# -- 7: percolation calibration --------------------------------------------------


def _calibration_graphs():
    return {
        "single edge": PercGraph(2, [(0, 1)], 0, {1}),
        "parallel pair": PercGraph(2, [(0, 1), (0, 1)], 0, {1}),
        "3-path": PercGraph(4, [(0, 1), (1, 2), (2, 3)], 0, {3}),
        "4-cycle": PercGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 0, {2}),
    }


def test_criterion_07_exact_vs_monte_carlo():
    trials = 10_000
    for name, graph in _calibration_graphs().items():
        for p in (0.25, 0.5, 0.75):
            exact = float(exact_crossing_small(graph, Fraction(p)))
            point = crossing_probability(graph, p, trials, seed=SEED)
            sigma = wilson_sigma(point.crossings, trials)
            assert abs(point.crossings / trials - exact) <= 3 * sigma, (name, p)
    assert record(7, "exact enumeration vs MC within 3 Wilson-sigma", True)


def test_criterion_07_coupled_monotonicity():
    ps = (0.25, 0.5, 0.75)
    for name, graph in _calibration_graphs().items():
        for trial in range(200):
            masks = [sample_open_edges(graph, p, seed=SEED, trial=trial) for p in ps]
            for lo, hi in zip(masks, masks[1:]):
                assert ((hi | lo) == hi).all(), name  # realizations are nested
            labels = [clusters(graph, m) for m in masks]
            hits = [
                any(l[t] == l[graph.root] for t in graph.target) for l in labels
            ]
            assert hits == sorted(hits), name  # crossing indicator monotone
    assert record(7, "coupled-sampling monotonicity on every realization", True)


# -- 8: tree threshold trend -----------------------------------------------------


def test_criterion_08_threshold_bounds(tree_thresholds):
    reference = float(pc_reference(2))
    above = all(est.p_hat >= reference for est in tree_thresholds.values())
    capped = tree_thresholds[10].p_hat <= 0.45
    values = {r: est.p_hat for r, est in sorted(tree_thresholds.items())}
    ok = above and capped
    assert record(8, "thresholds >= 1/3 with p_hat(10) <= 0.45", ok, f"{values}")


def test_criterion_08_decreasing_trend_unattainable(tree_thresholds):
    # Stated criterion: p_hat strictly decreasing in radius.  On a tree,
    # every open path to the radius-r sphere passes the radius-s spheres
    # for s < r, so at fixed p the crossing probability is antitone in the
    # radius and the p solving crossing = 1/2 must RISE (toward the
    # branching-process value ~0.392, not down to 1/3).  This test keeps
    # the criterion as stated and fails.
    values = [tree_thresholds[r].p_hat for r in (6, 8, 10)]
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    record(8, "thresholds strictly decreasing in radius", decreasing, f"{values}")
    assert decreasing, (
        "root-to-sphere crossing at target 1/2 is antitone in radius at "
        f"fixed p, so p_hat strictly increases with radius (measured {values}); "
        "the stated expectation is unattainable"
    )


# -- 9: quotient monotonicity ----------------------------------------------------


def test_criterion_09_quotient_vs_tree(family123):
    report = compare_quotient_vs_tree(
        family123, high_girth_generators(2, 6), 3, 2000, seed=SEED
    )
    identical = report.graphs_identical and report.difference == 0.0

    hexagon = Presentation(2, [parse_word("ababab")]).verify_c_prime(SIXTH)
    toy = compare_quotient_vs_tree(
        hexagon,
        GeneratingSet((Word([1], 2), Word([2], 2))),
        3,
        2000,
        seed=SEED,
    )
    quotient_not_below = (
        not toy.graphs_identical
        and toy.quotient.p_hat >= toy.tree.p_hat - 2 * toy.sigma_combined
    )
    ok = identical and quotient_not_below
    assert record(
        9,
        "identical balls below girth; toy quotient not below tree",
        ok,
        f"toy diff {toy.difference:+.4f}",
    )


# -- 10: almost identities -------------------------------------------------------


def test_criterion_10_almost_identities():
    t0 = time.monotonic()
    q8, s3 = quaternion_group(), symmetric_3()
    w_q8 = parse_word("x1^2x2^2", rank=2)
    w_s3 = parse_word("x1^2x2x1^2X2", rank=2)

    q8_almost = verify_almost_identity(q8, w_q8, 2).holds
    s3_almost = verify_almost_identity(s3, w_s3, 2).holds
    q8_not_identity = not is_identity(q8, w_q8, 2).holds
    s3_not_identity = not is_identity(s3, w_s3, 2).holds

    u = almost_identity_for_girth_bound(2, 2)
    nontrivial = bool(u)
    short_words = list(enumerate_words(2, 2, "all"))
    vanishes = True
    for g in (q8, s3):
        tuples = np.array(list(itertools.product(range(g.order), repeat=2)))
        killed = np.zeros(len(tuples), dtype=bool)
        for w in short_words:
            killed |= g.evaluate_word_batch(w, tuples) == g.identity
        values = g.evaluate_word_batch(u, tuples)
        vanishes &= bool((values[killed] == g.identity).all())

    elapsed = time.monotonic() - t0
    ok = (
        q8_almost and s3_almost and q8_not_identity and s3_not_identity
        and nontrivial and vanishes and elapsed < 5
    )
    assert record(
        10, "Q8/S3 almost identities; constructed word", ok, f"{elapsed:.2f}s, |u|={len(u)}"
    )


# -- 11: mod-n witness -----------------------------------------------------------


def _brute_spans(vectors, n):
    seen = {(0, 0)}
    frontier = {(0, 0)}
    gens = [(x % n, y % n) for x, y in vectors]
    while frontier:
        new = set()
        for a, b in frontier:
            for x, y in gens:
                c = ((a + x) % n, (b + y) % n)
                if c not in seen:
                    seen.add(c)
                    new.add(c)
        frontier = new
    return len(seen) == n * n


def test_criterion_11_mod_n_witness():
    unit = girth_witness_mod_n([parse_word("a", rank=2), parse_word("b", rank=2)], 5)
    first_ok = unit.generating and str(unit.witness) == "a^5"

    zero = girth_witness_mod_n([parse_word("a^5b^5"), parse_word("b^5")], 5)
    zero_ok = not zero.generating

    rng = random.Random(SEED)
    agree = True
    for _ in range(100):
        n = rng.randint(2, 9)
        tup = [
            Word([rng.choice([1, -1]) * rng.randint(1, 2) for _ in range(rng.randint(1, 8))], 2)
            for _ in range(rng.randint(1, 4))
        ]
        result = girth_witness_mod_n(tup, n)
        vectors = [(exp_sum(w, 0), exp_sum(w, 1)) for w in tup]
        agree &= result.generating == _brute_spans(vectors, n)

    ok = first_ok and zero_ok and agree
    assert record(11, "mod-n witness vs independent image computation", ok)


# -- 12: reproducibility ---------------------------------------------------------


def test_criterion_12_reproducible_json(runner, tmp_path_factory, family123):
    tmp = tmp_path_factory.mktemp("repro")
    ball = runner.invoke(main, ["ball", "--free", "--gens", "a, b", "--radius", "6"])
    graph_path = tmp / "tree6.adj"
    graph_path.write_text(ball.output)
    fam_path = tmp / "hexagon.txt"
    fam_path.write_text("rank: 2\nababab\n")

    commands = [
        ["percolate", "--graph", str(graph_path), "--p", "0.36", "--trials", "2000",
         "--seed", str(SEED)],
        ["pc-estimate", "--graph", str(graph_path), "--trials", "1000",
         "--seed", str(SEED)],
        ["pc-compare", "--presentation", str(fam_path), "--gens", "a, b",
         "--radius", "3", "--trials", "1000", "--seed", str(SEED)],
    ]
    ok = True
    for args in commands:
        base = runner.invoke(main, args).output
        again = runner.invoke(main, args).output
        with_workers = runner.invoke(main, args + ["--workers", "3"]).output
        more_workers = runner.invoke(main, args + ["--workers", "8"]).output
        ok &= base == again == with_workers == more_workers
        assert json.loads(base)  # valid JSON
    assert record(12, "byte-identical JSON across reruns and worker counts", ok)
