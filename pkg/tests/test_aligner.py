import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from idiomeval.aligner import (
    NULL,
    AlignmentSet,
    align_pair,
    load_table,
    read_pharaoh,
    save_table,
    symmetrize,
    train_diag,
    train_model1,
    write_pharaoh,
)
from idiomeval.synthetic import bijection_bitext

TOY = [("a b".split(), "x y".split()), (["a"], ["x"])]


def dense_model1(bitext, iterations, alpha):
    """Textbook Model 1 EM over the full (source + NULL) x target table."""
    src_vocab = sorted({w for s, _ in bitext for w in s}) + [NULL]
    tgt_vocab = sorted({w for _, t in bitext for w in t})
    t = {(f, e): 1.0 / len(tgt_vocab) for e in src_vocab for f in tgt_vocab}
    for _ in range(iterations):
        count = {k: 0.0 for k in t}
        for src, tgt in bitext:
            sources = [NULL] + list(src)
            for f in tgt:
                z = sum(t[(f, e)] for e in sources)
                for e in sources:
                    count[(f, e)] += t[(f, e)] / z
        for e in src_vocab:
            total = sum(count[(f, e)] for f in tgt_vocab)
            for f in tgt_vocab:
                t[(f, e)] = (count[(f, e)] + alpha) / (total + alpha * len(tgt_vocab))
    return t


def test_toy_translation_probability():
    table = train_model1(TOY, iterations=10)
    assert table.t("x", "a") > 0.9


@pytest.mark.parametrize("alpha", [0.0, 0.01, 0.5])
@pytest.mark.parametrize("iterations", [1, 3, 10])
def test_matches_dense_oracle(alpha, iterations):
    bitext = bijection_bitext(12, vocab=6, min_len=2, max_len=5, seed=4).bitext
    oracle = dense_model1(bitext, iterations, alpha)
    table = train_model1(bitext, iterations, alpha)
    for (f, e), p in oracle.items():
        assert table.t(f, e) == pytest.approx(p, abs=1e-12)


def test_single_pair_one_iteration():
    table = train_model1([(["a"], ["x"])], iterations=1)
    assert table.t("x", "a") == pytest.approx(1.0)


@pytest.mark.parametrize("kwargs", [{"iterations": 0}, {"smoothing_alpha": -1.0}])
def test_model1_errors(kwargs):
    with pytest.raises(ValueError):
        train_model1(TOY, **kwargs)


def test_empty_bitext():
    with pytest.raises(ValueError):
        train_model1([])


def test_diag_negative_lambda():
    with pytest.raises(ValueError):
        train_diag(TOY, lam=-0.5)


def test_rows_normalized():
    table = train_model1(bijection_bitext(50, vocab=20, seed=1).bitext, 5)
    for source in table.src_vocab:
        assert table.row_sum(source) == pytest.approx(1.0, abs=1e-9)
    assert (table.prob >= 0).all() and (table.default >= 0).all()


def test_likelihood_monotone_without_smoothing():
    table = train_model1(bijection_bitext(100, vocab=30, seed=2).bitext, 20, smoothing_alpha=0.0)
    lls = table.log_likelihoods
    assert all(b >= a - 1e-9 for a, b in zip(lls, lls[1:]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.one_of(st.just(0.0), st.floats(1e-4, 1.0)), st.floats(0.0, 8.0))
def test_penalized_objective_monotone(seed, alpha, lam):
    data = bijection_bitext(30, vocab=10, min_len=1, max_len=6, noise=0.3, seed=seed, shuffle_target=True)
    table = train_diag(data.bitext, 8, lam, alpha)
    objs = table.objectives
    assert all(b >= a - 1e-6 for a, b in zip(objs, objs[1:]))


def test_diag_lambda_zero_is_model1():
    bitext = bijection_bitext(40, vocab=12, seed=3, shuffle_target=True).bitext
    m1, d0 = train_model1(bitext, 5), train_diag(bitext, 5, lam=0.0)
    assert abs(m1.prob - d0.prob).max() < 1e-9
    assert abs(m1.default - d0.default).max() < 1e-9


def test_diag_first_posterior_by_hand():
    # uniform t: the first E-step posterior is the prior itself. For a 2x2 pair
    # with tension 4 the weights of x are a: 1, b: e^-2, NULL: (1 + e^-2) / 2.
    table = train_diag([("a b".split(), "x y".split())], iterations=1, lam=4.0, smoothing_alpha=0.0)
    w_diag, w_anti = 1.0, math.exp(-2.0)
    z = w_diag + w_anti + (w_diag + w_anti) / 2
    # after one M-step t(x|a) = posterior(a->x) / (posterior(a->x) + posterior(a->y))
    assert table.t("x", "a") == pytest.approx((w_diag / z) / (w_diag / z + w_anti / z))


def test_diag_prefers_monotone_links():
    bitext = [("a b".split(), "x y".split()), ("b a".split(), "y x".split())]
    m1 = train_model1(bitext, 5)
    assert m1.t("x", "a") == pytest.approx(m1.t("y", "a"))
    diag = train_diag(bitext, 5, lam=4.0)
    assert diag.t("x", "a") > diag.t("y", "a")
    assert align_pair(diag, "a b".split(), "x y".split()).links == {(0, 0), (1, 1)}


def test_align_toy():
    table = train_model1(TOY, iterations=10)
    assert align_pair(table, "a b".split(), "x y".split()).links == {(0, 0), (1, 1)}


def test_align_empty_and_oov():
    table = train_model1(TOY, 5, smoothing_alpha=0.0)
    assert align_pair(table, ["a"], []).links == frozenset()
    assert align_pair(table, ["a", "b"], ["q", "r"]).links == frozenset()


def test_reverse_direction_coordinates():
    rev = train_model1([(t, s) for s, t in TOY], iterations=10)
    aligned = align_pair(rev, "a b".split(), "x y".split(), direction="tgt-src")
    assert aligned.links == {(0, 0), (1, 1)}


def test_symmetrize_set_algebra():
    fwd = AlignmentSet("p", frozenset({(0, 0), (1, 1)}), "src-tgt")
    rev = AlignmentSet("p", frozenset({(0, 0)}), "tgt-src")
    assert symmetrize(fwd, rev, "intersection").links == {(0, 0)}
    assert symmetrize(fwd, rev, "union").links == {(0, 0), (1, 1)}


@pytest.mark.parametrize("heuristic", ["intersection", "union", "grow-diag-final-and"])
def test_symmetrize_identical(heuristic):
    links = frozenset({(0, 1), (2, 0), (1, 2)})
    assert symmetrize(AlignmentSet("p", links), AlignmentSet("p", links), heuristic).links == links


def test_grow_diag_chain():
    # intersection {(0,0)}; (1,1) touches it diagonally and (2,2) touches (1,1)
    fwd = AlignmentSet("p", frozenset({(0, 0), (1, 1)}))
    rev = AlignmentSet("p", frozenset({(0, 0), (2, 2)}))
    assert symmetrize(fwd, rev, "grow-diag").links == {(0, 0), (1, 1), (2, 2)}


def test_grow_diag_final_and_adds_isolated_link():
    # (2,2) is not adjacent to (0,0); only the final-and step can add it,
    # and only because both of its words are unaligned
    fwd = AlignmentSet("p", frozenset({(0, 0)}))
    rev = AlignmentSet("p", frozenset({(0, 0), (2, 2)}))
    assert symmetrize(fwd, rev, "grow-diag").links == {(0, 0)}
    assert symmetrize(fwd, rev, "grow-diag-final-and").links == {(0, 0), (2, 2)}
    rev2 = AlignmentSet("p", frozenset({(0, 0), (0, 2)}))
    assert symmetrize(fwd, rev2, "grow-diag-final-and").links == {(0, 0)}
    assert symmetrize(fwd, rev2, "grow-diag-final").links == {(0, 0), (0, 2)}


def test_symmetrize_pair_mismatch():
    with pytest.raises(ValueError):
        symmetrize(AlignmentSet("a", frozenset()), AlignmentSet("b", frozenset()))


links_strategy = st.frozensets(st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=20)


@given(links_strategy, links_strategy)
def test_symmetrize_inclusion_chain(a, b):
    fwd, rev = AlignmentSet("p", a), AlignmentSet("p", b)
    inter = symmetrize(fwd, rev, "intersection").links
    gdfa = symmetrize(fwd, rev, "grow-diag-final-and").links
    union = symmetrize(fwd, rev, "union").links
    assert inter <= gdfa <= union


def test_pharaoh_round_trip(tmp_path):
    text = "0-0 1-1 2-1\n\n0-2\n"
    path = tmp_path / "a.txt"
    path.write_text(text)
    alignments = read_pharaoh(path, ["a", "b", "c"])
    assert alignments[0].links == {(0, 0), (1, 1), (2, 1)}
    assert alignments[1].links == frozenset()
    write_pharaoh(alignments, tmp_path / "b.txt")
    assert (tmp_path / "b.txt").read_text() == text


def test_pharaoh_errors(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text("0-0 junk\n")
    with pytest.raises(ValueError, match="junk"):
        read_pharaoh(path)
    with pytest.raises(ValueError, match="2 pairs"):
        read_pharaoh(path, ["a", "b"])


def test_table_round_trip(tmp_path):
    table = train_diag(bijection_bitext(30, vocab=10, seed=5).bitext, 3, lam=2.0)
    save_table(table, tmp_path / "t.table")
    again = load_table(tmp_path / "t.table")
    assert again.diagonal_tension == 2.0
    rng = random.Random(0)
    words = list(table.tgt_vocab)
    for source in table.src_vocab:
        for target in rng.sample(words, 5):
            assert again.t(target, source) == table.t(target, source)
        assert again.row_sum(source) == pytest.approx(1.0)


def test_deterministic():
    bitext = bijection_bitext(60, vocab=15, seed=8).bitext
    a, b = train_diag(bitext, 4), train_diag(bitext, 4)
    assert (a.prob == b.prob).all() and a.log_likelihoods == b.log_likelihoods
