"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (also echoed in the terminal
summary) and then asserts, so a failing criterion still reports its measured
value.
"""

import math
import random
import time

import pytest

from idiomeval.aligner import AlignmentSet, align_pair, symmetrize, train_model1
from idiomeval.apt_eval import apt_corpus, chrf_span, unigram_precision
from idiomeval.cli import main
from idiomeval.corpus import IdiomSpan, build_split, make_pair, write_corpus
from idiomeval.lexicon import BilingualLexicon, save_lexicon
from idiomeval.litter import litter_corpus, score_pair
from idiomeval.matcher import analyze, compile_pattern, find_matches
from idiomeval.synthetic import bijection_bitext, random_annotated_corpus, random_lexicon_case, random_word
from idiomeval.text import tokenize
from idiomeval.worked_examples import (
    DEMO_SENTENCES,
    DEMO_SPANS,
    NEGATIVE_CONTROL,
    WOOL,
    WORKED_EXAMPLES,
    worked_lexicon,
    worked_pairs,
)

from . import oracles
from .conftest import ACCEPTANCE_LINES


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_1_worked_litter_examples():
    t0 = time.perf_counter()
    pairs, lexicon = worked_pairs(), worked_lexicon()
    hyps = {e.pair_id: e.hypothesis for e in WORKED_EXAMPLES}
    result = litter_corpus(pairs, hyps, lexicon)
    elapsed = time.perf_counter() - t0
    got = [(v.pair_id, v.triggered, v.trigger_tokens) for v in result.verdicts]
    want = [(e.pair_id, e.triggered, set(e.trigger_words)) for e in WORKED_EXAMPLES]
    ok = got == want and elapsed < 1.0
    verdicts = "".join("T" if t else "F" for _, t, _ in got)
    report(1, ok, f"verdicts {verdicts}, triggers {[sorted(s) for *_, s in got]}, {elapsed:.3f}s")


def test_2_self_translation_is_zero():
    rng = random.Random(2024)
    nonzero = 0
    for k in range(1000):
        lexicon, pair = random_lexicon_case(rng)
        if score_pair(pair, pair.target_raw, lexicon).triggered:
            nonzero += 1
    report(2, nonzero == 0, f"{nonzero}/1000 self-translations triggered")


def test_3_macro_micro_separation():
    lexicon = BilingualLexicon.from_mapping({"alpha": ["literal"], "beta": ["literal"]})
    pairs, hyps = [], {}
    for k, (idiom, word, hyp) in enumerate([("A", "alpha", "le literal")] * 9 + [("B", "beta", "le sens")]):
        pair = make_pair(f"s{k}", f"the {word} case", "le sens")
        pairs.append(make_pair(pair.pair_id, pair.source_raw, pair.target_raw,
                               (IdiomSpan.from_tokens(idiom, pair.source_tokens, 1, 2),)))
        hyps[pair.pair_id] = hyp
    result = litter_corpus(pairs, hyps, lexicon)
    ok = result.micro == 0.9 and result.macro == 0.5
    report(3, ok, f"micro={result.micro!r} macro={result.macro!r}")


def test_4_matcher_demo():
    pattern = compile_pattern(WOOL)
    found = []
    for sentence in DEMO_SENTENCES:
        tokens = tokenize(sentence)
        matches = find_matches(pattern, analyze(tokens))
        found.append([sentence[m.char_start:m.char_end] for m in matches])
    control = find_matches(pattern, analyze(tokenize(NEGATIVE_CONTROL)))
    ok = found == [[s] for s in DEMO_SPANS] and control == []
    report(4, ok, f"{sum(f == [s] for f, s in zip(found, DEMO_SPANS))}/4 variants matched, "
                  f"negative control matches={len(control)}")


def test_5_aligner_sanity():
    t0 = time.perf_counter()
    data = bijection_bitext(200, noise=0.1, seed=0)
    fwd = train_model1(data.bitext, iterations=5)
    rev = train_model1([(t, s) for s, t in data.bitext], iterations=5)
    hits = total = 0
    for (src, tgt), gold in zip(data.bitext, data.gold):
        a = align_pair(fwd, src, tgt, direction="src-tgt")
        b = align_pair(rev, src, tgt, direction="tgt-src")
        links = symmetrize(a, b, "intersection").links
        hits += len(links & gold)
        total += len(gold)
    recall = hits / total
    steps = [b - a for table in (fwd, rev) for a, b in zip(table.log_likelihoods, table.log_likelihoods[1:])]
    elapsed = time.perf_counter() - t0
    ok = recall >= 0.95 and min(steps) >= -1e-6 and elapsed < 10.0
    report(5, ok, f"intersection recall={recall:.4f}, min LL step={min(steps):.3g}, {elapsed:.2f}s")


def _random_text(rng):
    alphabet = "abcdeé ’'-"
    words = [random_word(rng, 1, 6, alphabet.replace(" ", "")) for _ in range(rng.randint(0, 5))]
    return " ".join(words)


def test_6_chrf_uniprec_oracles():
    rng = random.Random(6)
    worst = 0.0
    for _ in range(500):
        ref, hyp = _random_text(rng), _random_text(rng)
        if not "".join(ref.split()):
            ref = "x" + ref
        worst = max(worst, abs(chrf_span(ref, hyp) - oracles.chrf(hyp, ref)))
        ref_words, hyp_words = ref.split(), hyp.split()
        worst = max(worst, abs(unigram_precision(ref_words, hyp_words) - oracles.unigram_precision(ref_words, hyp_words)))
    report(6, worst <= 1e-12, f"max deviation from oracles {worst:.3g} over 500 pairs")


def test_7_empty_projection_rate():
    pairs, ref_al, hyp_al, hyps = [], {}, {}, {}
    for k in range(45):
        pid = f"e{k:02d}"
        pair = make_pair(pid, "he spilled the beans today", "il a vendu la mèche")
        pairs.append(make_pair(pid, pair.source_raw, pair.target_raw,
                               (IdiomSpan.from_tokens("spill the beans", pair.source_tokens, 1, 4),)))
        links = {(0, 0), (4, 4)} if k == 0 else {(0, 0), (1, 2), (3, 4)}
        ref_al[pid] = AlignmentSet(pid, frozenset(links))
        hyp_al[pid] = AlignmentSet(pid, frozenset({(0, 0), (1, 2), (3, 4)}))
        hyps[pid] = "il a vendu la mèche"
    result = apt_corpus(pairs, ref_al, hyp_al, hyps)
    rate = result.empty_ref_rate
    ok = rate == 1 / 45 and round(100 * rate, 1) == 2.2 and result.empty_hyp_rate == 0.0
    report(7, ok, f"empty reference projections {rate:.4f} ({100 * rate:.1f}%)")


def test_8_split_protocol():
    pairs = random_annotated_corpus(10_000, 2500, seed=8)
    counts = {}
    for p in pairs:
        if p.spans:
            counts[p.spans[0].idiom_id] = counts.get(p.spans[0].idiom_id, 0) + 1
    problems = []
    manifests = {kind: build_split(pairs, kind, 20 if kind == "upsample" else 1, seed=8)
                 for kind in ("zero", "joint", "upsample")}
    m = manifests["joint"]
    by_id = {p.pair_id: p.spans[0].idiom_id for p in pairs if p.spans}
    train, test = {}, {}
    for pid in m.idiom_train_ids:
        train[by_id[pid]] = train.get(by_id[pid], 0) + 1
    for pid in m.idiom_test_ids:
        test[by_id[pid]] = test.get(by_id[pid], 0) + 1
    singletons = {i for i, n in counts.items() if n == 1}
    for idiom, n in counts.items():
        if n == 1:
            if idiom in train or idiom in test:
                problems.append(f"singleton {idiom} present")
        elif (train.get(idiom, 0), test.get(idiom, 0)) != (n // 2, math.ceil(n / 2)):
            problems.append(f"{idiom}: n={n} train={train.get(idiom, 0)} test={test.get(idiom, 0)}")
    regular = [p.pair_id for p in pairs if not p.spans]
    for kind, factor in (("zero", 0), ("joint", 1), ("upsample", 20)):
        listing = manifests[kind].training_listing()
        expected = sorted(regular + [pid for pid in m.idiom_train_ids for _ in range(factor)])
        if sorted(listing) != expected:
            problems.append(f"{kind} listing contract broken")
        if set(listing) & set(m.idiom_test_ids):
            problems.append(f"{kind} listing contains test pairs")
        if manifests[kind].idiom_train_ids != m.idiom_train_ids:
            problems.append(f"{kind} split differs from joint")
    report(8, not problems and singletons,
           f"{len(counts)} idioms ({len(singletons)} singletons), "
           f"{len(m.idiom_train_ids)} train / {len(m.idiom_test_ids)} test; problems={problems[:3]}")


def test_9_eval_determinism(tmp_path):
    pairs = worked_pairs()
    write_corpus(pairs, tmp_path / "corpus.jsonl")
    save_lexicon(worked_lexicon(), tmp_path / "lex.txt")
    (tmp_path / "hyps.txt").write_text("".join(e.hypothesis + "\n" for e in WORKED_EXAMPLES), encoding="utf-8")
    args = ["eval", "--corpus", str(tmp_path / "corpus.jsonl"), "--hypotheses", str(tmp_path / "hyps.txt"),
            "--lexicon", str(tmp_path / "lex.txt"), "--train-aligner"]
    codes = [main(args + ["--out", str(tmp_path / name)]) for name in ("a.jsonl", "b.jsonl")]
    a, b = (tmp_path / "a.jsonl").read_bytes(), (tmp_path / "b.jsonl").read_bytes()
    report(9, codes == [0, 0] and a == b and len(a) > 0, f"exit codes {codes}, {len(a)} bytes, identical={a == b}")
