"""Random corpora with known ground truth, for tests and experiment scripts."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .corpus import AnnotatedPair, IdiomSpan, make_pair
from .lexicon import BilingualLexicon

__all__ = ["SyntheticBitext", "bijection_bitext", "random_annotated_corpus", "random_word"]


@dataclass
class SyntheticBitext:
    bitext: list[tuple[list[str], list[str]]]
    gold: list[set[tuple[int, int]]]
    dictionary: dict[str, str]


def random_word(rng: random.Random, lo: int = 3, hi: int = 8, alphabet: str = string.ascii_lowercase) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def bijection_bitext(n_sentences: int = 200, vocab: int = 40, min_len: int = 4, max_len: int = 10,
                     noise: float = 0.1, seed: int = 0, shuffle_target: bool = False) -> SyntheticBitext:
    """Target sentences are word-by-word images of the source under a fixed
    bijection; a ``noise`` fraction of target tokens is replaced by junk words
    (those lose their gold link)."""
    rng = random.Random(seed)
    src_words = [f"s{k}" for k in range(vocab)]
    tgt_words = [f"t{k}" for k in range(vocab)]
    rng.shuffle(tgt_words)
    dictionary = dict(zip(src_words, tgt_words))
    junk = [f"n{k}" for k in range(vocab)]
    bitext, gold = [], []
    for _ in range(n_sentences):
        src = rng.sample(src_words, rng.randint(min_len, max_len))
        order = list(range(len(src)))
        if shuffle_target:
            rng.shuffle(order)
        tgt, links = [], set()
        for j, i in enumerate(order):
            if rng.random() < noise:
                tgt.append(rng.choice(junk))
            else:
                tgt.append(dictionary[src[i]])
                links.add((i, j))
        bitext.append((src, tgt))
        gold.append(links)
    return SyntheticBitext(bitext, gold, dictionary)


def random_annotated_corpus(n_pairs: int, n_idioms: int, seed: int = 0, idiom_share: float = 0.5,
                            zipf: float = 1.1) -> list[AnnotatedPair]:
    """Pairs of random words; an ``idiom_share`` of them carry one span whose
    idiom is drawn from a Zipf-like distribution (so frequencies are skewed)."""
    rng = random.Random(seed)
    idioms = [f"idiom {k:04d}" for k in range(n_idioms)]
    weights = [1.0 / (k + 1) ** zipf for k in range(n_idioms)]
    pairs = []
    for k in range(n_pairs):
        words = [random_word(rng) for _ in range(rng.randint(3, 12))]
        source = " ".join(words)
        target = " ".join(random_word(rng) for _ in range(rng.randint(3, 12)))
        spans: tuple[IdiomSpan, ...] = ()
        pair = make_pair(f"p{k:06d}", source, target)
        if rng.random() < idiom_share:
            start = rng.randrange(len(words))
            end = rng.randint(start + 1, len(words))
            idiom = rng.choices(idioms, weights)[0]
            spans = (IdiomSpan.from_tokens(idiom, pair.source_tokens, start, end),)
            pair = make_pair(pair.pair_id, source, target, spans)
        pairs.append(pair)
    return pairs


def random_lexicon_case(rng: random.Random, vocab: int = 30) -> tuple[BilingualLexicon, AnnotatedPair]:
    """A random lexicon plus one annotated pair whose reference mixes literal
    translations and unrelated words."""
    src_vocab = list(dict.fromkeys(random_word(rng) for _ in range(vocab)))
    tgt_vocab = list(dict.fromkeys(random_word(rng, alphabet="abcdefghéèàù") for _ in range(vocab)))
    mapping = {
        s: rng.sample(tgt_vocab, rng.randint(1, 4))
        for s in src_vocab if rng.random() < 0.8
    }
    lexicon = BilingualLexicon.from_mapping(mapping)
    src = [rng.choice(src_vocab) for _ in range(rng.randint(2, 10))]
    ref = [rng.choice(tgt_vocab) for _ in range(rng.randint(1, 10))]
    start = rng.randrange(len(src))
    end = rng.randint(start + 1, len(src))
    pair = make_pair("r", " ".join(src), " ".join(ref))
    span = IdiomSpan.from_tokens("idiom", pair.source_tokens, start, end)
    return lexicon, make_pair("r", pair.source_raw, pair.target_raw, (span,))
