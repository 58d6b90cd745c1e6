"""Global translation metrics: BLEU and chrF, over the shared tokenizer."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .text import tokenize

__all__ = [
    "BleuStats",
    "bleu_stats",
    "chrf_from_stats",
    "chrf_stats",
    "corpus_bleu",
    "corpus_chrf",
    "sentence_bleu",
]

CHRF_ORDER = 6
CHRF_BETA = 2.0


@dataclass
class BleuStats:
    matches: list[int]
    totals: list[int]
    hyp_len: int
    ref_len: int

    def __add__(self, other: "BleuStats") -> "BleuStats":
        return BleuStats(
            [a + b for a, b in zip(self.matches, other.matches)],
            [a + b for a, b in zip(self.totals, other.totals)],
            self.hyp_len + other.hyp_len,
            self.ref_len + other.ref_len,
        )


def _ngrams(words: Sequence[str], n: int) -> Counter:
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def bleu_stats(hyp: str, ref: str, max_n: int = 4) -> BleuStats:
    h = [t.surface for t in tokenize(hyp)]
    r = [t.surface for t in tokenize(ref)]
    matches, totals = [], []
    for n in range(1, max_n + 1):
        hn, rn = _ngrams(h, n), _ngrams(r, n)
        matches.append(sum((hn & rn).values()))
        totals.append(max(len(h) - n + 1, 0))
    return BleuStats(matches, totals, len(h), len(r))


def _bleu(stats: BleuStats, smooth: bool) -> float:
    if stats.hyp_len == 0:
        return 0.0
    log_p = 0.0
    for n, (m, t) in enumerate(zip(stats.matches, stats.totals), 1):
        if smooth and n > 1:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_p += math.log(m / t)
    log_p /= len(stats.matches)
    bp = 1.0 if stats.hyp_len >= stats.ref_len else math.exp(1 - stats.ref_len / stats.hyp_len)
    return 100.0 * bp * math.exp(log_p)


def corpus_bleu(hyps: Sequence[str], refs: Sequence[str], max_n: int = 4) -> float:
    """BLEU on counts pooled over the corpus, no smoothing, in [0, 100]."""
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses for {len(refs)} references")
    stats = BleuStats([0] * max_n, [0] * max_n, 0, 0)
    for h, r in zip(hyps, refs):
        stats = stats + bleu_stats(h, r, max_n)
    if stats.ref_len == 0:
        raise ValueError("all references are empty")
    return _bleu(stats, smooth=False)


def sentence_bleu(hyp: str, ref: str, max_n: int = 4) -> float:
    """BLEU of one sentence with add-one smoothing of the n >= 2 precisions."""
    stats = bleu_stats(hyp, ref, max_n)
    if stats.ref_len == 0:
        raise ValueError("empty reference")
    return _bleu(stats, smooth=True)


def _char_ngrams(text: str, n: int) -> Counter:
    s = "".join(text.split())
    return Counter(s[i:i + n] for i in range(len(s) - n + 1))


def chrf_stats(hyp: str, ref: str, n_max: int = CHRF_ORDER) -> list[tuple[int, int, int]]:
    """Per order: (matches, hypothesis n-grams, reference n-grams); whitespace is removed first."""
    out = []
    for n in range(1, n_max + 1):
        hn, rn = _char_ngrams(hyp, n), _char_ngrams(ref, n)
        out.append((sum((hn & rn).values()), sum(hn.values()), sum(rn.values())))
    return out


def chrf_from_stats(stats: Sequence[tuple[int, int, int]], beta: float = CHRF_BETA) -> float:
    """chrF in [0, 1]: F-beta of precision and recall averaged over the
    orders that have reference n-grams."""
    precisions, recalls = [], []
    for matches, hyp_total, ref_total in stats:
        if ref_total == 0:
            continue
        precisions.append(matches / hyp_total if hyp_total else 0.0)
        recalls.append(matches / ref_total)
    if not recalls:
        raise ValueError("reference has no character n-grams")
    p = math.fsum(precisions) / len(precisions)
    r = math.fsum(recalls) / len(recalls)
    if p + r == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


def corpus_chrf(hyps: Sequence[str], refs: Sequence[str], n_max: int = CHRF_ORDER,
                beta: float = CHRF_BETA) -> float:
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses for {len(refs)} references")
    pooled = [[0, 0, 0] for _ in range(n_max)]
    for h, r in zip(hyps, refs):
        for acc, s in zip(pooled, chrf_stats(h, r, n_max)):
            for k in range(3):
                acc[k] += s[k]
    return chrf_from_stats([tuple(a) for a in pooled], beta)
