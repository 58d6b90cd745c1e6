"""Alignment-based phrase translation evaluation (APT-Eval).

The source idiom span is projected through word alignments onto the
reference and onto the hypothesis; the two projected word sequences are
then compared with unigram precision and chrF.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .aligner import AlignmentSet
from .corpus import AnnotatedPair, IdiomSpan
from .litter import macro_average
from .metrics import CHRF_BETA, CHRF_ORDER, chrf_from_stats, chrf_stats
from .text import Token, normalize, tokenize

__all__ = [
    "AptReport",
    "AptScore",
    "SpanProjection",
    "apt_corpus",
    "chrf_span",
    "project_span",
    "unigram_precision",
]


@dataclass(frozen=True)
class SpanProjection:
    pair_id: str
    side: str
    target_indices: tuple[int, ...]
    target_words: tuple[str, ...]

    @property
    def empty(self) -> bool:
        return not self.target_indices


@dataclass(frozen=True)
class AptScore:
    pair_id: str
    idiom_id: str
    uniprec: float | None
    chrf: float | None
    empty_ref: bool
    empty_hyp: bool

    @property
    def scored(self) -> bool:
        return not (self.empty_ref or self.empty_hyp)


def project_span(span: IdiomSpan, alignment: AlignmentSet, target_tokens: Sequence[Token],
                 side: str = "reference", pair_id: str | None = None) -> SpanProjection:
    if pair_id is not None and alignment.pair_id and alignment.pair_id != pair_id:
        raise ValueError(f"alignment for {alignment.pair_id!r} used with pair {pair_id!r}")
    n = len(target_tokens)
    bad = [(i, j) for i, j in alignment.links if not 0 <= j < n]
    if bad:
        raise ValueError(f"{alignment.pair_id}: links {sorted(bad)[:3]} exceed {n} target tokens")
    indices = tuple(sorted({j for i, j in alignment.links if span.token_start <= i < span.token_end}))
    return SpanProjection(pair_id or alignment.pair_id, side, indices,
                          tuple(target_tokens[j].surface for j in indices))


def unigram_precision(ref_words: Sequence[str], hyp_words: Sequence[str]) -> float:
    """Share of distinct reference-span words that occur in the hypothesis span."""
    ref = {normalize(w) for w in ref_words}
    if not ref:
        raise ValueError("empty reference span")
    hyp = {normalize(w) for w in hyp_words}
    return len(ref & hyp) / len(ref)


def chrf_span(ref_text: str, hyp_text: str, n_max: int = CHRF_ORDER, beta: float = CHRF_BETA) -> float:
    if not "".join(ref_text.split()):
        raise ValueError("empty reference text")
    if not "".join(hyp_text.split()):
        return 0.0
    return chrf_from_stats(chrf_stats(hyp_text, ref_text, n_max), beta)


def score_span(pair: AnnotatedPair, span: IdiomSpan, ref_alignment: AlignmentSet,
               hyp_alignment: AlignmentSet, hyp_tokens: Sequence[Token]) -> AptScore:
    ref = project_span(span, ref_alignment, pair.target_tokens, "reference", pair.pair_id)
    hyp = project_span(span, hyp_alignment, hyp_tokens, "hypothesis", pair.pair_id)
    if ref.empty or hyp.empty:
        return AptScore(pair.pair_id, span.idiom_id, None, None, ref.empty, hyp.empty)
    return AptScore(
        pair.pair_id,
        span.idiom_id,
        unigram_precision(ref.target_words, hyp.target_words),
        chrf_span(" ".join(ref.target_words), " ".join(hyp.target_words)),
        False,
        False,
    )


@dataclass
class AptReport:
    macro_uniprec: float
    macro_chrf: float
    micro_uniprec: float
    micro_chrf: float
    empty_ref_rate: float
    empty_hyp_rate: float
    per_idiom: dict[str, dict[str, float]]
    scores: list[AptScore] = field(default_factory=list)


def apt_corpus(pairs: Sequence[AnnotatedPair], ref_alignments: Mapping[str, AlignmentSet],
               hyp_alignments: Mapping[str, AlignmentSet], hypotheses: Mapping[str, str]) -> AptReport:
    """Score every idiom span; empty projections score 0 and are counted.

    Each span is an item grouped under its own idiom for macro-averaging.
    """
    scores = []
    for pair in pairs:
        if not pair.spans:
            continue
        for what, table in (("reference alignment", ref_alignments), ("hypothesis alignment", hyp_alignments),
                            ("hypothesis", hypotheses)):
            if pair.pair_id not in table:
                raise KeyError(f"missing {what} for {pair.pair_id}")
        hyp_tokens = tokenize(hypotheses[pair.pair_id])
        for span in pair.spans:
            scores.append(score_span(pair, span, ref_alignments[pair.pair_id],
                                     hyp_alignments[pair.pair_id], hyp_tokens))

    uni: dict[str, list[float]] = defaultdict(list)
    chrf: dict[str, list[float]] = defaultdict(list)
    for s in scores:
        uni[s.idiom_id].append(s.uniprec or 0.0)
        chrf[s.idiom_id].append(s.chrf or 0.0)
    n = len(scores)

    def micro(groups: Mapping[str, list[float]]) -> float:
        return math.fsum(v for k in sorted(groups) for v in groups[k]) / n if n else 0.0

    per_idiom = {
        k: {"n": len(uni[k]), "uniprec": math.fsum(uni[k]) / len(uni[k]), "chrf": math.fsum(chrf[k]) / len(chrf[k])}
        for k in sorted(uni)
    }
    return AptReport(
        macro_uniprec=macro_average(uni),
        macro_chrf=macro_average(chrf),
        micro_uniprec=micro(uni),
        micro_chrf=micro(chrf),
        empty_ref_rate=sum(s.empty_ref for s in scores) / n if n else 0.0,
        empty_hyp_rate=sum(s.empty_hyp for s in scores) / n if n else 0.0,
        per_idiom=per_idiom,
        scores=scores,
    )
