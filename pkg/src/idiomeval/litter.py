"""Literal translation error rate (LitTER).

For every annotated idiom span the dictionary translations of each span word
form one blocklist. A blocklist is dropped as a whole when the reference uses
any of its words (the literal rendering is then correct). A hypothesis that
still contains a word of a surviving blocklist is a literal translation error.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .corpus import AnnotatedPair, IdiomSpan
from .lexicon import BilingualLexicon
from .text import Token, tokenize

__all__ = [
    "Blocklist",
    "BlocklistSet",
    "LitterReport",
    "LitterVerdict",
    "build_blocklists",
    "check_hypothesis",
    "filter_by_reference",
    "litter_corpus",
    "macro_average",
]


@dataclass(frozen=True)
class Blocklist:
    source_word: str
    candidates: frozenset[str]
    removed_by_reference: bool = False
    removing_word: str | None = None


@dataclass(frozen=True)
class BlocklistSet:
    pair_id: str
    idiom_id: str
    blocklists: tuple[Blocklist, ...]
    oov_words: tuple[str, ...] = ()

    @property
    def active(self) -> tuple[Blocklist, ...]:
        return tuple(b for b in self.blocklists if not b.removed_by_reference)


@dataclass(frozen=True)
class LitterVerdict:
    pair_id: str
    idiom_id: str
    triggered: bool
    triggering_words: frozenset[tuple[str, str]]
    active_blocklists: int
    oov_words: tuple[str, ...] = ()
    removed: tuple[tuple[str, str], ...] = ()

    @property
    def unscorable(self) -> bool:
        return self.active_blocklists == 0

    @property
    def trigger_tokens(self) -> set[str]:
        return {tok for tok, _ in self.triggering_words}


def build_blocklists(pair: AnnotatedPair, span: IdiomSpan, lexicon: BilingualLexicon) -> BlocklistSet:
    if not 0 <= span.token_start < span.token_end <= len(pair.source_tokens):
        raise ValueError(f"{pair.pair_id}: span [{span.token_start},{span.token_end}) out of range")
    blocklists, oov = [], []
    for tok in pair.span_tokens(span):
        if not tok.is_alpha:
            continue
        candidates = lexicon.lookup(tok.surface)
        if candidates:
            blocklists.append(Blocklist(tok.normalized, candidates))
        else:
            oov.append(tok.normalized)
    return BlocklistSet(pair.pair_id, span.idiom_id, tuple(blocklists), tuple(oov))


def filter_by_reference(blocklists: BlocklistSet, reference_tokens: Sequence[Token]) -> BlocklistSet:
    ref_words = [t.normalized for t in reference_tokens]
    out = []
    for b in blocklists.blocklists:
        if b.removed_by_reference:
            out.append(b)
            continue
        hit = next((w for w in ref_words if w in b.candidates), None)
        out.append(b if hit is None else replace(b, removed_by_reference=True, removing_word=hit))
    return replace(blocklists, blocklists=tuple(out))


def check_hypothesis(filtered: BlocklistSet, hypothesis_tokens: Sequence[Token]) -> LitterVerdict:
    hyp_words = {t.normalized for t in hypothesis_tokens}
    active = filtered.active
    triggers = frozenset(
        (w, b.source_word) for b in active for w in hyp_words & b.candidates
    )
    removed = tuple((b.source_word, b.removing_word or "") for b in filtered.blocklists if b.removed_by_reference)
    return LitterVerdict(filtered.pair_id, filtered.idiom_id, bool(triggers), triggers, len(active),
                         filtered.oov_words, removed)


def score_pair(pair: AnnotatedPair, hypothesis: str | Sequence[Token],
               lexicon: BilingualLexicon) -> LitterVerdict:
    """Verdict for one pair; with several spans the first triggering span decides."""
    hyp_tokens = tokenize(hypothesis) if isinstance(hypothesis, str) else hypothesis
    verdicts = [
        check_hypothesis(filter_by_reference(build_blocklists(pair, span, lexicon), pair.target_tokens), hyp_tokens)
        for span in pair.spans
    ]
    if not verdicts:
        raise ValueError(f"{pair.pair_id} has no idiom span")
    if len(verdicts) == 1:
        return verdicts[0]
    chosen = next((v for v in verdicts if v.triggered), verdicts[0])
    return replace(
        chosen,
        active_blocklists=sum(v.active_blocklists for v in verdicts),
        oov_words=tuple(w for v in verdicts for w in v.oov_words),
        removed=tuple(r for v in verdicts for r in v.removed),
    )


def macro_average(scores_by_idiom: Mapping[str, Sequence[float]]) -> float:
    """Mean over idioms of the mean score of each idiom's pairs."""
    groups = [scores_by_idiom[k] for k in sorted(scores_by_idiom) if scores_by_idiom[k]]
    if not groups:
        return 0.0
    return math.fsum(math.fsum(s) / len(s) for s in groups) / len(groups)


@dataclass
class LitterReport:
    macro: float
    micro: float
    per_idiom: dict[str, tuple[int, float]]
    verdicts: list[LitterVerdict] = field(default_factory=list)
    oov_tokens: int = 0
    idiom_tokens: int = 0

    @property
    def unscorable(self) -> int:
        return sum(v.unscorable for v in self.verdicts)

    @property
    def oov_rate(self) -> float:
        return self.oov_tokens / self.idiom_tokens if self.idiom_tokens else 0.0


def litter_corpus(pairs: Sequence[AnnotatedPair], hypotheses: Mapping[str, str],
                  lexicon: BilingualLexicon) -> LitterReport:
    """Score every annotated pair and macro-average the trigger rate over idioms.

    Sentences with no active blocklist (all idiom words OOV, or every
    blocklist removed by the reference) count as not triggered.
    """
    annotated = [p for p in pairs if p.spans]
    missing = [p.pair_id for p in annotated if p.pair_id not in hypotheses]
    if missing:
        raise KeyError(f"missing hypothesis for {len(missing)} pair(s): {', '.join(missing[:5])}")

    verdicts = []
    by_idiom: dict[str, list[float]] = defaultdict(list)
    oov = total = 0
    for pair in annotated:
        v = score_pair(pair, hypotheses[pair.pair_id], lexicon)
        verdicts.append(v)
        by_idiom[v.idiom_id].append(1.0 if v.triggered else 0.0)
        oov += len(v.oov_words)
        total += sum(t.is_alpha for s in pair.spans for t in pair.span_tokens(s))

    micro = sum(v.triggered for v in verdicts) / len(verdicts) if verdicts else 0.0
    per_idiom = {k: (len(v), sum(v) / len(v)) for k, v in sorted(by_idiom.items())}
    return LitterReport(macro_average(by_idiom), micro, per_idiom, verdicts, oov, total)
