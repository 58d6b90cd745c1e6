"""End-to-end evaluation: LitTER, APT-Eval and global metrics in one report."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .aligner import AlignmentSet, TranslationTable, align_bidirectional, train_diag, train_model1
from .apt_eval import AptReport, apt_corpus
from .corpus import AnnotatedPair
from .lexicon import BilingualLexicon
from .litter import LitterReport, litter_corpus
from .metrics import corpus_bleu, corpus_chrf
from .text import tokenize

__all__ = ["ALL_METRICS", "AlignerConfig", "EvalReport", "align_corpus", "evaluate", "train_aligners"]

log = logging.getLogger(__name__)

ALL_METRICS = ("litter", "apt", "bleu", "chrf")


@dataclass(frozen=True)
class AlignerConfig:
    model: str = "diag"
    iterations: int = 5
    lam: float = 4.0
    alpha: float = 0.01
    heuristic: str = "grow-diag-final-and"


@dataclass
class EvalReport:
    metrics: tuple[str, ...]
    pair_ids: list[str]
    idiom_of: dict[str, list[str]]
    litter: LitterReport | None = None
    apt: AptReport | None = None
    global_scores: dict[str, float] = field(default_factory=dict)


def _words(text: str) -> list[str]:
    return [t.normalized for t in tokenize(text)]


def train_aligners(bitext: Sequence[tuple[Sequence[str], Sequence[str]]],
                   config: AlignerConfig = AlignerConfig()) -> tuple[TranslationTable, TranslationTable]:
    """Forward t(target|source) and reverse t(source|target) tables."""
    reverse = [(t, s) for s, t in bitext]
    if config.model == "model1":
        return (train_model1(bitext, config.iterations, config.alpha),
                train_model1(reverse, config.iterations, config.alpha))
    if config.model == "diag":
        return (train_diag(bitext, config.iterations, config.lam, config.alpha),
                train_diag(reverse, config.iterations, config.lam, config.alpha))
    raise ValueError(f"unknown aligner model {config.model!r}")


def align_corpus(pairs: Sequence[AnnotatedPair], tables: tuple[TranslationTable, TranslationTable],
                 targets: Mapping[str, str] | None = None,
                 heuristic: str = "grow-diag-final-and") -> dict[str, AlignmentSet]:
    """Symmetrized alignments of each source against its reference, or against
    ``targets[pair_id]`` when given."""
    fwd, rev = tables
    out = {}
    for pair in pairs:
        src = [t.normalized for t in pair.source_tokens]
        tgt = _words(targets[pair.pair_id]) if targets is not None else [t.normalized for t in pair.target_tokens]
        out[pair.pair_id] = align_bidirectional(fwd, rev, src, tgt, pair.pair_id, heuristic)
    return out


def in_process_alignments(pairs: Sequence[AnnotatedPair], hypotheses: Mapping[str, str],
                          extra: Iterable[AnnotatedPair] = (), config: AlignerConfig = AlignerConfig()
                          ) -> tuple[dict[str, AlignmentSet], dict[str, AlignmentSet]]:
    """Train on extra pairs + references + hypotheses, then align both sides."""
    bitext = [([t.normalized for t in p.source_tokens], [t.normalized for t in p.target_tokens])
              for p in [*extra, *pairs]]
    bitext += [([t.normalized for t in p.source_tokens], _words(hypotheses[p.pair_id])) for p in pairs]
    tables = train_aligners(bitext, config)
    return (align_corpus(pairs, tables, None, config.heuristic),
            align_corpus(pairs, tables, hypotheses, config.heuristic))


def evaluate(pairs: Sequence[AnnotatedPair], hypotheses: Mapping[str, str], metrics: Iterable[str] = ALL_METRICS,
             lexicon: BilingualLexicon | None = None,
             ref_alignments: Mapping[str, AlignmentSet] | None = None,
             hyp_alignments: Mapping[str, AlignmentSet] | None = None) -> EvalReport:
    metrics = tuple(m for m in ALL_METRICS if m in set(metrics))
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        raise ValueError(f"unknown metrics: {sorted(unknown)}")
    missing = [p.pair_id for p in pairs if p.pair_id not in hypotheses]
    if missing:
        raise ValueError(f"no hypothesis for {len(missing)} pair(s), e.g. {missing[0]}")

    report = EvalReport(metrics, [p.pair_id for p in pairs], {p.pair_id: p.idiom_ids for p in pairs})
    if "litter" in metrics:
        if lexicon is None:
            raise ValueError("litter needs a bilingual lexicon")
        report.litter = litter_corpus(pairs, hypotheses, lexicon)
    if "apt" in metrics:
        if ref_alignments is None or hyp_alignments is None:
            raise ValueError("apt needs reference and hypothesis alignments")
        report.apt = apt_corpus(pairs, ref_alignments, hyp_alignments, hypotheses)
    hyps = [hypotheses[p.pair_id] for p in pairs]
    refs = [p.target_raw for p in pairs]
    if "bleu" in metrics:
        report.global_scores["bleu"] = corpus_bleu(hyps, refs)
    if "chrf" in metrics:
        report.global_scores["chrf"] = corpus_chrf(hyps, refs)
    return report
