"""Rule-based idiom matching over lemmatized tokens.

Each idiom phrase compiles into a contiguous pattern of lemma, exact,
wildcard and optional-possessive elements. A wildcard stands for the
``someone``/``something`` slots of the phrase; the possessive slot after it
optionally absorbs a ``'s`` / ``'`` particle, so that "pull the wool over
someone's eyes" matches "pulling the wool over John's eyes", "... James'
eyes" and "... our eyes" alike.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import AnnotatedPair, CorpusError, IdiomSpan, make_pair
from .text import Token, normalize, tokenize

__all__ = [
    "IdiomPattern",
    "Lemmatizer",
    "MorphAnalysis",
    "PatternElement",
    "analyze",
    "compile_pattern",
    "extract_corpus",
    "find_all",
    "find_matches",
    "line_pair_id",
    "read_idiom_list",
]

log = logging.getLogger(__name__)

LEMMA, EXACT, WILDCARD, OPT_POSSESSIVE = "lemma-match", "exact-match", "wildcard", "optional-possessive"

PLACEHOLDERS = frozenset({"someone", "somebody", "something", "one"})
POSSESSIVE_PLACEHOLDERS = frozenset({"someone's", "somebody's", "one's"})
POSSESSIVE_PARTICLES = frozenset({"'s", "'", "s", "’s", "’"})
PARTICLES = frozenset({"'s", "'", "’s", "’", "n't", "n’t"})
DETERMINERS = frozenset(
    "a an the this that these those my your his her its our their some any no every each".split()
)


@dataclass(frozen=True)
class PatternElement:
    kind: str
    value: str = ""

    def __str__(self) -> str:
        return f"[{self.kind.split('-')[0]}:{self.value}]" if self.value else f"[{self.kind}]"


@dataclass(frozen=True)
class IdiomPattern:
    idiom_id: str
    elements: tuple[PatternElement, ...]

    def __str__(self) -> str:
        return "".join(map(str, self.elements))


class Lemmatizer:
    """Table lookup with suffix-stripping fallback.

    The table is a TAB-separated ``surface lemma [pos]`` file; lines starting
    with ``#`` are comments.
    """

    def __init__(self, table: dict[str, str], pos: dict[str, str] | None = None):
        self.table = table
        self.pos = pos or {}

    @classmethod
    def from_path(cls, path: str | Path) -> "Lemmatizer":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise FileNotFoundError(f"cannot read lemma lexicon {path}: {e}") from e
        return cls._parse(text)

    @classmethod
    def default(cls) -> "Lemmatizer":
        text = resources.files("idiomeval").joinpath("data/lemmas.tsv").read_text(encoding="utf-8")
        return cls._parse(text)

    @classmethod
    def _parse(cls, text: str) -> "Lemmatizer":
        table, pos = {}, {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                continue
            surface = normalize(fields[0].strip())
            table[surface] = normalize(fields[1].strip())
            if len(fields) > 2 and fields[2].strip():
                pos[surface] = fields[2].strip()
        return cls(table, pos)

    def lemma(self, word: str) -> str:
        w = normalize(word)
        if w in self.table:
            return self.table[w]
        return _strip_suffix(w)

    def coarse_pos(self, word: str) -> str:
        w = normalize(word)
        if w in PARTICLES:
            return "PART"
        if w in DETERMINERS:
            return "DET"
        if self.pos.get(w) == "VERB":
            return "VERB"
        if w.isalpha() and len(w) > 4 and (w.endswith("ing") or w.endswith("ed")) and _strip_suffix(w) != w:
            return "VERB"
        return "OTHER"


_VOWELS = set("aeiouy")


def _has_vowel(s: str) -> bool:
    return any(c in _VOWELS for c in s)


def _repair_stem(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS and stem[-1] not in "lsfz":
        return stem[:-1]
    if stem.endswith(("at", "iz", "bl", "v", "c", "u")):
        return stem + "e"
    # short consonant-vowel-consonant stems: hid -> hide, mak -> make
    if (len(stem) == 3 and stem[0] not in _VOWELS and stem[1] in "aeiou"
            and stem[2] not in _VOWELS and stem[2] not in "wxy"):
        return stem + "e"
    return stem


def _strip_suffix(w: str) -> str:
    if not w.isalpha() or len(w) <= 3:
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("ing") and len(w) > 5 and _has_vowel(w[:-3]):
        return _repair_stem(w[:-3])
    if w.endswith("ed") and not w.endswith("eed") and len(w) > 4 and _has_vowel(w[:-2]):
        return _repair_stem(w[:-2])
    if w.endswith(("sses", "shes", "ches", "xes", "zes", "oes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


_DEFAULT: Lemmatizer | None = None


def default_lemmatizer() -> Lemmatizer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Lemmatizer.default()
    return _DEFAULT


@dataclass(frozen=True)
class MorphAnalysis:
    tokens: tuple[Token, ...]
    lemmas: tuple[str, ...]
    pos: tuple[str, ...]


def analyze(tokens: Sequence[Token], lemma_lexicon: str | Path | Lemmatizer | None = None) -> MorphAnalysis:
    if lemma_lexicon is None:
        lem = default_lemmatizer()
    elif isinstance(lemma_lexicon, Lemmatizer):
        lem = lemma_lexicon
    else:
        lem = Lemmatizer.from_path(lemma_lexicon)
    return MorphAnalysis(
        tuple(tokens),
        tuple(lem.lemma(t.surface) for t in tokens),
        tuple(lem.coarse_pos(t.surface) for t in tokens),
    )


def compile_pattern(phrase: str, lemmatizer: Lemmatizer | None = None) -> IdiomPattern:
    """Turn an idiom phrase into a matching pattern.

    >>> str(compile_pattern("pull the wool over someone's eyes"))
    '[lemma:pull][lemma:the][lemma:wool][lemma:over][wildcard][optional-possessive][exact:eyes]'
    """
    words = phrase.split()
    if not words:
        raise ValueError("cannot compile an empty idiom phrase")
    lem = lemmatizer or default_lemmatizer()
    elements: list[PatternElement] = []
    after_possessive = False
    for word in words:
        key = normalize(word).replace("’", "'")
        if key in POSSESSIVE_PLACEHOLDERS or key in PLACEHOLDERS:
            elements += [PatternElement(WILDCARD), PatternElement(OPT_POSSESSIVE)]
            after_possessive = key in POSSESSIVE_PLACEHOLDERS
            continue
        for tok in tokenize(word):
            if after_possessive:
                # the possessed noun keeps its number: "eyes" must not match "eye"
                elements.append(PatternElement(EXACT, tok.normalized))
            else:
                elements.append(PatternElement(LEMMA, lem.lemma(tok.surface)))
        after_possessive = False
    return IdiomPattern(" ".join(words), tuple(elements))


def _element_matches(el: PatternElement, analysis: MorphAnalysis, k: int) -> bool:
    tok = analysis.tokens[k]
    if el.kind == LEMMA:
        return analysis.lemmas[k] == el.value or tok.normalized == el.value
    if el.kind == EXACT:
        return tok.normalized == el.value
    if el.kind == WILDCARD:
        return tok.surface.isalpha()
    raise ValueError(f"unexpected element kind {el.kind}")


def _match_ends(elements: Sequence[PatternElement], analysis: MorphAnalysis, ei: int, k: int) -> list[int]:
    if ei == len(elements):
        return [k]
    el = elements[ei]
    n = len(analysis.tokens)
    if el.kind == OPT_POSSESSIVE:
        ends = []
        if k < n and analysis.tokens[k].normalized in POSSESSIVE_PARTICLES:
            ends += _match_ends(elements, analysis, ei + 1, k + 1)
        return ends + _match_ends(elements, analysis, ei + 1, k)
    if k < n and _element_matches(el, analysis, k):
        return _match_ends(elements, analysis, ei + 1, k + 1)
    return []


def find_matches(pattern: IdiomPattern, analysis: MorphAnalysis,
                 tokens: Sequence[Token] | None = None) -> list[IdiomSpan]:
    """Leftmost-longest, non-overlapping occurrences of ``pattern``."""
    tokens = analysis.tokens if tokens is None else tuple(tokens)
    spans = []
    k = 0
    while k < len(tokens):
        ends = [e for e in _match_ends(pattern.elements, analysis, 0, k) if e > k]
        if ends:
            end = max(ends)
            spans.append(IdiomSpan.from_tokens(pattern.idiom_id, tokens, k, end))
            k = end
        else:
            k += 1
    return spans


def find_all(patterns: Iterable[IdiomPattern], analysis: MorphAnalysis) -> list[IdiomSpan]:
    """Matches of several patterns, resolved to non-overlapping spans.

    Earlier starts win, then longer spans, then idiom id order.
    """
    candidates = [s for p in patterns for s in find_matches(p, analysis)]
    candidates.sort(key=lambda s: (s.token_start, -(s.token_end - s.token_start), s.idiom_id))
    chosen: list[IdiomSpan] = []
    for span in candidates:
        if not any(span.overlaps(c) for c in chosen):
            chosen.append(span)
    return sorted(chosen, key=lambda s: s.token_start)


def read_idiom_list(path: str | Path) -> list[str]:
    phrases = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                phrases.append(" ".join(line.split()))
    return list(dict.fromkeys(phrases))


def line_pair_id(lineno: int, total: int) -> str:
    """Pair id for 1-based line ``lineno`` of a ``total``-line corpus, e.g. ``L007``."""
    return f"L{lineno:0{len(str(total))}d}"


def extract_corpus(idiom_list: str | Path | Sequence[str], source_file: str | Path, target_file: str | Path,
                   lemma_lexicon: str | Path | None = None) -> tuple[list[AnnotatedPair], dict[str, int]]:
    """Scan a line-aligned parallel corpus and keep pairs whose source contains an idiom.

    Returns the annotated pairs in corpus order and per-idiom occurrence counts
    (every idiom of the list appears, with zero when unseen).
    """
    phrases = read_idiom_list(idiom_list) if isinstance(idiom_list, (str, Path)) else list(idiom_list)
    if not phrases:
        raise ValueError("idiom list is empty")
    lem = Lemmatizer.from_path(lemma_lexicon) if lemma_lexicon else default_lemmatizer()
    with open(source_file, encoding="utf-8") as fh:
        sources = fh.read().splitlines()
    with open(target_file, encoding="utf-8") as fh:
        targets = fh.read().splitlines()
    if len(sources) != len(targets):
        raise CorpusError(f"line count mismatch: {len(sources)} source vs {len(targets)} target lines")

    patterns = [compile_pattern(p, lem) for p in phrases]
    counts: Counter[str] = Counter({p.idiom_id: 0 for p in patterns})
    pairs = []
    for lineno, (src, tgt) in enumerate(zip(sources, targets), 1):
        tokens = tokenize(src)
        spans = find_all(patterns, analyze(tokens, lem))
        if not spans:
            continue
        counts.update(s.idiom_id for s in spans)
        pairs.append(make_pair(line_pair_id(lineno, len(sources)), src, tgt, spans))
    log.info("extracted %d idiom pairs from %d lines", len(pairs), len(sources))
    return pairs, dict(counts)
