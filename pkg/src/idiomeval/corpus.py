"""Idiom-annotated parallel corpora: records, I/O, filtering and training splits."""

from __future__ import annotations

import hashlib
import json
import logging
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .text import Token, tokenize

__all__ = [
    "AnnotatedPair",
    "CorpusError",
    "IdiomSpan",
    "SplitManifest",
    "Token",
    "build_split",
    "idiom_frequency_table",
    "load_corpus",
    "load_manifest",
    "make_pair",
    "preprocess_filter",
    "write_corpus",
    "write_manifest",
]

log = logging.getLogger(__name__)

SPLIT_KINDS = ("zero", "joint", "upsample")


class CorpusError(ValueError):
    """Invalid corpus content. ``problems`` holds one message per offending record."""

    def __init__(self, message: str, problems: Sequence[str] = ()):
        super().__init__(message)
        self.problems = list(problems)


@dataclass(frozen=True)
class IdiomSpan:
    idiom_id: str
    token_start: int
    token_end: int
    char_start: int
    char_end: int

    @classmethod
    def from_tokens(cls, idiom_id: str, tokens: Sequence[Token], start: int, end: int) -> "IdiomSpan":
        if not 0 <= start < end <= len(tokens):
            raise CorpusError(f"span [{start},{end}) out of range for {len(tokens)} tokens")
        return cls(idiom_id, start, end, tokens[start].char_start, tokens[end - 1].char_end)

    def overlaps(self, other: "IdiomSpan") -> bool:
        return self.token_start < other.token_end and other.token_start < self.token_end

    def to_dict(self) -> dict:
        return {
            "idiom_id": self.idiom_id,
            "token_start": self.token_start,
            "token_end": self.token_end,
            "char_start": self.char_start,
            "char_end": self.char_end,
        }


@dataclass(frozen=True)
class AnnotatedPair:
    pair_id: str
    source_raw: str
    target_raw: str
    source_tokens: tuple[Token, ...]
    target_tokens: tuple[Token, ...]
    spans: tuple[IdiomSpan, ...] = ()

    @property
    def is_idiom(self) -> bool:
        return bool(self.spans)

    @property
    def idiom_ids(self) -> list[str]:
        return [s.idiom_id for s in self.spans]

    def span_tokens(self, span: IdiomSpan) -> tuple[Token, ...]:
        return self.source_tokens[span.token_start:span.token_end]

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "source": self.source_raw,
            "target": self.target_raw,
            "spans": [s.to_dict() for s in self.spans],
        }


def make_pair(pair_id: str, source: str, target: str, spans: Iterable[IdiomSpan] = ()) -> AnnotatedPair:
    """Tokenize both sides and validate ``spans`` against the source tokens."""
    src_tokens = tuple(tokenize(source))
    pair = AnnotatedPair(pair_id, source, target, src_tokens, tuple(tokenize(target)), tuple(spans))
    _check_spans(pair)
    return pair


def _check_spans(pair: AnnotatedPair) -> None:
    n = len(pair.source_tokens)
    for span in pair.spans:
        if not 0 <= span.token_start < span.token_end <= n:
            raise CorpusError(
                f"{pair.pair_id}: span [{span.token_start},{span.token_end}) out of range "
                f"for {n} source tokens"
            )
        hull = (pair.source_tokens[span.token_start].char_start, pair.source_tokens[span.token_end - 1].char_end)
        if (span.char_start, span.char_end) != hull:
            raise CorpusError(
                f"{pair.pair_id}: span characters [{span.char_start},{span.char_end}) "
                f"do not match token hull [{hull[0]},{hull[1]})"
            )
    ordered = sorted(pair.spans, key=lambda s: s.token_start)
    for a, b in zip(ordered, ordered[1:]):
        if a.overlaps(b):
            raise CorpusError(f"{pair.pair_id}: overlapping spans {a.idiom_id!r} and {b.idiom_id!r}")


def _parse_record(line: str, idioms: set[str] | None) -> AnnotatedPair:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as e:
        raise CorpusError(f"invalid JSON: {e.msg}") from None
    if not isinstance(rec, dict):
        raise CorpusError("record is not an object")
    for key in ("pair_id", "source", "target"):
        if not isinstance(rec.get(key), str):
            raise CorpusError(f"missing or non-string field {key!r}")
    src_tokens = tuple(tokenize(rec["source"]))
    spans = []
    for raw in rec.get("spans") or []:
        try:
            idiom_id, start, end = raw["idiom_id"], int(raw["token_start"]), int(raw["token_end"])
        except (KeyError, TypeError, ValueError):
            raise CorpusError(f"{rec['pair_id']}: malformed span {raw!r}") from None
        if idioms is not None and idiom_id not in idioms:
            raise CorpusError(f"{rec['pair_id']}: unknown idiom {idiom_id!r}")
        if not 0 <= start < end <= len(src_tokens):
            raise CorpusError(
                f"{rec['pair_id']}: span [{start},{end}) out of range for {len(src_tokens)} source tokens"
            )
        cs, ce = raw.get("char_start"), raw.get("char_end")
        if cs is None or ce is None:
            spans.append(IdiomSpan.from_tokens(idiom_id, src_tokens, start, end))
        else:
            spans.append(IdiomSpan(idiom_id, start, end, int(cs), int(ce)))
    pair = AnnotatedPair(rec["pair_id"], rec["source"], rec["target"], src_tokens,
                         tuple(tokenize(rec["target"])), tuple(spans))
    _check_spans(pair)
    return pair


def load_corpus(path: str | Path, schema_check: bool = True,
                idioms: Iterable[str] | None = None) -> list[AnnotatedPair]:
    """Read a line-delimited JSON corpus.

    With ``schema_check`` every bad record is collected and a single
    :class:`CorpusError` lists them by line number; without it bad records are
    logged and skipped. Duplicate ``pair_id`` values are always an error.
    """
    idiom_set = set(idioms) if idioms is not None else None
    pairs: list[AnnotatedPair] = []
    problems: list[str] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                pair = _parse_record(line, idiom_set)
            except CorpusError as e:
                msg = f"line {lineno}: {e}"
                if schema_check:
                    problems.append(msg)
                else:
                    log.warning("skipping %s", msg)
                continue
            if pair.pair_id in seen:
                problems.append(f"line {lineno}: duplicate pair_id {pair.pair_id!r} (first on line {seen[pair.pair_id]})")
                continue
            seen[pair.pair_id] = lineno
            pairs.append(pair)
    if problems:
        raise CorpusError(f"{path}: {len(problems)} invalid record(s)\n" + "\n".join(problems), problems)
    return pairs


def write_corpus(pairs: Iterable[AnnotatedPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair.to_dict(), ensure_ascii=False) + "\n")


def _word_count(text: str) -> int:
    return len(text.split())


def preprocess_filter(pairs: Iterable[AnnotatedPair], max_len: int = 80,
                      max_ratio: float = 1.5) -> tuple[list[AnnotatedPair], list[tuple[AnnotatedPair, str]]]:
    """Drop pairs longer than ``max_len`` words on either side or whose length
    ratio exceeds ``max_ratio``. Both thresholds are strict."""
    kept, dropped = [], []
    for pair in pairs:
        ls, lt = _word_count(pair.source_raw), _word_count(pair.target_raw)
        if ls == 0 or lt == 0:
            dropped.append((pair, "empty"))
        elif ls > max_len or lt > max_len:
            dropped.append((pair, "length"))
        elif max(ls, lt) / min(ls, lt) > max_ratio:
            dropped.append((pair, "ratio"))
        else:
            kept.append(pair)
    return kept, dropped


def idiom_frequency_table(pairs: Iterable[AnnotatedPair]) -> list[tuple[str, int]]:
    """Occurrences per idiom, most frequent first, ties by idiom id."""
    counts = Counter(span.idiom_id for pair in pairs for span in pair.spans)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass
class SplitManifest:
    split_kind: str
    upsample_factor: int
    regular_ids: list[str]
    idiom_train_ids: list[str]
    idiom_test_ids: list[str]
    seed: int
    multi_idiom_ids: list[str] = field(default_factory=list)

    def repeat(self, role: str) -> int:
        if role == "regular":
            return 1
        if role == "idiom-test":
            return 0
        return {"zero": 0, "joint": 1, "upsample": self.upsample_factor}[self.split_kind]

    def rows(self) -> list[tuple[str, str, int]]:
        out = []
        for role, ids in (("regular", self.regular_ids), ("idiom-train", self.idiom_train_ids),
                          ("idiom-test", self.idiom_test_ids)):
            out.extend((pid, role, self.repeat(role)) for pid in ids)
        return out

    def training_listing(self) -> list[str]:
        """Pair ids in the training data, repeated as the split prescribes."""
        return [pid for pid, _, rep in self.rows() for _ in range(rep)]


def _idiom_seed(seed: int, idiom_id: str) -> int:
    digest = hashlib.sha256(f"{seed}\x00{idiom_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def build_split(pairs: Sequence[AnnotatedPair], kind: str, upsample_factor: int = 1,
                seed: int = 0) -> SplitManifest:
    if kind not in SPLIT_KINDS:
        raise ValueError(f"unknown split kind {kind!r}; expected one of {SPLIT_KINDS}")
    if upsample_factor < 1:
        raise ValueError(f"upsample_factor must be >= 1, got {upsample_factor}")
    if kind != "upsample" and upsample_factor != 1:
        log.warning("upsample_factor=%d ignored for %s split", upsample_factor, kind)
        upsample_factor = 1

    regular, groups, multi = [], defaultdict(list), []
    for pair in pairs:
        if not pair.spans:
            regular.append(pair.pair_id)
            continue
        groups[pair.spans[0].idiom_id].append(pair.pair_id)
        if len({s.idiom_id for s in pair.spans}) > 1:
            multi.append(pair.pair_id)

    train, test = [], []
    for idiom_id in sorted(groups):
        ids = groups[idiom_id]
        if len(ids) < 2:
            continue
        # per-idiom generator: adding or removing one idiom leaves the others' split alone
        shuffled = sorted(ids)
        random.Random(_idiom_seed(seed, idiom_id)).shuffle(shuffled)
        half = len(shuffled) // 2
        train.extend(shuffled[:half])
        test.extend(shuffled[half:])
    return SplitManifest(kind, upsample_factor, regular, train, test, seed, multi)


def write_manifest(manifest: SplitManifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pid, role, rep in manifest.rows():
            fh.write(json.dumps({"pair_id": pid, "role": role, "repeat": rep}) + "\n")


def load_manifest(path: str | Path) -> list[tuple[str, str, int]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                rows.append((rec["pair_id"], rec["role"], int(rec["repeat"])))
    return rows
