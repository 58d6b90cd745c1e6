"""Bilingual word dictionaries (MUSE layout: one ``source target`` pair per line)."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .text import normalize

__all__ = ["BilingualLexicon", "LexiconError", "load_lexicon", "lookup", "normalize", "save_lexicon"]

log = logging.getLogger(__name__)


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class BilingualLexicon:
    entries: Mapping[str, frozenset[str]]
    skipped_multiword: int = 0
    skipped_malformed: int = 0
    path: str | None = field(default=None, compare=False)

    @property
    def source_vocab_size(self) -> int:
        return len(self.entries)

    @property
    def pair_count(self) -> int:
        return sum(len(v) for v in self.entries.values())

    @property
    def skipped(self) -> int:
        return self.skipped_multiword + self.skipped_malformed

    def lookup(self, word: str) -> frozenset[str]:
        return self.entries.get(normalize(word), frozenset())

    def __contains__(self, word: str) -> bool:
        return normalize(word) in self.entries

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "BilingualLexicon":
        merged: dict[str, set[str]] = defaultdict(set)
        for src, tgt in pairs:
            s, t = normalize(src), normalize(tgt)
            if s and t:
                merged[s].add(t)
        return cls({k: frozenset(v) for k, v in sorted(merged.items())})

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[str]]) -> "BilingualLexicon":
        return cls.from_pairs((s, t) for s, ts in mapping.items() for t in ts)

    def stats(self) -> dict[str, int]:
        return {
            "source_vocab_size": self.source_vocab_size,
            "pair_count": self.pair_count,
            "skipped_multiword": self.skipped_multiword,
            "skipped_malformed": self.skipped_malformed,
        }


def lookup(lexicon: BilingualLexicon, word: str) -> frozenset[str]:
    """Translations of ``word``; the empty set for out-of-vocabulary words."""
    return lexicon.lookup(word)


def load_lexicon(path: str | Path) -> BilingualLexicon:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LexiconError(f"cannot read lexicon {path}: {e}") from e

    merged: dict[str, set[str]] = defaultdict(set)
    multiword = malformed = 0
    for line in text.splitlines():
        fields = line.split()
        if not fields:
            continue
        if len(fields) > 2:
            multiword += 1
            continue
        if len(fields) < 2:
            malformed += 1
            continue
        s, t = normalize(fields[0]), normalize(fields[1])
        merged[s].add(t)
    if not merged:
        raise LexiconError(f"lexicon {path} has no valid entries")
    if multiword or malformed:
        log.warning("%s: skipped %d multi-word and %d malformed lines", path, multiword, malformed)
    entries = {k: frozenset(v) for k, v in sorted(merged.items())}
    return BilingualLexicon(entries, multiword, malformed, str(path))


def save_lexicon(lexicon: BilingualLexicon, path: str | Path) -> None:
    lines = [f"{s} {t}\n" for s in sorted(lexicon.entries) for t in sorted(lexicon.entries[s])]
    Path(path).write_text("".join(lines), encoding="utf-8")
