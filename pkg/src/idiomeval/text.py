"""Tokenization and normalization shared by every module that compares words."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

__all__ = ["Token", "normalize", "tokenize", "APOSTROPHES"]

APOSTROPHES = "'’"

# Letters/digits joined by internal apostrophes form one word (as in UAX #29,
# where an apostrophe between letters does not break a word). Anything else
# that is not whitespace becomes a single-character token.
_WORD_OR_PUNCT = re.compile(r"[^\W_]+(?:['’][^\W_]+)*|\S", re.UNICODE)

_FR_ELISION = re.compile(
    r"^(qu|jusqu|lorsqu|puisqu|quoiqu|[cdjlmnst])(['’])(?=[^\W_])",
    re.IGNORECASE,
)
_EN_CLITIC = re.compile(r"(n['’]t|['’](?:s|re|ve|ll|d|m))$", re.IGNORECASE)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    char_start: int
    char_end: int

    @property
    def is_alpha(self) -> bool:
        return self.surface.isalpha()


def normalize(word: str) -> str:
    """Lowercase and strip diacritics; idempotent.

    >>> normalize("Écorce")
    'ecorce'
    """
    previous = None
    out = word
    # a couple of compatibility characters decompose to uppercase letters,
    # so iterate to a fixed point rather than trusting one pass
    for _ in range(4):
        if out == previous:
            break
        previous = out
        decomposed = unicodedata.normalize("NFKD", out.lower())
        stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
        out = unicodedata.normalize("NFC", stripped.lower())
    return out


def _split_clitics(surface: str, start: int) -> list[tuple[str, int]]:
    if not any(a in surface for a in APOSTROPHES):
        return [(surface, start)]
    pieces: list[tuple[str, int]] = []
    rest, offset = surface, start
    while True:
        m = _FR_ELISION.match(rest)
        if not m:
            break
        cut = m.end()
        pieces.append((rest[:cut], offset))
        rest, offset = rest[cut:], offset + cut
    m = _EN_CLITIC.search(rest)
    if m and m.start() > 0:
        pieces.append((rest[: m.start()], offset))
        pieces.append((rest[m.start():], offset + m.start()))
    else:
        pieces.append((rest, offset))
    return pieces


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into word and punctuation tokens with character offsets.

    Apostrophe clitics are split off: ``John's`` gives ``John`` + ``'s``,
    ``d'arbre`` gives ``d'`` + ``arbre``.
    """
    tokens = []
    for m in _WORD_OR_PUNCT.finditer(text):
        for surface, start in _split_clitics(m.group(), m.start()):
            tokens.append(Token(surface, normalize(surface), start, start + len(surface)))
    return tokens
