"""Five en->fr LitTER cases with their dictionary entries.

Three show the metric working (two literal errors caught, one correct
literal translation spared by reference filtering) and two show known
misses: an inflected form absent from the dictionary ("tire") and a
figurative-literal verb ("gelé") that no dictionary entry covers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import AnnotatedPair, IdiomSpan, make_pair
from .lexicon import BilingualLexicon
from .text import normalize

__all__ = [
    "DEMO_SENTENCES",
    "DEMO_SPANS",
    "NEGATIVE_CONTROL",
    "WOOL",
    "WORKED_EXAMPLES",
    "WorkedExample",
    "worked_lexicon",
    "worked_pairs",
]


# matcher demo: four variants of one idiom plus a sentence that must not match
WOOL = "pull the wool over someone's eyes"
DEMO_SENTENCES = [
    "He tried pulling the wool over John's eyes by hiding the profits in separate accounts, "
    "but he was quick to catch onto his scheme.",
    "He tried pulling the wool over James' eyes by hiding the profits in separate accounts, "
    "but he was quick to catch onto his scheme.",
    "He tried pulling the wool over our eyes by hiding the profits in separate accounts, "
    "but we were quick to catch onto his scheme.",
    "Don't try to pull the wool over her eyes. She's too smart.",
]
DEMO_SPANS = [
    "pulling the wool over John's eyes",
    "pulling the wool over James' eyes",
    "pulling the wool over our eyes",
    "pull the wool over her eyes",
]
NEGATIVE_CONTROL = "He tried to pull the cotton over his eyes, but he was quick to catch onto his scheme."


@dataclass(frozen=True)
class WorkedExample:
    pair_id: str
    idiom_id: str
    source: str
    span_text: str
    reference: str
    hypothesis: str
    blocklists: dict[str, tuple[str, ...]]
    triggered: bool
    trigger_words: frozenset[str]


WORKED_EXAMPLES = (
    WorkedExample(
        "bark",
        "bark up the wrong tree",
        "To postpone this vote one more time would be to bark up the wrong tree.",
        "bark up the wrong tree",
        "Postposer ce vote une fois de plus eut été se tromper de cible.",
        "Reporter ce vote une fois de plus, c'est se tromper d'arbre.",
        {
            "bark": ("aboyer", "ecorces", "ecorce"),
            "up": ("debout",),
            "the": ("le", "la", "les"),
            "wrong": ("faux", "tort", "errone", "mal"),
            "tree": ("arbre", "arbres", "sapin", "arborescence"),
        },
        True,
        frozenset({"arbre"}),
    ),
    WorkedExample(
        "bread",
        "bread and butter",
        "For companies, using technology to gather important data, its like bread and butter.",
        "bread and butter",
        "Pour les sociétés, utiliser la technologie pour recueillir des données, c'est la routine.",
        "Pour les entreprises, utiliser la technologie pour collecter des données importantes, "
        "c'est comme du pain et du beurre.",
        {"bread": ("pain",), "and": ("et",), "butter": ("et", "pain", "beurre")},
        True,
        frozenset({"et", "pain", "beurre"}),
    ),
    WorkedExample(
        "eye",
        "eye candy",
        "And here is some eye candy for you, from a range of DIY scientists and artists from all over the globe.",
        "eye candy",
        "Et voici quelques bonbons pour vos yeux, de la part d'un éventail de scientifiques et des artistes "
        "bricoleurs de tous les coins de la planète.",
        "Et voici quelques bonbons pour les yeux, d'une gamme de scientifiques et d'artistes du bricolage "
        "du monde entier.",
        {"eye": ("oculaire", "oeil", "yeux", "œil"), "candy": ("bonbon", "bonbons", "sucrerie")},
        False,
        frozenset(),
    ),
    WorkedExample(
        "punches",
        "pull one's punches",
        "As the example of Cyprus shows, Ankara does not pull its punches.",
        "pull its punches",
        "Comme le montre l'exemple de Chypre, Ankara n'y va pas avec le dos de la cuiller.",
        "Comme le montre l'exemple de Chypre, Ankara ne tire pas les ficelles.",
        {"pull": ("tirez", "tirer"), "its": ("ses", "son", "sa"), "punches": ("coups",)},
        False,
        frozenset(),
    ),
    WorkedExample(
        "ice",
        "put on ice",
        "[..] it was already being put on ice on the grounds that 'We'll never get it though the G20'.",
        "put on ice",
        "[..] elle était mise au rencart au motif que \"nous n'arriverons jamais à convaincre le G20\".",
        "[..] on l'a déjà gelé au motif que \"nous n'y arriverons jamais par le biais du G20\".",
        {"put": ("mis", "mettre"), "on": ("sur",), "ice": ("glace", "ice", "verglas")},
        False,
        frozenset(),
    ),
)


def _span(pair: AnnotatedPair, text: str, idiom_id: str) -> IdiomSpan:
    words = [normalize(w) for w in text.split()]
    toks = [t.normalized for t in pair.source_tokens]
    for start in range(len(toks) - len(words) + 1):
        if toks[start:start + len(words)] == words:
            return IdiomSpan.from_tokens(idiom_id, pair.source_tokens, start, start + len(words))
    raise ValueError(f"{text!r} not found in {pair.source_raw!r}")


def worked_pairs() -> list[AnnotatedPair]:
    out = []
    for ex in WORKED_EXAMPLES:
        pair = make_pair(ex.pair_id, ex.source, ex.reference)
        out.append(make_pair(ex.pair_id, ex.source, ex.reference, (_span(pair, ex.span_text, ex.idiom_id),)))
    return out


def worked_lexicon() -> BilingualLexicon:
    """Dictionary entries copied from the printed blocklists, nothing more."""
    mapping: dict[str, list[str]] = {}
    for ex in WORKED_EXAMPLES:
        for word, cands in ex.blocklists.items():
            mapping.setdefault(word, []).extend(cands)
    return BilingualLexicon.from_mapping(mapping)
