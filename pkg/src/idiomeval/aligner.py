"""Statistical word alignment: IBM Model 1 and a diagonal-prior variant.

Translation probabilities are stored only for word pairs that co-occur in
some sentence pair; every other cell of a source row shares one smoothed
default value, so rows sum to one over the whole target vocabulary without
materializing a dense table.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlignmentSet",
    "NULL",
    "TranslationTable",
    "align_bidirectional",
    "align_pair",
    "load_table",
    "read_pharaoh",
    "save_table",
    "symmetrize",
    "train_diag",
    "train_model1",
    "write_pharaoh",
]

log = logging.getLogger(__name__)

NULL = "<null>"
UNSEEN = "<unseen>"

SRC_TO_TGT, TGT_TO_SRC, SYMMETRIZED = "src-tgt", "tgt-src", "symmetrized"
HEURISTICS = ("intersection", "union", "grow-diag", "grow-diag-final", "grow-diag-final-and")

Bitext = Sequence[tuple[Sequence[str], Sequence[str]]]


@dataclass
class TranslationTable:
    """t(target | source) with a NULL source word at id 0."""

    src_vocab: dict[str, int]
    tgt_vocab: dict[str, int]
    cells: dict[tuple[int, int], int]
    prob: np.ndarray
    default: np.ndarray
    diagonal_tension: float = 0.0
    log_likelihoods: list[float] = field(default_factory=list)
    objectives: list[float] = field(default_factory=list)

    def t(self, target: str, source: str) -> float:
        e = self.src_vocab.get(source)
        f = self.tgt_vocab.get(target)
        if e is None or f is None:
            return 0.0
        c = self.cells.get((e, f))
        return float(self.prob[c]) if c is not None else float(self.default[e])

    def row_sum(self, source: str) -> float:
        e = self.src_vocab[source]
        stored = [c for (ee, _), c in self.cells.items() if ee == e]
        return math.fsum(self.prob[stored]) + (len(self.tgt_vocab) - len(stored)) * float(self.default[e])


def _diag_prior(n: int, m: int, tension: float) -> np.ndarray:
    """(n+1) x m matrix of alignment prior probabilities; row 0 is NULL.

    Real positions are weighted by exp(-tension * |i/n - j/m|) (1-based
    positions); NULL gets the mean real weight, which makes tension 0 the
    uniform Model 1 prior.
    """
    i = np.arange(1, n + 1)[:, None] / n
    j = np.arange(1, m + 1)[None, :] / m
    w = np.exp(-tension * np.abs(i - j))
    w = np.vstack([w.mean(axis=0, keepdims=True), w])
    return w / w.sum(axis=0, keepdims=True)


def _train(bitext: Bitext, iterations: int, alpha: float, tension: float) -> TranslationTable:
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if alpha < 0:
        raise ValueError(f"smoothing alpha must be >= 0, got {alpha}")
    if tension < 0:
        raise ValueError(f"diagonal tension must be >= 0, got {tension}")
    if not bitext:
        raise ValueError("cannot train on an empty bitext")

    src_vocab: dict[str, int] = {NULL: 0}
    tgt_vocab: dict[str, int] = {}
    cells: dict[tuple[int, int], int] = {}
    sentences = []
    for src, tgt in bitext:
        if not tgt:
            continue
        e_ids = [0] + [src_vocab.setdefault(w, len(src_vocab)) for w in src]
        f_ids = [tgt_vocab.setdefault(w, len(tgt_vocab)) for w in tgt]
        idx = np.array([[cells.setdefault((e, f), len(cells)) for f in f_ids] for e in e_ids])
        sentences.append((idx, _diag_prior(len(src), len(tgt), tension) if src else np.ones((1, len(tgt)))))
    if not sentences:
        raise ValueError("bitext has no non-empty target sentences")

    V = len(tgt_vocab)
    cell_row = np.empty(len(cells), dtype=np.int64)
    for (e, _), c in cells.items():
        cell_row[c] = e
    prob = np.full(len(cells), 1.0 / V)
    default = np.full(len(src_vocab), 1.0 / V)

    def e_step(prob: np.ndarray) -> tuple[np.ndarray, float]:
        counts = np.zeros(len(cells))
        ll = 0.0
        for idx, prior in sentences:
            joint = prob[idx] * prior
            marginal = joint.sum(axis=0)
            ll += float(np.log(marginal).sum())
            np.add.at(counts, idx, joint / marginal)
        return counts, ll

    def objective(ll: float, prob: np.ndarray, default: np.ndarray) -> float:
        # log-likelihood plus the Dirichlet log-prior that add-alpha smoothing maximizes
        if alpha == 0:
            return ll
        stored = np.bincount(cell_row, weights=np.log(prob), minlength=len(src_vocab))
        unstored = V - np.bincount(cell_row, minlength=len(src_vocab))
        with np.errstate(divide="ignore"):
            rest = np.where(unstored > 0, unstored * np.log(np.where(unstored > 0, default, 1.0)), 0.0)
        return ll + alpha * float((stored + rest).sum())

    lls, objs = [], []
    for it in range(iterations):
        counts, ll = e_step(prob)
        lls.append(ll)
        objs.append(objective(ll, prob, default))
        totals = np.bincount(cell_row, weights=counts, minlength=len(src_vocab))
        denom = totals + alpha * V
        prob = (counts + alpha) / denom[cell_row]
        default = alpha / denom
        log.debug("iteration %d: log-likelihood %.6f", it + 1, ll)
    _, ll = e_step(prob)
    lls.append(ll)
    objs.append(objective(ll, prob, default))
    return TranslationTable(src_vocab, tgt_vocab, cells, prob, default, tension, lls, objs)


def train_model1(bitext: Bitext, iterations: int = 5, smoothing_alpha: float = 0.01) -> TranslationTable:
    """IBM Model 1 EM from a uniform start.

    ``log_likelihoods[k]`` is the corpus log-likelihood after ``k`` iterations
    (index 0 is the uniform initialization).
    """
    return _train(bitext, iterations, smoothing_alpha, 0.0)


def train_diag(bitext: Bitext, iterations: int = 5, lam: float = 4.0,
               smoothing_alpha: float = 0.01) -> TranslationTable:
    """Model 1 with a fixed diagonal alignment prior of tension ``lam``."""
    return _train(bitext, iterations, smoothing_alpha, lam)


@dataclass(frozen=True)
class AlignmentSet:
    """Links as (source index, target index), whatever the direction."""

    pair_id: str
    links: frozenset[tuple[int, int]]
    direction: str = SRC_TO_TGT

    def to_pharaoh(self) -> str:
        return " ".join(f"{i}-{j}" for i, j in sorted(self.links))


def _viterbi(table: TranslationTable, src: Sequence[str], tgt: Sequence[str]) -> set[tuple[int, int]]:
    if not src or not tgt:
        return set()
    prior = _diag_prior(len(src), len(tgt), table.diagonal_tension)
    links = set()
    for j, f in enumerate(tgt):
        scores = prior[:, j] * np.array([table.t(f, NULL)] + [table.t(f, e) for e in src])
        best = int(np.argmax(scores[1:]))  # first maximum: ties go to the smaller index
        if scores[best + 1] > 0 and scores[best + 1] >= scores[0]:
            links.add((best, j))
    return links


def align_pair(table: TranslationTable, source_tokens: Sequence[str], target_tokens: Sequence[str],
               pair_id: str = "", direction: str = SRC_TO_TGT) -> AlignmentSet:
    """Viterbi alignment of each target word to at most one source word.

    With ``direction=TGT_TO_SRC`` the table is read as t(source | target) and
    the returned links are still (source index, target index).
    """
    if direction == TGT_TO_SRC:
        links = {(i, j) for j, i in _viterbi(table, target_tokens, source_tokens)}
    else:
        links = _viterbi(table, source_tokens, target_tokens)
    return AlignmentSet(pair_id, frozenset(links), direction)


_NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def symmetrize(fwd: AlignmentSet, rev: AlignmentSet, heuristic: str = "grow-diag-final-and") -> AlignmentSet:
    if fwd.pair_id != rev.pair_id:
        raise ValueError(f"alignment pair mismatch: {fwd.pair_id!r} vs {rev.pair_id!r}")
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}; expected one of {HEURISTICS}")
    inter, union = fwd.links & rev.links, fwd.links | rev.links
    if heuristic == "intersection":
        return AlignmentSet(fwd.pair_id, inter, SYMMETRIZED)
    if heuristic == "union":
        return AlignmentSet(fwd.pair_id, union, SYMMETRIZED)

    current = set(inter)
    src_aligned = {i for i, _ in current}
    tgt_aligned = {j for _, j in current}

    def add(link: tuple[int, int]) -> None:
        current.add(link)
        src_aligned.add(link[0])
        tgt_aligned.add(link[1])

    grew = True
    while grew:
        grew = False
        for i, j in sorted(current):
            for di, dj in _NEIGHBORS:
                cand = (i + di, j + dj)
                if cand in union and cand not in current and (
                        cand[0] not in src_aligned or cand[1] not in tgt_aligned):
                    add(cand)
                    grew = True

    if heuristic.startswith("grow-diag-final"):
        both = heuristic.endswith("-and")
        for direction in (fwd.links, rev.links):
            for i, j in sorted(direction):
                if (i, j) in current:
                    continue
                unaligned = (i not in src_aligned and j not in tgt_aligned) if both else (
                    i not in src_aligned or j not in tgt_aligned)
                if unaligned:
                    add((i, j))
    return AlignmentSet(fwd.pair_id, frozenset(current), SYMMETRIZED)


def align_bidirectional(fwd_table: TranslationTable, rev_table: TranslationTable, source_tokens: Sequence[str],
                        target_tokens: Sequence[str], pair_id: str = "",
                        heuristic: str = "grow-diag-final-and") -> AlignmentSet:
    fwd = align_pair(fwd_table, source_tokens, target_tokens, pair_id, SRC_TO_TGT)
    rev = align_pair(rev_table, source_tokens, target_tokens, pair_id, TGT_TO_SRC)
    return symmetrize(fwd, rev, heuristic)


def parse_pharaoh_line(line: str) -> frozenset[tuple[int, int]]:
    links = set()
    for item in line.split():
        i, sep, j = item.partition("-")
        if not sep:
            raise ValueError(f"malformed alignment link {item!r}")
        links.add((int(i), int(j)))
    return frozenset(links)


def read_pharaoh(path: str | Path, pair_ids: Sequence[str] | None = None,
                 direction: str = SYMMETRIZED) -> list[AlignmentSet]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if pair_ids is not None and len(pair_ids) != len(lines):
        raise ValueError(f"{path}: {len(lines)} alignment lines for {len(pair_ids)} pairs")
    ids = pair_ids if pair_ids is not None else [str(k) for k in range(len(lines))]
    out = []
    for lineno, (pid, line) in enumerate(zip(ids, lines), 1):
        try:
            out.append(AlignmentSet(pid, parse_pharaoh_line(line), direction))
        except ValueError as e:
            raise ValueError(f"{path}:{lineno}: {e}") from None
    return out


def write_pharaoh(alignments: Iterable[AlignmentSet], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in alignments:
            fh.write(a.to_pharaoh() + "\n")


def save_table(table: TranslationTable, path: str | Path) -> None:
    id2src = {v: k for k, v in table.src_vocab.items()}
    id2tgt = {v: k for k, v in table.tgt_vocab.items()}
    rows = [f"# target_vocab_size={len(table.tgt_vocab)} diagonal_tension={table.diagonal_tension!r}"]
    for (e, f), c in sorted(table.cells.items()):
        rows.append(f"{id2src[e]} {id2tgt[f]} {float(table.prob[c])!r}")
    for e in sorted(id2src):
        rows.append(f"{id2src[e]} {UNSEEN} {float(table.default[e])!r}")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def load_table(path: str | Path) -> TranslationTable:
    meta: dict[str, str] = {}
    src_vocab: dict[str, int] = {NULL: 0}
    tgt_vocab: dict[str, int] = {}
    cells: dict[tuple[int, int], int] = {}
    probs: list[float] = []
    defaults: dict[int, float] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                meta.update(kv.split("=", 1) for kv in line[1:].split())
                continue
            if not line.strip():
                continue
            s, t, p = line.split()
            e = src_vocab.setdefault(s, len(src_vocab))
            if t == UNSEEN:
                defaults[e] = float(p)
                continue
            f = tgt_vocab.setdefault(t, len(tgt_vocab))
            cells[(e, f)] = len(probs)
            probs.append(float(p))
    size = int(meta.get("target_vocab_size", len(tgt_vocab)))
    # target words that only ever received the default are not listed
    for k in range(len(tgt_vocab), size):
        tgt_vocab[f"{UNSEEN}{k}"] = k
    default = np.array([defaults.get(e, 0.0) for e in range(len(src_vocab))])
    return TranslationTable(src_vocab, tgt_vocab, cells, np.array(probs), default,
                            float(meta.get("diagonal_tension", 0.0)))
