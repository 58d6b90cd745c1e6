"""End-to-end run through the CLI on a tiny generated corpus: extract idiom
pairs, split them, then evaluate a copy-with-literal-edits system."""

import argparse
import random
import tempfile
from dataclasses import dataclass
from pathlib import Path

from idiomeval.cli import main as cli
from idiomeval.corpus import load_corpus

IDIOMS = ["kick the bucket", "spill the beans", "break the ice"]
LITERAL = {"kick": "frapper", "bucket": "seau", "spill": "renverser", "beans": "haricots",
           "break": "briser", "ice": "glace", "the": "le"}
TEMPLATES = [
    ("She will {} before the deal closes.", "Elle va {} avant la fin.", {
        "kick the bucket": ("kick the bucket", "mourir", "frapper le seau"),
        "spill the beans": ("spill the beans", "tout révéler", "renverser les haricots"),
        "break the ice": ("break the ice", "détendre l'atmosphère", "briser la glace"),
    }),
]


@dataclass
class DemoConfig:
    pairs: int = 60
    literal_share: float = 0.4
    seed: int = 1
    workdir: Path | None = None


def build_inputs(cfg: DemoConfig, root: Path) -> None:
    rng = random.Random(cfg.seed)
    src, ref, hyp = [], [], []
    template_src, template_tgt, fills = TEMPLATES[0]
    for _ in range(cfg.pairs):
        if rng.random() < 0.3:
            src.append("The weather was mild all week.")
            ref.append("Il a fait doux toute la semaine.")
            hyp.append("Le temps était doux toute la semaine.")
            continue
        en, fr, literal = fills[rng.choice(IDIOMS)]
        src.append(template_src.format(en))
        ref.append(template_tgt.format(fr))
        hyp.append(template_tgt.format(literal if rng.random() < cfg.literal_share else fr))
    (root / "src.txt").write_text("\n".join(src) + "\n", encoding="utf-8")
    (root / "ref.txt").write_text("\n".join(ref) + "\n", encoding="utf-8")
    (root / "idioms.txt").write_text("\n".join(IDIOMS) + "\n", encoding="utf-8")
    (root / "lexicon.txt").write_text("".join(f"{k} {v}\n" for k, v in LITERAL.items()),
                                      encoding="utf-8")
    # hypotheses keyed by line number so they survive the extraction filter
    (root / "hyp.all.txt").write_text("\n".join(hyp) + "\n", encoding="utf-8")


def run(cfg: DemoConfig) -> int:
    with tempfile.TemporaryDirectory() as tmp:
        root = cfg.workdir or Path(tmp)
        root.mkdir(parents=True, exist_ok=True)
        build_inputs(cfg, root)
        steps = [
            ["extract", "--idioms", root / "idioms.txt", "--src", root / "src.txt", "--tgt", root / "ref.txt",
             "--out", root / "corpus.jsonl", "--stats", root / "idiom_stats.tsv", "--keep-regular"],
            ["split", "--corpus", root / "corpus.jsonl", "--kind", "upsample", "--factor", "5",
             "--out", root / "manifest.jsonl"],
        ]
        for step in steps:
            if code := cli([str(a) for a in step]):
                return code
        pairs = load_corpus(root / "corpus.jsonl")
        all_hyps = (root / "hyp.all.txt").read_text(encoding="utf-8").splitlines()
        # pair ids are "L<line>", 1-based
        kept = [all_hyps[int(p.pair_id[1:]) - 1] for p in pairs]
        (root / "hyp.txt").write_text("\n".join(kept) + "\n", encoding="utf-8")
        code = cli([str(a) for a in ["eval", "--corpus", root / "corpus.jsonl", "--hypotheses", root / "hyp.txt",
                                     "--lexicon", root / "lexicon.txt", "--train-aligner",
                                     "--out", root / "report.jsonl"]])
        if code:
            return code
        return cli(["report", "--input", str(root / "report.jsonl")])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=DemoConfig.pairs)
    ap.add_argument("--literal-share", type=float, default=DemoConfig.literal_share)
    ap.add_argument("--seed", type=int, default=DemoConfig.seed)
    ap.add_argument("--workdir", type=Path)
    args = ap.parse_args()
    raise SystemExit(run(DemoConfig(args.pairs, args.literal_share, args.seed, args.workdir)))
