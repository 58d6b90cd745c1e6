"""``idiomeval`` command line: extract -> split -> train-align -> align -> eval -> report.

Exit codes: 0 success, 2 usage or input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import CORPUS_FORMAT_VERSION, REPORT_FORMAT_VERSION, __version__
from .aligner import HEURISTICS, load_table, read_pharaoh, save_table, write_pharaoh
from .config import RunConfig, read_config_file
from .corpus import (build_split, idiom_frequency_table, load_corpus, make_pair, preprocess_filter,
                     write_corpus, write_manifest)
from .lexicon import LexiconError, load_lexicon
from .matcher import extract_corpus, line_pair_id
from .metrics import corpus_bleu, corpus_chrf
from .pipeline import ALL_METRICS, AlignerConfig, align_corpus, evaluate, in_process_alignments, train_aligners
from .report import read_report, render_table, render_tsv, write_report

log = logging.getLogger("idiomeval")


class InputError(Exception):
    pass


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def read_hypotheses(path: str, pair_ids: Sequence[str]) -> dict[str, str]:
    """Plain lines in corpus order, or JSON lines ``{"pair_id": ..., "text": ...}``."""
    lines = _read_lines(path)
    keyed = {}
    for line in lines:
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            keyed = None
            break
        if not (isinstance(rec, dict) and "pair_id" in rec and "text" in rec):
            keyed = None
            break
        keyed[rec["pair_id"]] = rec["text"]
    if keyed is not None and lines:
        return keyed
    if len(lines) != len(pair_ids):
        raise InputError(f"{path}: {len(lines)} hypotheses for {len(pair_ids)} corpus pairs")
    return dict(zip(pair_ids, lines))


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8") if path else None


def cmd_extract(args) -> int:
    cfg = RunConfig("extract", {"idioms": args.idioms, "src": args.src, "tgt": args.tgt},
                    max_len=args.max_len, max_ratio=args.max_ratio)
    cfg.validate()
    if not any(l.strip() and not l.lstrip().startswith("#") for l in _read_lines(args.idioms)):
        raise InputError(f"{args.idioms}: idiom list is empty")
    pairs, counts = extract_corpus(args.idioms, args.src, args.tgt, args.lemmas)
    if args.keep_regular:
        found = {p.pair_id: p for p in pairs}
        src, tgt = _read_lines(args.src), _read_lines(args.tgt)
        ids = [line_pair_id(k, len(src)) for k in range(1, len(src) + 1)]
        pairs = [found.get(pid) or make_pair(pid, s, t) for pid, s, t in zip(ids, src, tgt)]
    dropped = []
    if not args.no_filter:
        pairs, dropped = preprocess_filter(pairs, cfg.max_len, cfg.max_ratio)
    write_corpus(pairs, args.out)
    freq = idiom_frequency_table(p for p in pairs if p.spans)
    seen = dict(freq)
    table = freq + sorted((k, 0) for k in counts if k not in seen)
    stats_text = "".join(f"{k}\t{v}\n" for k, v in table)
    if args.stats:
        Path(args.stats).write_text(stats_text, encoding="utf-8")
    log.info("wrote %d pairs to %s (%d dropped by filters)", len(pairs), args.out, len(dropped))
    return 0


def cmd_split(args) -> int:
    cfg = RunConfig("split", {"corpus": args.corpus}, upsample_factor=args.factor, seed=args.seed)
    cfg.validate()
    pairs = load_corpus(args.corpus)
    manifest = build_split(pairs, args.kind, args.factor, args.seed)
    write_manifest(manifest, args.out)
    if manifest.multi_idiom_ids:
        log.warning("%d pairs contain more than one idiom; grouped by their first span",
                    len(manifest.multi_idiom_ids))
    return 0


def _training_pairs(corpus: str, manifest: str | None):
    pairs = load_corpus(corpus)
    if not manifest:
        return pairs
    from .corpus import load_manifest
    keep = {pid for pid, role, rep in load_manifest(manifest) if role in ("regular", "idiom-train")}
    return [p for p in pairs if p.pair_id in keep]


def _aligner_config(args) -> AlignerConfig:
    return AlignerConfig(args.model, args.iterations, args.lam, args.alpha, getattr(args, "heuristic", HEURISTICS[-1]))


def cmd_train_align(args) -> int:
    RunConfig("train-align", {"corpus": args.corpus, "manifest": args.manifest or ""},
              iterations=args.iterations, lam=args.lam, alpha=args.alpha).validate()
    pairs = _training_pairs(args.corpus, args.manifest)
    bitext = [([t.normalized for t in p.source_tokens], [t.normalized for t in p.target_tokens]) for p in pairs]
    fwd, rev = train_aligners(bitext, _aligner_config(args))
    save_table(fwd, f"{args.out_prefix}.fwd.table")
    save_table(rev, f"{args.out_prefix}.rev.table")
    for name, table in (("forward", fwd), ("reverse", rev)):
        lls = table.objectives
        if any(b < a - 1e-6 for a, b in zip(lls, lls[1:])):
            raise AssertionError(f"{name} EM objective decreased: {lls}")
        log.info("%s log-likelihood by iteration: %s", name, " ".join(f"{x:.3f}" for x in table.log_likelihoods))
    return 0


def cmd_align(args) -> int:
    RunConfig("align", {"corpus": args.corpus, "hypotheses": args.hypotheses or ""}).validate()
    tables = (load_table(f"{args.tables}.fwd.table"), load_table(f"{args.tables}.rev.table"))
    pairs = load_corpus(args.corpus)
    targets = read_hypotheses(args.hypotheses, [p.pair_id for p in pairs]) if args.hypotheses else None
    alignments = align_corpus(pairs, tables, targets, args.heuristic)
    write_pharaoh([alignments[p.pair_id] for p in pairs], args.out)
    return 0


def cmd_eval(args) -> int:
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        raise InputError(f"unknown metrics {sorted(unknown)}; choose from {', '.join(ALL_METRICS)}")
    paths = {"corpus": args.corpus, "hypotheses": args.hypotheses}
    if "litter" in metrics:
        if not args.lexicon:
            raise InputError("litter requires --lexicon")
        paths["lexicon"] = args.lexicon
    if "apt" in metrics and not args.train_aligner:
        if not (args.ref_align and args.hyp_align):
            raise InputError("apt requires --ref-align and --hyp-align, or --train-aligner")
        paths.update(ref_align=args.ref_align, hyp_align=args.hyp_align)
    if args.align_train:
        paths["align_train"] = args.align_train
    RunConfig("eval", paths, iterations=args.iterations, lam=args.lam, alpha=args.alpha).validate()

    pairs = load_corpus(args.corpus)
    ids = [p.pair_id for p in pairs]
    hyps = read_hypotheses(args.hypotheses, ids)
    lexicon = load_lexicon(args.lexicon) if "litter" in metrics else None
    ref_al = hyp_al = None
    if "apt" in metrics:
        if args.train_aligner:
            extra = load_corpus(args.align_train) if args.align_train else []
            ref_al, hyp_al = in_process_alignments(pairs, hyps, extra, _aligner_config(args))
        else:
            ref_al = {a.pair_id: a for a in read_pharaoh(args.ref_align, ids)}
            hyp_al = {a.pair_id: a for a in read_pharaoh(args.hyp_align, ids)}
    report = evaluate(pairs, hyps, metrics, lexicon, ref_al, hyp_al)

    buf = io.StringIO()
    write_report(report, buf)
    text = buf.getvalue() if args.format == "structured" else render_table(read_report_text(buf.getvalue()))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.stdout or not args.out:
        sys.stdout.write(text)
    return 0


def read_report_text(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def cmd_report(args) -> int:
    records = read_report(args.input)
    if args.format == "structured":
        sys.stdout.write("".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records))
    else:
        sys.stdout.write(render_table(records))
    if args.tsv:
        Path(args.tsv).write_text(render_tsv(records), encoding="utf-8")
    return 0


def cmd_eval_global(args) -> int:
    hyps, refs = _read_lines(args.hypotheses), _read_lines(args.references)
    if len(hyps) != len(refs):
        raise InputError(f"{len(hyps)} hypotheses for {len(refs)} references")
    result = {"bleu": corpus_bleu(hyps, refs), "chrf": corpus_chrf(hyps, refs)}
    sys.stdout.write(json.dumps(result, sort_keys=True) + "\n")
    return 0


def cmd_lexicon_stats(args) -> int:
    lex = load_lexicon(args.path)
    for key, value in lex.stats().items():
        sys.stdout.write(f"{key}\t{value}\n")
    return 0


def _add_aligner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("diag", "model1"), default="diag")
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--lam", type=float, default=4.0, help="diagonal tension (diag model)")
    p.add_argument("--alpha", type=float, default=0.01, help="add-alpha smoothing of expected counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="idiomeval", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"idiomeval {__version__} (corpus format {CORPUS_FORMAT_VERSION}, "
                                f"report format {REPORT_FORMAT_VERSION})")
    parser.add_argument("--config", help="key = value config file (default: $IDIOMEVAL_CONFIG)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="find idiom occurrences in a parallel corpus")
    p.add_argument("--idioms", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats", help="write per-idiom counts (TSV)")
    p.add_argument("--lemmas", help="surface<TAB>lemma table replacing the built-in one")
    p.add_argument("--keep-regular", action="store_true", help="also emit pairs without idioms")
    p.add_argument("--no-filter", action="store_true", help="skip the length/ratio filters")
    p.add_argument("--max-len", type=int, default=80)
    p.add_argument("--max-ratio", type=float, default=1.5)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("split", help="build a zero/joint/upsample training split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", required=True, choices=("zero", "joint", "upsample"))
    p.add_argument("--factor", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train-align", help="train forward and reverse alignment tables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--manifest", help="restrict training to regular + idiom-train pairs")
    p.add_argument("--out-prefix", required=True)
    _add_aligner_flags(p)
    p.set_defaults(func=cmd_train_align)

    p = sub.add_parser("align", help="write symmetrized Pharaoh alignments")
    p.add_argument("--tables", required=True, help="prefix given to train-align")
    p.add_argument("--corpus", required=True)
    p.add_argument("--hypotheses", help="align sources with these instead of the references")
    p.add_argument("--heuristic", choices=HEURISTICS, default="grow-diag-final-and")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("eval", help="targeted and global evaluation report")
    p.add_argument("--corpus", required=True)
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--ref-align")
    p.add_argument("--hyp-align")
    p.add_argument("--train-aligner", action="store_true", help="align in-process instead of reading files")
    p.add_argument("--align-train", help="extra corpus for in-process aligner training")
    p.add_argument("--heuristic", choices=HEURISTICS, default="grow-diag-final-and")
    p.add_argument("--metrics", default=",".join(ALL_METRICS))
    p.add_argument("--format", choices=("structured", "tabular"), default="structured")
    p.add_argument("--out")
    p.add_argument("--stdout", action="store_true")
    _add_aligner_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="render a structured report")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("structured", "tabular"), default="tabular")
    p.add_argument("--tsv", help="write per-idiom scores as TSV")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("eval-global", help="corpus BLEU and chrF of plain-text files")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.set_defaults(func=cmd_eval_global)

    p = sub.add_parser("lexicon", help="bilingual lexicon utilities")
    lsub = p.add_subparsers(dest="lexicon_command", required=True)
    q = lsub.add_parser("stats")
    q.add_argument("path")
    q.set_defaults(func=cmd_lexicon_stats)
    return parser


def _apply_config(parser: argparse.ArgumentParser, values: dict[str, str]) -> None:
    parsers = [parser]
    while parsers:
        p = parsers.pop()
        for action in p._actions:
            if isinstance(action, argparse._SubParsersAction):
                parsers.extend(action.choices.values())
            elif action.dest in values:
                raw = values[action.dest]
                if isinstance(action, argparse._StoreTrueAction):
                    value = raw.lower() in ("1", "true", "yes", "on")
                else:
                    value = action.type(raw) if action.type else raw
                action.default = value
                action.required = False


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    parser = build_parser()
    try:
        _apply_config(parser, read_config_file(known.config))
    except (OSError, ValueError) as e:
        print(f"idiomeval: config error: {e}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except AssertionError as e:
        print(f"idiomeval: internal invariant violated: {e}", file=sys.stderr)
        return 3
    except (InputError, LexiconError, ValueError, KeyError, OSError) as e:
        print(f"idiomeval: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
