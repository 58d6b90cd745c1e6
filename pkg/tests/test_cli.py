import json

import pytest

from idiomeval import cli
from idiomeval.cli import main
from idiomeval.corpus import load_corpus, load_manifest, write_corpus
from idiomeval.lexicon import save_lexicon
from idiomeval.worked_examples import DEMO_SENTENCES, NEGATIVE_CONTROL, WOOL, WORKED_EXAMPLES


@pytest.fixture
def worked_files(tmp_path, worked):
    pairs, lex, hyps = worked
    write_corpus(pairs, tmp_path / "corpus.jsonl")
    save_lexicon(lex, tmp_path / "lex.txt")
    (tmp_path / "hyps.txt").write_text("".join(hyps[p.pair_id] + "\n" for p in pairs), encoding="utf-8")
    return tmp_path


@pytest.fixture
def demo_files(write):
    idioms = write("idioms.txt", WOOL + "\n")
    src = write("src.txt", "\n".join(DEMO_SENTENCES + [NEGATIVE_CONTROL]) + "\n")
    tgt = write("tgt.txt", "\n".join(DEMO_SENTENCES + [NEGATIVE_CONTROL]) + "\n")
    return idioms, src, tgt


def run(*args):
    return main([str(a) for a in args])


def sentence_records(text):
    return [r for r in map(json.loads, text.splitlines()) if r["record"] == "sentence"]


def test_version(capsys):
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["--version"])
    assert "idiomeval 0.1.0" in capsys.readouterr().out


def test_extract_demo(tmp_path, demo_files):
    idioms, src, tgt = demo_files
    out = tmp_path / "idiom.jsonl"
    assert run("extract", "--idioms", idioms, "--src", src, "--tgt", tgt, "--out", out,
               "--stats", tmp_path / "stats.tsv") == 0
    pairs = load_corpus(out)
    assert len(pairs) == 4
    assert (tmp_path / "stats.tsv").read_text() == f"{WOOL}\t4\n"
    assert run("split", "--corpus", out, "--kind", "joint", "--out", tmp_path / "m.jsonl") == 0
    assert len(load_manifest(tmp_path / "m.jsonl")) == 4


def test_extract_keep_regular(tmp_path, demo_files):
    idioms, src, tgt = demo_files
    out = tmp_path / "all.jsonl"
    assert run("extract", "--idioms", idioms, "--src", src, "--tgt", tgt, "--out", out, "--keep-regular") == 0
    pairs = load_corpus(out)
    assert [bool(p.spans) for p in pairs] == [True, True, True, True, False]


def test_extract_empty_idiom_list(tmp_path, demo_files, write):
    _, src, tgt = demo_files
    empty = write("empty.txt", "# nothing\n\n")
    assert run("extract", "--idioms", empty, "--src", src, "--tgt", tgt, "--out", tmp_path / "o") == 2


def test_extract_missing_file(tmp_path, demo_files):
    idioms, src, _ = demo_files
    assert run("extract", "--idioms", idioms, "--src", src, "--tgt", tmp_path / "nope", "--out", tmp_path / "o") == 2


def _split_corpus(tmp_path, worked):
    pairs, _, _ = worked
    path = tmp_path / "c.jsonl"
    from idiomeval.synthetic import random_annotated_corpus
    write_corpus(random_annotated_corpus(300, 8, seed=1), path)
    return path


def test_split_kinds(tmp_path, worked):
    corpus = _split_corpus(tmp_path, worked)
    assert run("split", "--corpus", corpus, "--kind", "zero", "--out", tmp_path / "z") == 0
    rows = load_manifest(tmp_path / "z")
    assert all(rep == 0 for _, role, rep in rows if role != "regular")
    assert run("split", "--corpus", corpus, "--kind", "upsample", "--factor", 20, "--out", tmp_path / "u") == 0
    assert {rep for _, role, rep in load_manifest(tmp_path / "u") if role == "idiom-train"} == {20}


@pytest.mark.parametrize("extra", [["--kind", "upsample", "--factor", "0"], ["--kind", "sideways"]])
def test_split_errors(tmp_path, worked, extra):
    corpus = _split_corpus(tmp_path, worked)
    assert run("split", "--corpus", corpus, *extra, "--out", tmp_path / "m") == 2


def test_eval_worked_examples(worked_files, capsys):
    d = worked_files
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--lexicon", d / "lex.txt",
               "--metrics", "litter", "--out", d / "r.jsonl") == 0
    text = (d / "r.jsonl").read_text()
    verdicts = [r["litter"]["triggered"] for r in sentence_records(text)]
    assert verdicts == [True, True, False, False, False]
    summary = json.loads(text.splitlines()[0])
    assert summary["macro_litter"] == 0.4
    triggers = {r["pair_id"]: {w for w, _ in r["litter"]["triggering_words"]} for r in sentence_records(text)}
    assert triggers == {e.pair_id: set(e.trigger_words) for e in WORKED_EXAMPLES}


def test_eval_bleu_needs_no_lexicon(worked_files, capsys):
    d = worked_files
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--metrics", "bleu",
               "--stdout") == 0
    summary = json.loads(capsys.readouterr().out.splitlines()[0])
    assert 0 < summary["bleu"] < 100


def test_eval_litter_needs_lexicon(worked_files):
    d = worked_files
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--metrics", "litter") == 2


def test_eval_hypothesis_count_mismatch(worked_files, write):
    d = worked_files
    short = write("short.txt", "one line\n")
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", short, "--metrics", "bleu") == 2


def test_eval_keyed_hypotheses(worked_files, worked, capsys):
    d = worked_files
    _, _, hyps = worked
    keyed = d / "keyed.jsonl"
    keyed.write_text("".join(json.dumps({"pair_id": k, "text": v}) + "\n" for k, v in reversed(hyps.items())))
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", keyed, "--lexicon", d / "lex.txt",
               "--metrics", "litter", "--stdout") == 0
    assert json.loads(capsys.readouterr().out.splitlines()[0])["macro_litter"] == 0.4


def test_eval_full_with_in_process_aligner_is_deterministic(worked_files):
    d = worked_files
    args = ["eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--lexicon", d / "lex.txt",
            "--train-aligner"]
    assert run(*args, "--out", d / "a.jsonl") == 0
    assert run(*args, "--out", d / "b.jsonl") == 0
    assert (d / "a.jsonl").read_bytes() == (d / "b.jsonl").read_bytes()
    summary = json.loads((d / "a.jsonl").read_text().splitlines()[0])
    for key in ("macro_litter", "micro_litter", "macro_uniprec", "macro_chrf", "empty_ref_rate", "bleu", "chrf"):
        assert key in summary


def test_train_align_then_eval_with_files(worked_files):
    d = worked_files
    assert run("train-align", "--corpus", d / "corpus.jsonl", "--out-prefix", d / "al", "--model", "model1") == 0
    assert (d / "al.fwd.table").exists() and (d / "al.rev.table").exists()
    assert run("align", "--tables", d / "al", "--corpus", d / "corpus.jsonl", "--out", d / "ref.align") == 0
    assert run("align", "--tables", d / "al", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt",
               "--out", d / "hyp.align") == 0
    assert len((d / "ref.align").read_text().splitlines()) == 5
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--metrics", "apt",
               "--ref-align", d / "ref.align", "--hyp-align", d / "hyp.align", "--out", d / "r.jsonl") == 0
    assert "macro_uniprec" in json.loads((d / "r.jsonl").read_text().splitlines()[0])


def test_apt_without_alignments(worked_files):
    d = worked_files
    assert run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--metrics", "apt") == 2


def test_report_rendering(worked_files, capsys):
    d = worked_files
    run("eval", "--corpus", d / "corpus.jsonl", "--hypotheses", d / "hyps.txt", "--lexicon", d / "lex.txt",
        "--metrics", "litter,bleu,chrf", "--out", d / "r.jsonl")
    capsys.readouterr()
    assert run("report", "--input", d / "r.jsonl", "--tsv", d / "r.tsv") == 0
    table = capsys.readouterr().out
    assert "macro_litter" in table and "bread and butter" in table
    tsv = (d / "r.tsv").read_text().splitlines()
    assert tsv[0] == "idiom_id\tn\tlitter\tuniprec\tchrf"
    assert len(tsv) == 6


def test_eval_global(write, capsys):
    hyp = write("h.txt", "a b c d\n")
    ref = write("r.txt", "a b c d\n")
    assert run("eval-global", "--hypotheses", hyp, "--references", ref) == 0
    assert json.loads(capsys.readouterr().out) == {"bleu": 100.0, "chrf": 1.0}


def test_lexicon_stats(worked_files, worked, capsys):
    _, lex, _ = worked
    assert run("lexicon", "stats", worked_files / "lex.txt") == 0
    out = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert out["source_vocab_size"] == str(lex.source_vocab_size)
    assert out["pair_count"] == str(lex.pair_count)


def test_config_file_and_flag_precedence(tmp_path, worked, write, monkeypatch):
    corpus = _split_corpus(tmp_path, worked)
    cfg = write("run.cfg", "# defaults\nfactor = 7\nkind = upsample\n")
    assert run("--config", cfg, "split", "--corpus", corpus, "--out", tmp_path / "a") == 0
    assert {r for _, role, r in load_manifest(tmp_path / "a") if role == "idiom-train"} == {7}
    assert run("--config", cfg, "split", "--corpus", corpus, "--factor", 3, "--out", tmp_path / "b") == 0
    assert {r for _, role, r in load_manifest(tmp_path / "b") if role == "idiom-train"} == {3}
    monkeypatch.setenv("IDIOMEVAL_CONFIG", str(cfg))
    assert run("split", "--corpus", corpus, "--out", tmp_path / "c") == 0
    assert load_manifest(tmp_path / "c") == load_manifest(tmp_path / "a")


def test_invariant_violation_exit_code(monkeypatch, write):
    def boom(args):
        raise AssertionError("broken")

    monkeypatch.setattr(cli, "cmd_eval_global", boom)
    hyp = write("h.txt", "a\n")
    parser = cli.build_parser
    monkeypatch.setattr(cli, "build_parser", lambda: _patched(parser()))
    assert run("eval-global", "--hypotheses", hyp, "--references", hyp) == 3


def _patched(parser):
    for action in parser._subparsers._group_actions:
        action.choices["eval-global"].set_defaults(func=cli.cmd_eval_global)
    return parser
