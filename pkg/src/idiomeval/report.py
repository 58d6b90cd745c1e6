"""Serialization and rendering of evaluation reports.

The structured form is line-delimited JSON: one ``summary`` record, one
``idiom`` record per idiom, then one ``sentence`` record per annotated pair.
"""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path
from typing import Iterable, TextIO

from . import REPORT_FORMAT_VERSION
from .pipeline import EvalReport

__all__ = ["read_report", "render_table", "render_tsv", "report_records", "write_report"]


def report_records(report: EvalReport) -> list[dict]:
    summary: dict = {"record": "summary", "format_version": REPORT_FORMAT_VERSION,
                     "metrics": list(report.metrics), "n_pairs": len(report.pair_ids),
                     "n_annotated": sum(1 for ids in report.idiom_of.values() if ids)}
    idioms: dict[str, dict] = defaultdict(dict)
    sentences: dict[str, dict] = {}

    lit = report.litter
    if lit is not None:
        summary.update(macro_litter=lit.macro, micro_litter=lit.micro, litter_unscorable=lit.unscorable,
                       oov_rate=lit.oov_rate)
        for idiom_id, (n, rate) in lit.per_idiom.items():
            idioms[idiom_id].update(n_litter=n, litter=rate)
        for v in lit.verdicts:
            sentences.setdefault(v.pair_id, {})["litter"] = {
                "idiom_id": v.idiom_id,
                "triggered": v.triggered,
                "triggering_words": sorted([tok, src] for tok, src in v.triggering_words),
                "active_blocklists": v.active_blocklists,
                "removed_by_reference": [list(r) for r in v.removed],
                "oov_words": list(v.oov_words),
                "unscorable": v.unscorable,
            }
    apt = report.apt
    if apt is not None:
        summary.update(macro_uniprec=apt.macro_uniprec, macro_chrf=apt.macro_chrf,
                       micro_uniprec=apt.micro_uniprec, micro_chrf=apt.micro_chrf,
                       empty_ref_rate=apt.empty_ref_rate, empty_hyp_rate=apt.empty_hyp_rate)
        for idiom_id, vals in apt.per_idiom.items():
            idioms[idiom_id].update(n_apt=vals["n"], uniprec=vals["uniprec"], chrf=vals["chrf"])
        for s in apt.scores:
            sentences.setdefault(s.pair_id, {}).setdefault("apt", []).append({
                "idiom_id": s.idiom_id, "uniprec": s.uniprec, "chrf": s.chrf,
                "empty_ref": s.empty_ref, "empty_hyp": s.empty_hyp,
            })
    for name, value in report.global_scores.items():
        summary[name] = value

    records = [summary]
    records += [{"record": "idiom", "idiom_id": k, **idioms[k]} for k in sorted(idioms)]
    for pid in report.pair_ids:
        if pid in sentences:
            ids = report.idiom_of.get(pid, [])
            records.append({"record": "sentence", "pair_id": pid, "idioms": ids,
                            "multi_idiom": len(set(ids)) > 1, **sentences[pid]})
    return records


def write_report(report: EvalReport, out: TextIO) -> None:
    for rec in report_records(report):
        out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def read_report(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def render_table(records: Iterable[dict]) -> str:
    records = list(records)
    summary = next((r for r in records if r["record"] == "summary"), {})
    lines = ["summary"]
    for key in ("n_pairs", "n_annotated", "macro_litter", "micro_litter", "litter_unscorable", "oov_rate",
                "macro_uniprec", "micro_uniprec", "macro_chrf", "micro_chrf", "empty_ref_rate",
                "empty_hyp_rate", "bleu", "chrf"):
        if key in summary:
            lines.append(f"  {key:<18} {_fmt(summary[key])}")
    idioms = [r for r in records if r["record"] == "idiom"]
    if idioms:
        width = max(len(r["idiom_id"]) for r in idioms)
        lines.append("")
        lines.append(f"{'idiom':<{width}}  {'n':>4}  {'litter':>7}  {'uniprec':>7}  {'chrf':>7}")
        for r in idioms:
            n = r.get("n_litter", r.get("n_apt", 0))
            lines.append(f"{r['idiom_id']:<{width}}  {n:>4}  {_fmt(r.get('litter')):>7}  "
                         f"{_fmt(r.get('uniprec')):>7}  {_fmt(r.get('chrf')):>7}")
    return "\n".join(lines) + "\n"


def render_tsv(records: Iterable[dict]) -> str:
    """Per-idiom scores, one row per idiom, ready for plotting."""
    rows = ["idiom_id\tn\tlitter\tuniprec\tchrf"]
    for r in records:
        if r["record"] != "idiom":
            continue
        n = r.get("n_litter", r.get("n_apt", 0))
        rows.append("\t".join([r["idiom_id"], str(n)] + [
            "" if r.get(k) is None else repr(r[k]) for k in ("litter", "uniprec", "chrf")]))
    return "\n".join(rows) + "\n"
