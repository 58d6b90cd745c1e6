"""Print the five LitTER worked examples with their surviving blocklists and verdicts,
then run the matcher over the wool demo sentences."""

from idiomeval.litter import build_blocklists, filter_by_reference, litter_corpus
from idiomeval.matcher import analyze, compile_pattern, find_matches
from idiomeval.text import tokenize
from idiomeval.worked_examples import (
    DEMO_SENTENCES,
    NEGATIVE_CONTROL,
    WOOL,
    WORKED_EXAMPLES,
    worked_lexicon,
    worked_pairs,
)


def show_litter() -> None:
    pairs, lexicon = worked_pairs(), worked_lexicon()
    hyps = {e.pair_id: e.hypothesis for e in WORKED_EXAMPLES}
    result = litter_corpus(pairs, hyps, lexicon)
    for pair, verdict in zip(pairs, result.verdicts):
        filtered = filter_by_reference(build_blocklists(pair, pair.spans[0], lexicon), pair.target_tokens)
        print(f"[{pair.pair_id}] {pair.spans[0].idiom_id}")
        for bl in filtered.blocklists:
            state = f"removed by {bl.removing_word!r}" if bl.removed_by_reference else "active"
            print(f"    {bl.source_word:8s} {sorted(bl.candidates)}  ({state})")
        mark = "literal" if verdict.triggered else "ok"
        print(f"    -> {mark} {sorted(verdict.trigger_tokens)}")
    print(f"macro LitTER {result.macro:.2f}  micro {result.micro:.2f}")


def show_matcher() -> None:
    pattern = compile_pattern(WOOL)
    print(f"\npattern: {' '.join(f'{e.kind}:{e.value}' for e in pattern.elements)}")
    for sentence in DEMO_SENTENCES + [NEGATIVE_CONTROL]:
        spans = find_matches(pattern, analyze(tokenize(sentence)))
        hit = ", ".join(repr(sentence[s.char_start:s.char_end]) for s in spans) or "no match"
        print(f"  {hit}")


if __name__ == "__main__":
    show_litter()
    show_matcher()
