import pytest

from idiomeval.worked_examples import WORKED_EXAMPLES, worked_lexicon, worked_pairs


@pytest.fixture
def worked():
    return worked_pairs(), worked_lexicon(), {e.pair_id: e.hypothesis for e in WORKED_EXAMPLES}


@pytest.fixture
def write(tmp_path):
    def _write(name, content):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return _write


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
