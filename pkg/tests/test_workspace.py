import pytest

from birnbaum import WorkspaceError
from birnbaum.report import example1_workspace, mayo_workspace
from birnbaum.workspace import (
    FIXTURES,
    load_fixture,
    parse_workspace,
    parse_workspace_text,
    serialize_workspace,
)


def same(a, b):
    assert list(a.experiments) == list(b.experiments)
    for k in a.experiments:
        assert a.experiments[k] == b.experiments[k]
    assert a.statistics == b.statistics
    assert a.universes == b.universes


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip(name):
    ws = load_fixture(name)
    text = serialize_workspace(ws)
    again = parse_workspace_text(text)
    same(ws, again)
    assert serialize_workspace(again) == text


def test_fixtures_equal_builders():
    same(load_fixture("example1"), example1_workspace())
    same(load_fixture("mayo"), mayo_workspace())


def test_empty_and_comment_only():
    for text in ("", "\n\n", "# nothing here\n   # still nothing\n"):
        ws = parse_workspace_text(text)
        assert not ws.experiments and not ws.statistics and not ws.universes


def test_parse_from_file(tmp_path):
    p = tmp_path / "w.bw"
    p.write_text(serialize_workspace(example1_workspace()))
    same(parse_workspace(p), example1_workspace())


def test_non_utf8(tmp_path):
    p = tmp_path / "bad.bw"
    p.write_bytes(b"experiment E\n  outcomes \xff\n")
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace(p)
    assert exc.value.code == "PARSE_ERROR"


GOOD = """experiment E
  outcomes a b
  pmf 1 1/2 1/2
  pmf 2 1/3 2/3
"""


ERROR_CASES = [
    ("outcomes a b\n", "PARSE_ERROR", 1, None),
    ("experiment E\n  outcomes a b\n  pmf 1 1/6 1/6 2/6 3/6\n", "VALIDATION_ERROR", 3, "MISMATCHED_ROW_LENGTH"),
    ("experiment E\n  outcomes a b c d\n  pmf 1 1/6 1/6 2/6 3/6\n", "VALIDATION_ERROR", 3, "ROW_SUM"),
    ("experiment E\n  outcomes a b\n  pmf 1 1/2 x\n", "PARSE_ERROR", 3, None),
    ("experiment E\n  outcomes a a\n  pmf 1 1/2 1/2\n", "VALIDATION_ERROR", 2, "DUPLICATE_LABEL"),
    ("experiment E\n  pmf 1 1\n", "PARSE_ERROR", 1, None),
    ("experiment E\n  outcomes a b\n  pmf 1 1 0\n", "VALIDATION_ERROR", 2, "DEAD_OUTCOME"),
    (GOOD + "statistic T on F\n  block a b\n", "UNRESOLVED_REFERENCE", 5, None),
    (GOOD + "statistic T on E\n  block a\n", "VALIDATION_ERROR", 5, "NOT_A_PARTITION"),
    (GOOD + "universe U\n  base E:c\n", "UNRESOLVED_REFERENCE", 6, None),
    (GOOD + "universe U\n  base E:a\n  base E:a\n", "VALIDATION_ERROR", 5, "DUPLICATE_BASE"),
    (GOOD + "mixture M of E G\n", "UNRESOLVED_REFERENCE", 5, None),
    (GOOD + "mixture M of E E\n  weight 1\n", "VALIDATION_ERROR", 5, "BAD_WEIGHT"),
    (GOOD + "experiment E\n  outcomes a\n  pmf 1 1\n  pmf 2 1\n", "PARSE_ERROR", 5, None),
]


@pytest.mark.parametrize("text, code, line, cause", ERROR_CASES,
                         ids=[f"{c[3] or c[1]}-line{c[2]}" for c in ERROR_CASES])
def test_errors_carry_line_numbers(text, code, line, cause):
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace_text(text)
    assert exc.value.code == code
    assert exc.value.line == line
    assert f"(line {line})" in str(exc.value)
    if cause:
        assert exc.value.context.get("cause") == cause


def test_mixture_block_parses():
    ws = parse_workspace_text(GOOD + "mixture M of E E\n  weight 1/3\n")
    m = ws.experiment("M")
    assert str(m.weights[0]) == "1/3"
    assert m.outcomes == ("(1,a)", "(1,b)", "(2,a)", "(2,b)")
    again = parse_workspace_text(serialize_workspace(ws))
    assert again.experiment("M") == m
