import io
import json
import subprocess
import sys

import pytest

from birnbaum.cli import main

KEYS = {"command", "inputs", "values", "witnesses", "warnings"}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_relate_example():
    code, out, _ = run("-w", "example1", "relate", "A", "E:(1,1)", "E_u1:(1,1)")
    assert code == 0
    assert out.strip() == "related: true (conditioning witness: statistic U, block {(1,1),(1,2)})"


def test_closure_example():
    code, out, _ = run("-w", "example1", "closure", "ex1-universe", "--kinds", "A")
    assert code == 0
    assert "{E:(1,1), E_u1:(1,1), E_v1:(1,1)}" in out
    assert "2 direct edge" in out
    assert "relation not transitive; closure added 1 pair" in out


def test_pvalue_example():
    code, out, _ = run("pvalue", "mixture", "--n", "12", "--k", "3", "--theta0", "1/2", "--successes", "9")
    assert code == 0 and out.strip() == "433/8192 (0.05286)"


def test_flags_after_subcommand():
    code, out, _ = run("relate", "A", "E:(1,1)", "E_u1:(1,1)", "-w", "example1", "--json")
    assert code == 0
    assert json.loads(out)["values"]["related"] is True


COMMANDS = [
    ("-w", "example1", "validate"),
    ("-w", "example1", "suff-min", "E"),
    ("-w", "example1", "ancillaries", "E"),
    ("-w", "example1", "condition", "E", "U", "1"),
    ("-w", "example1", "relate", "L", "E_u1:(1,1)", "E_v1:(1,1)"),
    ("-w", "example1", "closure", "ex1-universe", "--kinds", "S,C,A,L"),
    ("-w", "mayo", "chain", "Bin12:9", "NB3:9"),
    ("-w", "example1", "verify-birnbaum", "ex1-conditionals"),
    ("pvalue", "binom", "--n", "12", "--theta0", "1/2", "--successes", "9"),
    ("pvalue", "negbinom", "--k", "3", "--theta0", "1/2", "--successes", "9"),
    ("audit-mayo", "--n", "12", "--k", "3", "--theta0", "1/2", "--successes", "9", "--failures", "3"),
    ("coverage-ex3", "1/4", "given_X_positive"),
    ("twopoint", "1/4", "2"),
    ("np-mixture", "0.1", "0.05", "1", "1.1", "1", "0.05", "--sweep-n", "1..3"),
    ("paper-report",),
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: next(x for x in a if not x.startswith("-") and x not in ("example1", "mayo")))
def test_every_command_json_schema(argv):
    code, out, _ = run(*argv, "--json")
    assert code == 0
    payload = json.loads(out)
    assert KEYS <= set(payload)
    code2, out2, _ = run(*argv, "--json")
    assert out2 == out


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: next(x for x in a if not x.startswith("-") and x not in ("example1", "mayo")))
def test_every_command_text(argv):
    code, out, _ = run(*argv)
    assert code == 0 and out.strip()


def test_rationals_rendered_with_decimal():
    _, out, _ = run("pvalue", "binom", "--n", "12", "--theta0", "1/2", "--successes", "9")
    assert out.strip() == "299/4096 (0.07300)"
    _, out, _ = run("pvalue", "negbinom", "--k", "3", "--theta0", "1/2", "--successes", "9")
    assert out.strip() == "67/2048 (0.03271)"


@pytest.mark.parametrize("argv, code", [
    (("-w", "example1", "condition", "E", "U", "7"), 1),
    (("-w", "example1", "relate", "L", "E:(9,9)", "E_u1:(1,1)"), 1),
    (("-w", "mayo", "chain", "Bin12:9", "NB3:8"), 1),
    (("-w", "nowhere.bw", "validate"), 1),
    (("validate",), 1),
    (("pvalue", "mixture", "--n", "12", "--k", "3", "--theta0", "1/2", "--successes", "9", "--failures", "2"), 1),
    (("coverage-ex3", "0", "given_X_positive"), 1),
    (("twopoint", "1/2", "5"), 1),
    (("frobnicate",), 2),
    (("pvalue", "binom", "--theta0", "1/2", "--successes", "9"), 2),
    (("-w", "example1", "closure", "ex1-universe", "--kinds", "S,X"), 1),
    (("pvalue", "binom", "--n", "12", "--theta0", "half", "--successes", "9"), 2),
    (("np-mixture", "0.1", "0.05", "1", "1.1", "1", "0.05", "--sweep-n", "3..1"), 2),
])
def test_exit_codes(argv, code):
    got, _, err = run(*argv)
    assert got == code
    assert err


def test_domain_error_as_json():
    code, out, _ = run("-w", "example1", "condition", "E", "U", "7", "--json")
    assert code == 1
    payload = json.loads(out)
    assert KEYS <= set(payload) and payload["error"]["code"] == "UNKNOWN_BLOCK"


def test_ancillary_cap_env(monkeypatch):
    monkeypatch.setenv("BW_ANCILLARY_CAP", "3")
    code, _, err = run("-w", "example1", "ancillaries", "E")
    assert code == 1 and "cap is 3" in err
    monkeypatch.setenv("BW_ANCILLARY_CAP", "lots")
    assert run("-w", "example1", "ancillaries", "E")[0] == 1
    monkeypatch.delenv("BW_ANCILLARY_CAP")
    assert run("-w", "example1", "ancillaries", "E", "--cap", "3")[0] == 1


def test_workspace_file_path(tmp_path):
    p = tmp_path / "mini.bw"
    p.write_text("experiment F\n  outcomes a b\n  pmf 1 1/6 1/6 2/6 3/6\n")
    code, _, err = run("-w", str(p), "validate")
    assert code == 1 and "line 3" in err


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "birnbaum", "paper-report"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and b"[unreconciled]" in first
