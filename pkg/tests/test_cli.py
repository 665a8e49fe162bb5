"""The command-line driver: subcommands, report formats, exit codes."""

import json

import pytest

from cac.cli import main
from tests.conftest import CORPUS


def path(name):
    return str(CORPUS / f"{name}.cac")


def test_check_runs_directives(capsys):
    assert main(["check", path("int")]) == 0
    out = capsys.readouterr().out
    assert "normalize" in out and "— 0" in out
    assert "all checks passed" in out


def test_check_structured(capsys):
    assert main(["--report", "structured", "check", path("nat")]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["ok"] is True
    assert obj["directives"][0]["normal_form"] \
        == "succ(succ(succ(succ(zero))))"


def test_admissibility_exit_codes(capsys):
    assert main(["admissibility", path("app")]) == 0
    assert main(["admissibility", path("neg_dup")]) == 1
    capsys.readouterr()


def test_admissibility_strict_flags_sufficient(capsys):
    # app relies on the sufficient conditions for S4/S5
    assert main(["--strict", "admissibility", path("app")]) == 1
    capsys.readouterr()


def test_admissibility_structured_report(capsys):
    assert main(["--report", "structured", "admissibility",
                 path("ndm_prop")]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["overall"] == "ADMISSIBLE"
    assert obj["assertions"] == []
    assert obj["a1"]["level"] == "NEWMAN"


def test_normalize_expression(capsys):
    assert main(["normalize", path("int"), "-e", "plus(0, s(p(s(0))))"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "s(0)"


def test_convert(capsys):
    assert main(["convert", path("int"),
                 "-e", "s(p(0))", "-e", "p(s(0))"]) == 0
    assert main(["convert", path("int"), "-e", "0", "-e", "s(0)"]) == 1
    capsys.readouterr()


def test_usage_errors(capsys):
    assert main(["normalize", path("int"), "-e", "plus(0"]) == 2
    assert main(["check", "/nonexistent.cac"]) == 2
    assert main(["convert", path("int"), "-e", "0"]) == 2
    capsys.readouterr()
