import argparse
import json

import pytest

import eiscrit
from conf import VERIFY_CHECKS
from numkernel import ContradictionError


def run(argv):
    return eiscrit.main(eiscrit.parse_args(argv + ["--jobs", "1", "--quiet"]))


def test_parse_k_range():
    assert eiscrit.parse_k_range("12") == [12]
    assert eiscrit.parse_k_range("4..10") == [4, 6, 8, 10]
    for text in ("7", "4..9", "2", "12..8", "twelve"):
        with pytest.raises(argparse.ArgumentTypeError):
            eiscrit.parse_k_range(text)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--k", "7"],
        ["verify", "--checks", "no_such_check"],
        ["phi-solve", "--lambda", "one"],
        ["gamma-count", "--gamma", "1,1,1,1"],
        ["export", "pictures"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        eiscrit.parse_args(argv)
    assert info.value.code == 2


def test_verify_report(tmp_path, capsys):
    code = run(
        [
            "verify",
            "--k",
            "10..12",
            "--checks",
            "line_zero_count,line_endpoint",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    assert "line_zero_count: expected 1 observed 1" in capsys.readouterr().out
    rows = json.loads((tmp_path / "report.json").read_text())
    assert [(row["k"], row["check"]) for row in rows] == [
        (10, "line_endpoint"),
        (10, "line_zero_count"),
        (12, "line_endpoint"),
        (12, "line_zero_count"),
    ]
    assert list(rows[0]) == eiscrit.REPORT_HEADER
    assert {row["status"] for row in rows} == {"PASS"}


def test_failed_check_sets_the_exit_code(tmp_path, monkeypatch):
    def broken(k, config):
        raise ContradictionError("number of zeros", 1, 2)

    monkeypatch.setitem(eiscrit.CHECKS, "line_zero_count", broken)
    code = run(
        ["verify", "--checks", "line_zero_count", "--format", "csv", "--out", str(tmp_path)]
    )
    assert code == 1
    lines = (tmp_path / "report.csv").read_text().splitlines()
    assert lines[0] == "check,k,expected,observed,status"
    assert lines[1].startswith("line_zero_count,12,1,")
    assert lines[1].endswith(",FAIL")


def test_export_empty_table_keeps_its_header(tmp_path):
    assert run(["export", "line-zeros", "--k", "4", "--format", "csv", "--out", str(tmp_path)]) == 0
    content = (tmp_path / "line_zeros_k4.csv").read_text()
    assert content == "k,kind,re,im,residual,margin,bracket_lo,bracket_hi\n"


def test_export_is_deterministic(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    for out in (first, second):
        assert run(["export", "line-zeros", "--k", "14", "--out", str(out)]) == 0
    name = "line_zeros_k14.json"
    assert (first / name).read_bytes() == (second / name).read_bytes()
    rows = json.loads((first / name).read_text())
    assert [row["kind"] for row in rows] == ["endpoint", "line"]


def test_phi_solve_without_solutions(tmp_path, capsys):
    assert run(["phi-solve", "--lambda", "1/2", "--out", str(tmp_path)]) == 0
    assert "k=12: 0 solutions" in capsys.readouterr().out
    assert json.loads((tmp_path / "phi_solve.json").read_text()) == []


def test_gamma_count_without_zeros(tmp_path, capsys):
    assert run(["gamma-count", "--gamma", "0,-1,1,0", "--out", str(tmp_path)]) == 0
    assert "k=12: 0 zeros" in capsys.readouterr().out


def test_every_listed_check_is_registered():
    assert list(eiscrit.CHECKS) == VERIFY_CHECKS


def test_verify_supporting_checks(tmp_path):
    checks = "sign_machinery,w_monotone,hk_oracle,pole_limit_signs,e2_line_zero"
    assert run(["verify", "--k", "12", "--checks", checks, "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "report.json").read_text())
    assert sorted(row["check"] for row in rows) == sorted(checks.split(","))
    assert {row["status"] for row in rows} == {"PASS"}
