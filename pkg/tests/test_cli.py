"""CLI behavior: exit codes, stream separation, output files."""

from __future__ import annotations

import json

import pytest

from qcosmic import parse_model
from qcosmic.cli import main
from conftest import FIXTURES


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def fixture(name: str) -> str:
    return str(FIXTURES / name)


class TestExitCodes:
    def test_measure_ok(self, capsys):
        code, out, err = run(capsys, "measure", fixture("factoring.qcm"), "--format", "json")
        assert code == 0
        assert json.loads(out)["total_qcfp"] == 10
        assert err == ""

    def test_check_validation_error(self, capsys):
        code, out, err = run(capsys, "check", fixture("bad_r1.qcm"))
        assert code == 1
        assert out == ""
        assert "error[R1]" in err

    def test_check_clean_fixture(self, capsys):
        code, out, err = run(capsys, "check", fixture("factoring.qcm"))
        assert code == 0
        assert out == "" and err == ""

    def test_check_warning_fixture_exits_zero(self, capsys):
        code, out, err = run(capsys, "check", fixture("warn_p1.qcm"))
        assert code == 0
        assert "warning[P1]" in err

    def test_parse_failure(self, capsys):
        code, out, err = run(capsys, "check", fixture("bad_syntax.qcm"))
        assert code == 2
        assert out == ""
        assert "error[S2]" in err

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "measure", "nonexistent.qcm")
        assert code == 3
        assert "cannot read" in err

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "measure", fixture("factoring.qcm"), "--bogus")
        assert code == 3
        assert err != ""

    def test_measure_refuses_invalid_model(self, capsys):
        code, out, err = run(capsys, "measure", fixture("bad_r4.qcm"))
        assert code == 1
        assert out == ""
        assert "error[R4]" in err

    def test_unknown_scope(self, capsys):
        code, _, err = run(
            capsys, "diagram", fixture("factoring.qcm"), "--scope", "Nope"
        )
        assert code == 3
        assert "--scope" in err


class TestOutputs:
    def test_text_report_on_stdout(self, capsys):
        code, out, err = run(capsys, "measure", fixture("factoring.qcm"))
        assert code == 0
        assert "TOTAL 10 QCFP (classical 8 / quantum 2)" in out
        assert err == ""

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "measure", fixture("factoring.qcm"), "--format", "csv")
        assert code == 0
        assert out.splitlines()[0].startswith("process,layer,nature,")

    def test_by_layer_flag(self, capsys):
        _, plain, _ = run(capsys, "measure", fixture("factoring.qcm"))
        _, layered, _ = run(capsys, "measure", fixture("factoring.qcm"), "--by-layer")
        assert len(layered.splitlines()) > len(plain.splitlines())

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, err = run(
            capsys, "measure", fixture("factoring.qcm"),
            "--format", "json", "-o", str(target),
        )
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["total_qcfp"] == 10

    def test_diagram_prints_dot(self, capsys):
        code, out, _ = run(capsys, "diagram", fixture("factoring.qcm"))
        assert code == 0
        assert out.startswith('digraph "Integer Factoring Suite" {')

    def test_diagram_scope_edge_count(self, capsys):
        code, out, _ = run(
            capsys, "diagram", fixture("factoring.qcm"),
            "--scope", "Factor Large Integer",
        )
        assert code == 0
        assert sum(1 for line in out.splitlines() if " -> " in line) == 6

    def test_fmt_emits_reparsable_canonical_text(self, capsys):
        code, out, err = run(capsys, "fmt", fixture("factoring.qcm"))
        assert code == 0
        reparsed = parse_model(out)
        assert reparsed.model is not None

    def test_fmt_works_despite_rule_errors(self, capsys):
        code, out, _ = run(capsys, "fmt", fixture("bad_r4.qcm"))
        assert code == 0
        assert out.startswith('system "R4 Trigger"')

    def test_dedup_cosmic_flag(self, capsys, tmp_path):
        source = tmp_path / "dup.qcm"
        source.write_text(
            'system "S" { layer classical "A" '
            'user classical "U" user classical "V" datagroup "g" {} '
            'process "P" in layer "A" { '
            'entry "g" from user "U" entry "g" from user "V" } }'
        )
        _, endpoint_out, _ = run(capsys, "measure", str(source), "--format", "json")
        _, cosmic_out, _ = run(
            capsys, "measure", str(source), "--format", "json", "--dedup", "cosmic"
        )
        assert json.loads(endpoint_out)["total_qcfp"] == 2
        assert json.loads(cosmic_out)["total_qcfp"] == 1

    def test_consecutive_runs_are_byte_identical(self, capsys):
        _, first, err1 = run(capsys, "measure", fixture("factoring.qcm"), "--format", "json")
        _, second, err2 = run(capsys, "measure", fixture("factoring.qcm"), "--format", "json")
        assert first == second
        assert err1 == err2 == ""


class TestRuleCatalogExitCodes:
    @pytest.mark.parametrize("code", ["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8", "r9"])
    def test_bad_fixtures_exit_one(self, capsys, code):
        exit_code, _, err = run(capsys, "check", fixture(f"bad_{code}.qcm"))
        assert exit_code == 1
        assert f"[{code.upper()}]" in err

    @pytest.mark.parametrize(
        "name",
        ["ok_r1", "ok_r2", "ok_r3", "ok_r4", "ok_r5", "ok_r6", "ok_r7", "ok_r8", "ok_r9",
         "ok_p1", "ok_p2", "ok_p3", "warn_p1", "warn_p2", "warn_p3"],
    )
    def test_pass_and_warning_fixtures_exit_zero(self, capsys, name):
        exit_code, _, _ = run(capsys, "check", fixture(f"{name}.qcm"))
        assert exit_code == 0
