"""CLI behavior: determinism, formats, exit codes, file handling."""

import json

import pytest

from qctx import bundled
from qctx.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExperiment:
    def test_default_run(self, capsys):
        code, out, _ = run_cli(capsys, "experiment")
        assert code == 0
        assert "non-contextual prediction confirmed" in out
        assert "0.333333333333" in out
        assert "10.5" in out

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "experiment", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["expectation_trace"] == pytest.approx(10.5, abs=1e-10)
        assert payload["expectation_closed_form"] == 10.5
        assert payload["contextuality"]["confirmed"] is True
        assert payload["distribution"]["probabilities"][0][0] == pytest.approx(1 / 3)

    def test_custom_labels(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "experiment",
            "--labels1", "0,1,-1",
            "--labels2", "0,1,-1",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["expectation_trace"] == pytest.approx(0.0, abs=1e-12)

    def test_swap_flag(self, capsys):
        code, out, _ = run_cli(capsys, "experiment", "--swap", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["distribution"]["side1_labels"] == [4.0, 5.0, 6.0]
        assert payload["contextuality"]["confirmed"] is True

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "experiment", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "side1_label,side2_label,probability"

    def test_bad_labels_rejected(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["experiment", "--labels1", "1,2"])
        assert err.value.code == 2


class TestSample:
    def test_byte_identical_reruns(self, capsys):
        code1, out1, _ = run_cli(
            capsys, "sample", "--shots", "100000", "--seed", "42", "--format", "json"
        )
        code2, out2, _ = run_cli(
            capsys, "sample", "--shots", "100000", "--seed", "42", "--format", "json"
        )
        assert code1 == code2 == 0
        assert out1 == out2

    def test_seed_env_variable(self, capsys, monkeypatch):
        monkeypatch.setenv("QCTX_SEED", "99")
        _, env_out, _ = run_cli(capsys, "sample", "--shots", "1000", "--format", "json")
        monkeypatch.delenv("QCTX_SEED")
        _, flag_out, _ = run_cli(
            capsys, "sample", "--shots", "1000", "--seed", "99", "--format", "json"
        )
        assert env_out == flag_out

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("QCTX_SEED", "99")
        _, out, _ = run_cli(
            capsys, "sample", "--shots", "1000", "--seed", "7", "--format", "json"
        )
        assert json.loads(out)["seed"] == 7

    def test_matches_golden_tally(self, capsys):
        code, out, _ = run_cli(
            capsys, "sample", "--shots", "1000000", "--seed", "42", "--format", "json"
        )
        assert code == 0
        assert json.loads(out) == bundled.golden_tally()

    def test_rejects_zero_shots(self, capsys):
        code = main(["sample", "--shots", "0"])
        captured = capsys.readouterr()
        assert code == 2
        assert "positive" in captured.err or "positive" in captured.out

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "tally.csv"
        code, out, _ = run_cli(
            capsys,
            "sample", "--shots", "100", "--seed", "5",
            "--format", "csv", "--out", str(target),
        )
        assert code == 0
        assert out == ""
        content = target.read_text()
        assert content.startswith("side1_label,side2_label,count")


class TestVerify:
    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "verify-eq3")
        assert code == 0
        assert out.startswith("PASS")

    def test_json(self, capsys):
        code, out, _ = run_cli(capsys, "verify-eq3", "--format", "json", "--seed", "3")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["seed"] == 3

    def test_deterministic(self, capsys):
        _, out1, _ = run_cli(capsys, "verify-eq3", "--seed", "11")
        _, out2, _ = run_cli(capsys, "verify-eq3", "--seed", "11")
        assert out1 == out2


class TestDiagramCheck:
    def test_bundled_file(self, capsys, tmp_path):
        path = tmp_path / "contexts.gdl"
        path.write_text(bundled.fig1_text())
        code, out, _ = run_cli(capsys, "diagram-check", str(path))
        assert code == 0
        assert "interlink: ray d shared by red, blue" in out
        assert out.rstrip().endswith("valid")

    def test_invalid_orthogonality(self, capsys, tmp_path):
        path = tmp_path / "bad.gdl"
        path.write_text(
            "ray a = (1, 0, 0)\nray b = (1, 1, 0)\nray c = (0, 0, 1)\n"
            "context z = { a, b, c }\n"
        )
        code, out, _ = run_cli(capsys, "diagram-check", str(path))
        assert code == 1
        assert "INVALID" in out
        assert "NOT ORTHOGONAL" in out

    def test_parse_error_is_positioned(self, capsys, tmp_path):
        path = tmp_path / "broken.gdl"
        path.write_text("ray a = (1, 0\n")
        code, _, err = run_cli(capsys, "diagram-check", str(path))
        assert code == 1
        assert "line 1" in err

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "diagram-check", "/nonexistent/x.gdl")
        assert code == 2
        assert "cannot read" in err

    def test_json_format(self, capsys, tmp_path):
        path = tmp_path / "contexts.gdl"
        path.write_text(bundled.fig1_text())
        code, out, _ = run_cli(capsys, "diagram-check", str(path), "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["report"]["valid"] is True
        assert len(payload["diagram"]["rays"]) == 5


class TestReport:
    def test_all_criteria_pass(self, capsys):
        code, out, _ = run_cli(capsys, "report")
        assert code == 0
        lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
        assert len(lines) == 9
        assert all(l.startswith("PASS") for l in lines)
        assert "all criteria passed" in out

    def test_json(self, capsys):
        code, out, _ = run_cli(capsys, "report", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_passed"] is True
        assert len(payload["results"]) == 9

    def test_tolerance_override_reaches_verdict(self, capsys):
        # forbidden cells sit near 1e-33; an impossible bound flips the verdict
        code, out, _ = run_cli(
            capsys, "experiment", "--tol", "forbidden_cell=1e-40"
        )
        assert code == 1
        assert "violated" in out

    def test_unknown_tolerance_key(self, capsys):
        code = main(["report", "--tol", "nope=3"])
        captured = capsys.readouterr()
        assert code == 2
        assert "unknown tolerance" in captured.err
