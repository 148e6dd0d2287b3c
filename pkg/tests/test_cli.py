import csv
import io
from pathlib import Path

import pytest
from typer.testing import CliRunner

from main import EXIT_ERROR, EXIT_FAILED, EXIT_OK, app
from nestcat.harness.serializer import TRIAL_COLUMNS

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

runner = CliRunner()


@pytest.mark.parametrize("name", ["hamming7-verify.ini", "hamming7-subcodes.ini", "rs7-inner-pair.ini"])
def test_verify_passes(name):
    result = runner.invoke(app, ["verify", "--config", str(CONFIGS / name)])
    assert result.exit_code == EXIT_OK, result.output
    assert "result: PASS" in result.output
    assert "FAIL" not in result.output


def test_verify_reports_failed_clause():
    result = runner.invoke(app, ["verify", "--config", str(CONFIGS / "hamming7-sabotaged.ini")])
    assert result.exit_code == EXIT_FAILED
    assert "(iii) FAIL" in result.output


def test_verify_malformed_description(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[outer]\nn = 7\ng = 1\n")
    result = runner.invoke(app, ["verify", "--config", str(bad)])
    assert result.exit_code == EXIT_ERROR


def test_verify_missing_file(tmp_path):
    result = runner.invoke(app, ["verify", "--config", str(tmp_path / "nope.ini")])
    assert result.exit_code == EXIT_ERROR


def test_bounds_to_file(tmp_path):
    out = tmp_path / "gp.csv"
    result = runner.invoke(app, ["bounds", "gp", "--p", "0.1", "--points", "11", "--out", str(out)])
    assert result.exit_code == EXIT_OK, result.output
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["x", "raw_curve", "envelope"]
    assert len(rows) == 12
    assert rows[-1][0] == "0.500000"


def test_bounds_to_stdout():
    result = runner.invoke(app, ["bounds", "wz", "--p", "0.2", "--points", "5"])
    assert result.exit_code == EXIT_OK
    lines = result.output.strip().splitlines()
    assert lines[0] == "x,raw_curve,envelope"
    assert len(lines) == 6
    assert lines[-1].startswith("0.500000,")


@pytest.mark.parametrize("p", ["0.7", "0.5"])
def test_bounds_rejects_bad_probability(p):
    result = runner.invoke(app, ["bounds", "gp", "--p", p])
    assert result.exit_code == EXIT_ERROR


def test_run_is_reproducible(tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        result = runner.invoke(
            app, ["run", "--config", str(CONFIGS / "hamming7-ccsi.ini"), "--trials", "30", "--out", str(out)]
        )
        assert result.exit_code == EXIT_OK, result.output
        assert "encoder_error_rate" in result.output
        assert (tmp_path / (Path(name).stem + ".summary.csv")).exists()
        outputs.append(out.read_text())
    assert outputs[0] == outputs[1]
    assert len(outputs[0].splitlines()) == 31


def test_run_creates_output_directory(tmp_path):
    out = tmp_path / "nested" / "dir" / "scsi.csv"
    result = runner.invoke(
        app, ["run", "--config", str(CONFIGS / "hamming7-scsi.ini"), "--trials", "3", "--seed", "5", "--out", str(out)]
    )
    assert result.exit_code == EXIT_OK, result.output
    assert out.exists()


def test_run_rejects_code_only_description():
    result = runner.invoke(app, ["run", "--config", str(CONFIGS / "hamming7-verify.ini"), "--trials", "1"])
    assert result.exit_code == EXIT_ERROR


def test_run_to_stdout_keeps_csv_clean(tmp_path):
    text = (CONFIGS / "hamming7-scsi.ini").read_text()
    config = tmp_path / "scsi.ini"
    config.write_text("\n".join(line for line in text.splitlines() if not line.startswith("output")) + "\n")
    results = [runner.invoke(app, ["run", "--config", str(config), "--trials", "12"]) for _ in range(2)]
    for result in results:
        assert result.exit_code == EXIT_OK, result.output
        assert "encoder_error_rate" in result.stderr
    assert results[0].stdout == results[1].stdout
    rows = list(csv.reader(io.StringIO(results[0].stdout)))
    assert tuple(rows[0]) == TRIAL_COLUMNS
    assert len(rows) == 13
