import json
import re

import pytest

from lauricella import cli, reports
from lauricella.census_service import models
from lauricella.census_service.database import SessionLocal
from lauricella.errors import ParseError, ToleranceError
from lauricella.reports import AnalysisReport

EXAMPLE = "3/12,3/12,3/12,7/12"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", EXAMPLE, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["case"] == "Hyperbolic"
    assert data["cusps"] == []
    assert data["arithmetic"]["arithmetic"] is False
    assert data["discreteness"]["satisfied"] is True
    assert AnalysisReport.model_validate_json(out) == cli.analyze(EXAMPLE)


def test_analyze_parabolic_marks_hyperbolic_parts(capsys):
    code, out, _ = run(capsys, "analyze", ",".join(["1/6"] * 6), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["case"] == "Parabolic"
    assert data["cusps"].startswith("n/a")
    assert data["cover"].startswith("n/a")


def test_analyze_text_output(capsys):
    code, out, _ = run(capsys, "analyze", EXAMPLE)
    assert code == 0
    assert "case:         Hyperbolic" in out
    assert "genus:        12" in out


def test_analyze_closure_in_elliptic_case(capsys):
    code, out, _ = run(capsys, "analyze", "1/3,1/3,1/6", "--json", "--closure-bound", "10000")
    assert code == 0
    assert json.loads(out)["closure"]["finite"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", ",".join(["1/6"] * 12)],
        ["analyze", "1/2,3/"],
        ["analyze", "1/2,1/2,1/2,1/2"],
        ["analyze", "1/2,1/2,1/2,1/2,1/2"],
        ["scan", "--n", "2", "--max-denom", "6", "--filter", "cocompact"],
        ["periods", "--weights", "1/4,1/4,1/4,1/4", "--points", "0,2,1,3"],
    ],
)
def test_validation_errors_exit_with_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_closure_bound_exit_code(capsys):
    code, _, err = run(capsys, "monodromy", "--weights", EXAMPLE, "--closure", "--bound", "20")
    assert code == 4
    assert "closure exceeded 20" in err


def test_numerical_failure_exit_code(capsys, monkeypatch):
    def failing(*args, **kwargs):
        raise ToleranceError("closure identity violated")

    monkeypatch.setattr(cli, "periods_report", failing)
    code, _, err = run(capsys, "periods", "--weights", EXAMPLE, "--points", "0,1,2,3")
    assert code == 3
    assert "closure identity violated" in err


def test_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv("LAURICELLA_THREADS", "abc")
    code, _, err = run(capsys, "analyze", EXAMPLE)
    assert code == 2
    assert "LAURICELLA_THREADS" in err


def test_parse_points():
    assert cli.parse_points("0, 1.5,3") == [0.0, 1.5, 3.0]
    with pytest.raises(ParseError) as info:
        cli.parse_points("0,1,x")
    assert info.value.position == 4


def test_periods_json(capsys):
    code, out, _ = run(capsys, "periods", "--weights", "1/4,1/4,1/4,1/4", "--points", "0,1,2,3", "--json")
    assert code == 0
    data = json.loads(out)
    assert len(data["F"]) == 3
    assert data["F_inf"] is None
    assert data["residuals"]["parabolic_pi"] <= 1e-8
    assert data["residuals"]["jacobian_rank"] == 2


def test_monodromy_json(capsys):
    code, out, _ = run(capsys, "monodromy", "--weights", "1/3,1/3,1/6", "--closure", "--exact")
    assert code == 0
    data = json.loads(out)
    assert len(data["generators"]) == 2
    assert all(g["preserves_form"] for g in data["generators"])
    assert data["generators"][0]["matrix"]["exact_entries"] is not None
    assert data["closure"]["finite"] is True


def test_scan_to_file(capsys, tmp_path):
    path = tmp_path / "census.csv"
    code, out, err = run(capsys, "scan", "--n", "1", "--max-denom", "4", "--out", str(path))
    assert code == 0
    assert out == ""
    assert "6 entries" in err
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "weights,case,INT,half-INT,cusps,arithmetic,witnesses"
    assert len(lines) == 7


def test_scan_store(capsys):
    code, out, err = run(capsys, "scan", "--n", "2", "--max-denom", "6", "--filter", "hyperbolic", "--store")
    assert code == 0
    assert out.startswith("weights,case")
    assert "stored as census run" in err
    run_id = int(re.search(r"stored as census run (\d+)", err).group(1))
    db = SessionLocal()
    try:
        stored = db.query(models.CensusRun).filter(models.CensusRun.id == run_id).first()
        assert stored.entry_count == len(out.splitlines()) - 1
    finally:
        db.close()


def test_exit_code_contract():
    codes = cli.exit_codes()
    assert sorted(codes) == [0, 1, 2, 3, 4]
    assert "exit codes: 0 success" in cli.build_parser().format_help()


@pytest.mark.parametrize(
    "argv",
    [
        ["--threads", "3", "monodromy", "--weights", "1/3,1/3,1/6", "--closure"],
        ["--threads", "3", "analyze", "1/3,1/3,1/6", "--json", "--closure-bound", "10000"],
    ],
)
def test_thread_count_reaches_closure_search(capsys, monkeypatch, argv):
    seen = []
    original = reports.group_closure

    def recording(gens, bound, threads=None, **kwargs):
        seen.append(threads)
        return original(gens, bound, threads=threads, **kwargs)

    monkeypatch.setattr(reports, "group_closure", recording)
    code, _, _ = run(capsys, *argv)
    assert code == 0
    assert seen == [3]


def test_thread_count_defaults_to_setting(capsys, monkeypatch):
    monkeypatch.setenv("LAURICELLA_THREADS", "2")
    seen = []
    original = reports.group_closure

    def recording(gens, bound, threads=None, **kwargs):
        seen.append(threads)
        return original(gens, bound, threads=threads, **kwargs)

    monkeypatch.setattr(reports, "group_closure", recording)
    code, _, _ = run(capsys, "monodromy", "--weights", "1/3,1/3,1/6", "--closure")
    assert code == 0
    assert seen == [2]
