"""Trace records, CSV round trips and metadata files."""

import math

import pytest

from parafw.telemetry import (
    CSV_HEADER,
    RunRecord,
    format_record,
    meta_path_for,
    read_meta,
    read_trace,
    write_meta,
    write_trace,
)


def _records():
    return [
        RunRecord(0, 10.0, 1.0, 9.0, 9.0, 100.0, 0.01, 3, 12),
        RunRecord(1, 5.0, 2.0, 3.0, 3.0, 90.0, 0.01, 3, 30),
        RunRecord(5, 4.0, 0.5, 3.5, 3.0, float("nan"), 0.01, 3, 55),
        RunRecord(9, 1.0 / 3.0, 0.25, 1.0 / 3.0 - 0.25, 1.0 / 12.0, 80.0, 0.005, 6, 99),
    ]


def test_round_trip_exact(tmp_path):
    path = tmp_path / "trace.csv"
    records = _records()
    write_trace(path, records, {"k": "v"})
    assert read_trace(path) == records


def test_header_and_formatting(tmp_path):
    path = tmp_path / "trace.csv"
    write_trace(path, _records(), {})
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    # nan bound renders literally
    assert ",nan," in lines[3]
    # 17 significant digits for reals
    assert "3.3333333333333331e-01" in lines[4]


def test_strictly_increasing_iterations_enforced(tmp_path):
    bad = [_records()[0], _records()[0]]
    with pytest.raises(ValueError, match="strictly increasing"):
        write_trace(tmp_path / "x.csv", bad, {})


def test_nonincreasing_best_gap_enforced(tmp_path):
    a = RunRecord(0, 1.0, 0.0, 1.0, 1.0, float("nan"), 0.1, 1, 0)
    b = RunRecord(1, 1.0, 0.0, 2.0, 2.0, float("nan"), 0.1, 1, 0)
    with pytest.raises(ValueError, match="best_gap"):
        write_trace(tmp_path / "x.csv", [a, b], {})


def test_bad_header_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("iteration,primal\n0,1.0\n")
    with pytest.raises(ValueError, match="header"):
        read_trace(path)


def test_record_equality_treats_nan_as_equal():
    a = RunRecord(0, 1.0, 0.0, 1.0, 1.0, float("nan"), float("nan"), 1, 5)
    b = RunRecord(0, 1.0, 0.0, 1.0, 1.0, float("nan"), float("nan"), 1, 5)
    c = RunRecord(0, 1.0, 0.0, 1.0, 1.0, 2.0, float("nan"), 1, 5)
    assert a == b
    assert a != c


def test_format_record_is_parseable():
    rec = _records()[3]
    parts = format_record(rec).split(",")
    assert int(parts[0]) == 9
    assert float(parts[1]) == rec.primal
    assert math.isnan(float(parts[5])) is False


def test_meta_round_trip(tmp_path):
    path = tmp_path / "run.meta"
    write_meta(path, {"problem": "simplex-ls", "L": 424.25, "seeds": [0, 1, 2], "n": 200})
    meta = read_meta(path)
    assert meta["problem"] == "simplex-ls"
    assert float(meta["L"]) == 424.25
    assert meta["seeds"] == "0,1,2"
    assert meta["n"] == "200"


def test_meta_path_sibling():
    assert meta_path_for("out/x.csv").name == "x.meta"
