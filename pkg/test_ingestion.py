"""
Tests for Matrix Market, Puiseux text and CSV ingestion and emission.
"""

import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from mpls.core.errors import FormatError
from mpls.handlers.ingestion import (
    format_puiseux,
    parse_puiseux,
    read_maxplus_mm,
    read_numeric_mm,
    read_puiseux,
    read_scores_csv,
    write_csv,
    write_maxplus_mm,
    write_numeric_mm,
    write_puiseux,
    write_record,
    write_scores_csv,
)
from mpls.handlers.puiseux import valuation
from mpls.models.experiment import ExperimentRecord
from mpls.models.maxplus import BOTTOM, MaxPlusMatrix
from mpls.models.puiseux import PuiseuxMatrix, PuiseuxSeries
from mpls.models.scores import ScoreKind, ScoreVector


def test_maxplus_matrix_market_keeps_zero_and_bottom(tmp_path):
    m = MaxPlusMatrix.from_dense([[0.0, BOTTOM], [1.0 / 3.0, -2.5], [BOTTOM, 7.0]])
    path = write_maxplus_mm(tmp_path / "m.mtx", m)
    back = read_maxplus_mm(path)
    assert back.storage == "sparse"
    np.testing.assert_array_equal(back.to_dense(), m.to_dense())


def test_read_numeric_example(data_dir, example_a):
    a = read_numeric_mm(data_dir / "example_1_2.mtx")
    np.testing.assert_array_equal(a, example_a)


def test_numeric_matrix_market_is_exact(tmp_path):
    a = np.random.default_rng(0).normal(size=(5, 3))
    np.testing.assert_array_equal(read_numeric_mm(write_numeric_mm(tmp_path / "a.mtx", a)), a)


def test_unreadable_matrix_market(tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("not a matrix\n")
    with pytest.raises(FormatError):
        read_numeric_mm(path)


def test_read_puiseux_example(data_dir):
    m = read_puiseux(data_dir / "example_4_6.txt")
    assert m.shape == (3, 2)
    np.testing.assert_array_equal(valuation(m).to_dense(), [[3, 3], [0, 2], [1, 0]])


def test_puiseux_text_round_trip(tmp_path):
    m = PuiseuxMatrix(
        [
            [PuiseuxSeries([(Fraction(-3, 2), 2 - 1j), (1, 0.1)]), PuiseuxSeries.monomial(1, -2)],
            [PuiseuxSeries.constant(3.5), PuiseuxSeries([(Fraction(1, 3), 1j)])],
        ]
    )
    assert parse_puiseux(format_puiseux(m)).rows() == m.rows()
    assert read_puiseux(write_puiseux(tmp_path / "m.txt", m)).rows() == m.rows()


@pytest.mark.parametrize(
    "text, line",
    [
        ("1 1 0:1,0\n1 1 0:2,0\n", 2),
        ("1 1 0:1,0\n\n1 2 x:1,0\n", 3),
        ("# comment\n1 1 0:1\n", 2),
        ("1 1 0:0,0\n", 1),
        ("1 1\n", 1),
        ("0 1 0:1,0\n", 1),
    ],
)
def test_puiseux_format_errors_report_line(text, line):
    with pytest.raises(FormatError) as excinfo:
        parse_puiseux(text)
    assert excinfo.value.line == line


def test_puiseux_missing_entries():
    with pytest.raises(FormatError, match="missing"):
        parse_puiseux("1 1 0:1,0\n2 2 0:1,0\n")
    with pytest.raises(FormatError):
        parse_puiseux("% only comments\n")


def test_scores_csv_round_trip(tmp_path):
    values = np.array([0.0, -1.0 / 3.0, -2.0, -1e-17])
    path = write_scores_csv(ScoreVector(kind=ScoreKind.MAXPLUS, values=values), tmp_path / "scores.csv")
    assert path.read_text().splitlines()[0] == "row_index,score"
    np.testing.assert_array_equal(read_scores_csv(path), values)


def test_scores_csv_wrong_header(tmp_path):
    path = write_csv(pd.DataFrame({"row": [1], "score": [0.5]}), tmp_path / "bad.csv")
    with pytest.raises(FormatError):
        read_scores_csv(path)


def test_write_record(tmp_path):
    record = ExperimentRecord(
        kind="scores",
        seed=4,
        config={"n": 3},
        tables={"scores": pd.DataFrame({"row": [1, 2], "value": [0.1, 0.9]})},
        summary={"rank": np.int64(2)},
        streams={"phase": 12},
        matrices={"matrix": np.eye(2)},
    )
    paths = write_record(record, tmp_path / "out")
    assert sorted(path.name for path in paths) == ["matrix.mtx", "run.json", "scores.csv"]

    manifest = json.loads((tmp_path / "out" / "run.json").read_text())
    assert manifest["kind"] == "scores"
    assert manifest["seed"] == 4
    assert manifest["summary"] == {"rank": 2}
    assert manifest["files"] == ["matrix.mtx", "scores.csv"]
    assert {"numpy", "scipy", "pandas", "mpls"} <= set(manifest["versions"])
    assert len(manifest["payload_sha256"]) == 64
    assert "created_at" in manifest
