from pathlib import Path

import numpy as np
import pytest

from ultraext import MatrixFormatError, random_metric, subdominant_ultrametric
from ultraext.textio import format_matrix, format_subset, parse_matrix, parse_subset

BAD = Path(__file__).parent / "fixtures" / "bad"


def test_parse_simple():
    m = parse_matrix("2\n0 1\n1 0\n")
    assert m.tolist() == [[0, 1], [1, 0]]


def test_blank_trailing_lines_allowed():
    assert parse_matrix("1\n0\n\n  \n").tolist() == [[0]]


@pytest.mark.parametrize("name", [
    "trailing_garbage", "short_row", "bad_count", "bad_number", "nan_entry", "empty", "missing_row",
])
def test_format_errors(name):
    with pytest.raises(MatrixFormatError):
        parse_matrix((BAD / f"{name}.txt").read_text())


def test_error_names_line():
    with pytest.raises(MatrixFormatError) as exc:
        parse_matrix("2\n0 x\n1 0\n")
    assert exc.value.line == 2


def test_twelve_significant_digits():
    text = format_matrix(np.array([[0, 1 / 3], [1 / 3, 0]]))
    assert text.splitlines()[1] == "0 0.333333333333"
    assert format_matrix(np.array([[0, 2.0], [2.0, 0]])).splitlines()[1] == "0 2"


@pytest.mark.parametrize("seed", range(5))
def test_round_trip_is_a_fixed_point(seed):
    for m in (random_metric(7, seed), subdominant_ultrametric(random_metric(7, seed))):
        text = format_matrix(m)
        again = parse_matrix(text)
        assert format_matrix(again) == text
        np.testing.assert_allclose(again, m.dist, rtol=1e-11)


def test_subset_format():
    assert parse_subset("3 1 4\n") == [3, 1, 4]
    assert parse_subset(format_subset([0, 2])) == [0, 2]
    for bad in ("", "\n", "1 2\n3\n", "1 b\n", "1.5\n"):
        with pytest.raises(MatrixFormatError):
            parse_subset(bad)
