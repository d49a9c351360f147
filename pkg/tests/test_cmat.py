"""
Test file for functions contained
within cmat.py
"""

import numpy as np
import pytest

import spectraltools


def test_format_cmat_layout():
    """
    Header line, then one 're im' line per entry
    in row-major order.
    """
    text = spectraltools.format_cmat(np.array([[1 + 2j, 3], [4j, -5.5]]))
    lines = text.strip().split("\n")
    assert lines[0] == "# 2 2"
    assert len(lines) == 5
    first = [float(v) for v in lines[1].split()]
    second = [float(v) for v in lines[2].split()]
    assert first == [1.0, 2.0]
    assert second == [3.0, 0.0]
    # 17 significant digits
    assert lines[1].split()[0] == "1.0000000000000000e+00"


def test_cmat_text_roundtrip_is_exact():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    parsed = spectraltools.parse_cmat(spectraltools.format_cmat(M))
    np.testing.assert_array_equal(parsed, M)


@pytest.mark.parametrize(
    "text",
    [
        "1 2\n3 4\n",  # no header
        "# 2 2\n1 0\n2 0\n3 0\n",  # too few entries
        "# 1 1\n1 2 3\n",  # three fields
        "# two 2\n1 0\n",  # non-integer header
        "# 1 1\n1 nan\n",  # non-finite entry
    ],
)
def test_parse_cmat_rejects_malformed(text):
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.parse_cmat(text)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("# 3 1\n1 0\n0 1\n-1 0\n", [1, 1j, -1]),
        ("1 0\n0 1\n-1 0\n", [1, 1j, -1]),
    ],
)
def test_parse_vector_with_and_without_header(text, expected):
    np.testing.assert_array_equal(spectraltools.parse_vector(text), expected)


def test_file_roundtrip(tmp_path):
    M = np.array([[1 + 1j, 2], [3, 4 - 1j]])
    v = np.array([0.5, -0.5j, 2])
    spectraltools.write_cmat(tmp_path / "m.cmat", M)
    spectraltools.write_vector(tmp_path / "v.txt", v)
    np.testing.assert_array_equal(spectraltools.read_cmat(tmp_path / "m.cmat"), M)
    np.testing.assert_array_equal(spectraltools.read_vector(tmp_path / "v.txt"), v)


def test_read_missing_file_raises_os_error(tmp_path):
    with pytest.raises(OSError):
        spectraltools.read_cmat(tmp_path / "missing.cmat")


@pytest.mark.parametrize("reader", [spectraltools.read_cmat, spectraltools.read_vector])
def test_read_undecodable_file_is_invalid_input(reader, tmp_path):
    path = tmp_path / "bad.cmat"
    path.write_bytes(b"# 1 1\n\xff\xfe 0\n")
    with pytest.raises(spectraltools.InvalidArgumentError):
        reader(path)
