import numpy as np
import pytest

from zspeedl.arrayio import HEADER_SIZE, read_array, write_array
from zspeedl.errors import DataError, FormatError


def roundtrip(arr, path):
    write_array(arr, path)
    return read_array(path)


def test_identity_roundtrip(tmp_path):
    path = tmp_path / "eye.zspl"
    out = roundtrip(np.eye(2), path)
    np.testing.assert_array_equal(out, np.eye(2))
    # 32-byte header + 4 real32 values
    assert path.stat().st_size == HEADER_SIZE + 16


def test_empty_matrix_roundtrip(tmp_path):
    path = tmp_path / "empty.zspl"
    out = roundtrip(np.zeros((0, 0)), path)
    assert out.shape == (0, 0)
    assert path.stat().st_size == HEADER_SIZE


def test_random_roundtrip_after_quantization(tmp_path):
    rng = np.random.default_rng(7)
    m = rng.standard_normal((100, 85))
    out = roundtrip(m, tmp_path / "m.zspl")
    # equality is exact once the input is quantized to 32-bit storage
    np.testing.assert_array_equal(out, m.astype(np.float32).astype(np.float64))


def test_write_is_byte_deterministic(tmp_path):
    rng = np.random.default_rng(11)
    m = rng.standard_normal((13, 9))
    write_array(m, tmp_path / "a.zspl")
    write_array(m, tmp_path / "b.zspl")
    assert (tmp_path / "a.zspl").read_bytes() == (tmp_path / "b.zspl").read_bytes()


def test_roundtrip_many_shapes(tmp_path):
    rng = np.random.default_rng(3)
    for rows, cols in [(1, 1), (1, 1000), (1000, 1), (37, 53), (256, 64), (1000, 1000)]:
        m = rng.standard_normal((rows, cols))
        out = roundtrip(m, tmp_path / "s.zspl")
        np.testing.assert_array_equal(out, m.astype(np.float32).astype(np.float64))


def test_int_array_roundtrip(tmp_path):
    labels = np.arange(10, dtype=np.int64).reshape(-1, 1)
    out = roundtrip(labels, tmp_path / "labels.zspl")
    assert out.dtype == np.int64
    np.testing.assert_array_equal(out, labels)


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.zspl"
    write_array(np.eye(2), path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"NOPE"
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError) as err:
        read_array(path)
    assert err.value.code == "bad_magic"


def test_bad_version(tmp_path):
    path = tmp_path / "bad.zspl"
    write_array(np.eye(2), path)
    raw = bytearray(path.read_bytes())
    raw[4] = 9
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError) as err:
        read_array(path)
    assert err.value.code == "bad_version"


def test_bad_dtype_tag(tmp_path):
    path = tmp_path / "bad.zspl"
    write_array(np.eye(2), path)
    raw = bytearray(path.read_bytes())
    raw[8] = 77
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError) as err:
        read_array(path)
    assert err.value.code == "bad_dtype"


def test_truncated_payload(tmp_path):
    path = tmp_path / "bad.zspl"
    write_array(np.eye(4), path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-5])
    with pytest.raises(FormatError) as err:
        read_array(path)
    assert err.value.code == "truncated"


def test_non_finite_payload_rejected_on_read(tmp_path):
    path = tmp_path / "bad.zspl"
    write_array(np.eye(2), path)
    raw = bytearray(path.read_bytes())
    raw[HEADER_SIZE:HEADER_SIZE + 4] = np.float32("nan").tobytes()
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError) as err:
        read_array(path)
    assert err.value.code == "non_finite"


def test_non_finite_rejected_on_write(tmp_path):
    with pytest.raises(DataError):
        write_array(np.array([[np.inf, 0.0]]), tmp_path / "inf.zspl")


def test_missing_file():
    with pytest.raises(DataError):
        read_array("/nonexistent/never.zspl")
