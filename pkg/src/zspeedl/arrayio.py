"""Native binary array format.

Layout (little-endian): bytes 0-3 magic ``ZSPL``, bytes 4-7 format version
u32 = 1, byte 8 dtype tag (1 = real32, 2 = int32), bytes 9-15 reserved zero,
bytes 16-23 rows u64, bytes 24-31 cols u64, then the payload in row-major
order. Values are stored 32-bit on disk and widened to 64-bit in memory.
"""

import struct

import numpy as np

from .errors import DataError, FormatError

MAGIC = b"ZSPL"
VERSION = 1
DTYPE_REAL32 = 1
DTYPE_INT32 = 2

_HEADER = struct.Struct("<4sIB7xQQ")
HEADER_SIZE = _HEADER.size  # 32 bytes

_DISK_DTYPES = {DTYPE_REAL32: np.dtype("<f4"), DTYPE_INT32: np.dtype("<i4")}


def array_to_bytes(m, where="array"):
    """Encode a 2-D array; floats quantize to real32, ints to int32."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise DataError(f"expected a 2-D array, got shape {m.shape}")
    if np.issubdtype(m.dtype, np.integer) or np.issubdtype(m.dtype, np.bool_):
        tag = DTYPE_INT32
    elif np.issubdtype(m.dtype, np.floating):
        if not np.isfinite(m).all():
            raise DataError(f"refusing to encode non-finite values ({where})")
        tag = DTYPE_REAL32
    else:
        raise DataError(f"unsupported array dtype {m.dtype} ({where})")

    payload = np.ascontiguousarray(m, dtype=_DISK_DTYPES[tag])
    header = _HEADER.pack(MAGIC, VERSION, tag, m.shape[0], m.shape[1])
    return header + payload.tobytes(order="C")


def write_array(m, path):
    """Write a 2-D array to ``path``; byte-deterministic for identical input."""
    data = array_to_bytes(m, where=str(path))
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise DataError(f"cannot write array file {path}: {exc}") from exc


def bytes_to_array(raw, path="<bytes>"):
    """Decode array bytes to float64 (real32 tag) or int64 (int32 tag)."""
    if len(raw) < HEADER_SIZE:
        raise FormatError("truncated", f"{path}: file shorter than the {HEADER_SIZE}-byte header")
    magic, version, tag, rows, cols = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError("bad_magic", f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError("bad_version", f"{path}: unsupported format version {version}")
    if tag not in _DISK_DTYPES:
        raise FormatError("bad_dtype", f"{path}: unknown dtype tag {tag}")

    disk = _DISK_DTYPES[tag]
    expected = HEADER_SIZE + rows * cols * disk.itemsize
    if len(raw) != expected:
        raise FormatError(
            "truncated",
            f"{path}: payload is {len(raw) - HEADER_SIZE} bytes, expected {expected - HEADER_SIZE}",
        )
    values = np.frombuffer(raw, dtype=disk, offset=HEADER_SIZE).reshape(rows, cols)
    if tag == DTYPE_REAL32:
        out = values.astype(np.float64)
        if not np.isfinite(out).all():
            raise FormatError("non_finite", f"{path}: payload contains NaN or Inf")
        return out
    return values.astype(np.int64)


def read_array(path):
    """Read an array file back as float64 (real32 tag) or int64 (int32 tag)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read array file {path}: {exc}") from exc
    return bytes_to_array(raw, path=str(path))
