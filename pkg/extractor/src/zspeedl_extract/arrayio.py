"""Writer for the toolkit's binary array wire format.

Layout (little-endian): magic "ZSPL", u32 version 1, u8 dtype tag
(1 = real32, 2 = int32), 7 reserved zero bytes, u64 rows, u64 cols,
row-major payload.
"""

import struct

import numpy as np

_HEADER = struct.Struct("<4sIB7xQQ")


def write_array(m, path):
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {m.shape}")
    if np.issubdtype(m.dtype, np.integer):
        tag, disk = 2, np.dtype("<i4")
    else:
        if not np.isfinite(m).all():
            raise ValueError(f"refusing to write non-finite values to {path}")
        tag, disk = 1, np.dtype("<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(b"ZSPL", 1, tag, m.shape[0], m.shape[1]))
        fh.write(np.ascontiguousarray(m, dtype=disk).tobytes(order="C"))
