"""Little-endian binary block format for sample grids.

Layout: magic "XKGRID01" (8 bytes), dtype code (1 byte: 1 = float64,
2 = complex128), ndim as uint32, then each dimension as uint32, then the
raw array data in C order, all little-endian.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import DataError

MAGIC = b"XKGRID01"
_DTYPES = {1: np.dtype("<f8"), 2: np.dtype("<c16")}
_CODES = {np.dtype("<f8"): 1, np.dtype("<c16"): 2}


def write_grid(path, array) -> None:
    array = np.ascontiguousarray(array)
    if array.dtype.kind == "f":
        array = array.astype("<f8")
    elif array.dtype.kind == "c":
        array = array.astype("<c16")
    else:
        raise DataError(f"unsupported grid dtype {array.dtype}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<B", _CODES[array.dtype]))
        fh.write(struct.pack("<I", array.ndim))
        for dim in array.shape:
            fh.write(struct.pack("<I", dim))
        fh.write(array.tobytes(order="C"))


def read_grid(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < len(MAGIC) + 5 or not data.startswith(MAGIC):
        raise DataError("not a grid block (bad magic)")
    off = len(MAGIC)
    (code,) = struct.unpack_from("<B", data, off)
    off += 1
    if code not in _DTYPES:
        raise DataError(f"unknown grid dtype code {code}")
    (ndim,) = struct.unpack_from("<I", data, off)
    off += 4
    dims = []
    for _ in range(ndim):
        (d,) = struct.unpack_from("<I", data, off)
        off += 4
        dims.append(d)
    dtype = _DTYPES[code]
    expected = int(np.prod(dims)) * dtype.itemsize if dims else dtype.itemsize
    payload = data[off:]
    if len(payload) != expected:
        raise DataError("grid block payload size mismatch")
    return np.frombuffer(payload, dtype=dtype).reshape(dims).copy()
