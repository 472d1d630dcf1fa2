"""Binary tensor files.

Layout (all little-endian)::

    b"TNS3" | uint32 version = 1 | uint64 m | uint64 p | uint64 n | float64[m*p*n]

The payload is slice-major: for each k, slice ``A[:, :, k]`` row by row.
"""
from __future__ import annotations

import struct

import numpy as np

from .errors import TensorFileError

MAGIC = b"TNS3"
VERSION = 1
_HEADER = struct.Struct("<4sIQQQ")


def tensor_to_bytes(A) -> bytes:
    A = np.asarray(A, dtype=float)
    if A.ndim != 3:
        raise ValueError(f"expected a third-order tensor, got shape {A.shape}")
    m, p, n = A.shape
    payload = np.ascontiguousarray(A.transpose(2, 0, 1), dtype="<f8").tobytes()
    return _HEADER.pack(MAGIC, VERSION, m, p, n) + payload


def tensor_from_bytes(buf: bytes) -> np.ndarray:
    if len(buf) < _HEADER.size:
        raise TensorFileError(f"file too short for header ({len(buf)} bytes)")
    magic, version, m, p, n = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise TensorFileError(f"bad magic {magic!r}")
    if version != VERSION:
        raise TensorFileError(f"unsupported version {version}")
    expected = 8 * m * p * n
    got = len(buf) - _HEADER.size
    if got != expected:
        raise TensorFileError(f"payload is {got} bytes, header implies {expected}")
    data = np.frombuffer(buf, dtype="<f8", offset=_HEADER.size).astype(float)
    return data.reshape(n, m, p).transpose(1, 2, 0).copy()


def write_tensor(path, A) -> None:
    with open(path, "wb") as fh:
        fh.write(tensor_to_bytes(A))


def read_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return tensor_from_bytes(fh.read())
