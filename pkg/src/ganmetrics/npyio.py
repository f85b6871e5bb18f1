"""Bit-exact NPY array file ingestion and emission, plus a CSV fallback.

The writer emits canonical version-1 NPY: magic ``\\x93NUMPY``, version
``(1, 0)``, a 2-byte little-endian header length, and an ASCII header dict
padded with spaces so the whole preamble is a multiple of 64 bytes and ends
in a newline.  Only little-endian float32/float64 payloads of 2-D shape are
accepted; non-finite values are rejected at ingestion.
"""

from __future__ import annotations

import ast
import hashlib
import os
import struct

import numpy as np

from .errors import InputError, NpyFormatError

_MAGIC = b"\x93NUMPY"
_SUPPORTED_DESCR = {"<f4": np.dtype("<f4"), "<f8": np.dtype("<f8")}
_HEADER_ALIGN = 64


def _validate_finite(arr: np.ndarray, path: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        r, c = np.argwhere(~np.isfinite(arr))[0]
        raise InputError(f"{path}: non-finite value at row {r}, column {c}")
    return arr


def read_npy(path) -> np.ndarray:
    """Parse an NPY file into a 2-D float matrix, validating every byte."""
    path = os.fspath(path)
    with open(path, "rb") as fh:
        data = fh.read()

    if len(data) < 10 or data[:6] != _MAGIC:
        raise NpyFormatError(f"{path}: bad magic bytes, not an NPY file")
    major, minor = data[6], data[7]
    if (major, minor) == (1, 0):
        (header_len,) = struct.unpack("<H", data[8:10])
        header_start = 10
    elif (major, minor) == (2, 0):
        if len(data) < 12:
            raise NpyFormatError(f"{path}: truncated version-2 preamble")
        (header_len,) = struct.unpack("<I", data[8:12])
        header_start = 12
    else:
        raise NpyFormatError(f"{path}: unsupported NPY version {major}.{minor}")

    payload_start = header_start + header_len
    if len(data) < payload_start:
        raise NpyFormatError(f"{path}: header length {header_len} overruns the file")
    header_text = data[header_start:payload_start]
    try:
        header = ast.literal_eval(header_text.decode("ascii").strip())
    except (UnicodeDecodeError, ValueError, SyntaxError) as exc:
        raise NpyFormatError(f"{path}: unparseable header: {exc}") from exc
    if not isinstance(header, dict) or set(header) != {"descr", "fortran_order", "shape"}:
        raise NpyFormatError(f"{path}: header must declare descr, fortran_order, shape")

    descr = header["descr"]
    if descr not in _SUPPORTED_DESCR:
        raise NpyFormatError(
            f"{path}: unsupported dtype {descr!r} (only '<f4' and '<f8' are accepted)"
        )
    dtype = _SUPPORTED_DESCR[descr]
    shape = header["shape"]
    if (
        not isinstance(shape, tuple)
        or len(shape) != 2
        or not all(isinstance(s, int) and s >= 1 for s in shape)
    ):
        raise NpyFormatError(f"{path}: shape must be a 2-D tuple of positive ints, got {shape!r}")
    fortran = header["fortran_order"]
    if not isinstance(fortran, bool):
        raise NpyFormatError(f"{path}: fortran_order must be a boolean")

    n, d = shape
    expected = n * d * dtype.itemsize
    actual = len(data) - payload_start
    if actual != expected:
        raise NpyFormatError(
            f"{path}: payload is {actual} bytes but shape {shape} needs {expected}"
        )
    flat = np.frombuffer(data, dtype=dtype, offset=payload_start)
    arr = flat.reshape((n, d), order="F" if fortran else "C")
    arr = np.ascontiguousarray(arr)
    return _validate_finite(arr, path)


def write_npy(matrix, path, dtype: str = "float64") -> None:
    """Write a 2-D matrix as canonical version-1 NPY (deterministic bytes)."""
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError(f"can only write 2-D matrices of shape >= 1x1, got {arr.shape}")
    if dtype == "float32":
        descr, out = "<f4", np.ascontiguousarray(arr, dtype="<f4")
    elif dtype == "float64":
        descr, out = "<f8", np.ascontiguousarray(arr, dtype="<f8")
    else:
        raise ValueError(f"dtype must be 'float32' or 'float64', got {dtype!r}")
    _validate_finite(out, os.fspath(path))

    header = (
        f"{{'descr': '{descr}', 'fortran_order': False, "
        f"'shape': ({out.shape[0]}, {out.shape[1]}), }}"
    )
    unpadded = 10 + len(header) + 1
    total = ((unpadded + _HEADER_ALIGN - 1) // _HEADER_ALIGN) * _HEADER_ALIGN
    header = header + " " * (total - unpadded) + "\n"

    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(bytes((1, 0)))
            fh.write(struct.pack("<H", len(header)))
            fh.write(header.encode("ascii"))
            fh.write(out.tobytes(order="C"))
    except OSError as exc:
        raise InputError(f"cannot write {os.fspath(path)}: {exc}") from exc


def read_csv_features(path, skip_header: bool = False) -> np.ndarray:
    """Parse a comma-separated feature file into a float64 matrix.

    Rows must all have the same column count; parse failures report the
    1-based line number.
    """
    path = os.fspath(path)
    rows: list[list[float]] = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if skip_header and lineno == 1:
                continue
            cells = line.rstrip("\r\n").split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise InputError(
                    f"{path}: line {lineno} has {len(cells)} columns, expected {width}"
                )
            try:
                rows.append([float(cell) for cell in cells])
            except ValueError:
                bad = next(c for c in cells if not _is_float(c))
                raise InputError(
                    f"{path}: line {lineno}: non-numeric cell {bad!r}"
                ) from None
    if not rows:
        raise InputError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=np.float64)
    return _validate_finite(arr, path)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def content_digest(matrix) -> str:
    """sha256 digest of a matrix's dtype, shape, and row-major payload."""
    arr = np.ascontiguousarray(matrix)
    h = hashlib.sha256()
    h.update(arr.dtype.str.encode("ascii"))
    h.update(struct.pack("<qq", *arr.shape))
    h.update(arr.tobytes(order="C"))
    return "sha256:" + h.hexdigest()
