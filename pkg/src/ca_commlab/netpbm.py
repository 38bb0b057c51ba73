"""Raw PBM (P4) and PGM (P5) export for value matrices.

State 0 renders white and higher states darker, so fooling structure is
visible the same way in both formats.
"""

from __future__ import annotations

import numpy as np


def pbm_bytes(matrix: np.ndarray) -> bytes:
    """Raw P4 bitmap; entries must be 0/1, a 1 is a black pixel."""
    arr = np.asarray(matrix, dtype=np.uint8)
    if arr.ndim != 2:
        raise ValueError("matrix must be 2-D")
    if arr.max(initial=0) > 1:
        raise ValueError("PBM needs binary entries; use PGM for more states")
    h, w = arr.shape
    packed = np.packbits(arr, axis=1)
    return b"P4\n%d %d\n" % (w, h) + packed.tobytes()


def pgm_bytes(matrix: np.ndarray, states: int) -> bytes:
    """Raw P5 graymap with maxval states-1; state s renders as states-1-s."""
    if not (2 <= states <= 256):
        raise ValueError("PGM export supports 2..256 states")
    arr = np.asarray(matrix, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("matrix must be 2-D")
    if arr.min(initial=0) < 0 or arr.max(initial=0) >= states:
        raise ValueError("entry out of state range")
    h, w = arr.shape
    maxval = states - 1
    gray = (maxval - arr).astype(np.uint8)
    return b"P5\n%d %d\n%d\n" % (w, h, maxval) + gray.tobytes()


def _read_header(data: bytes, magic: bytes, fields: int) -> tuple[list[int], int]:
    if not data.startswith(magic):
        raise ValueError(f"not a {magic.decode()} file")
    pos = len(magic)
    vals: list[int] = []
    while len(vals) < fields:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        vals.append(int(data[start:pos]))
    return vals, pos + 1  # single whitespace after the last header field


def read_pbm(data: bytes) -> np.ndarray:
    (w, h), pos = _read_header(data, b"P4", 2)
    row_bytes = (w + 7) // 8
    raw = np.frombuffer(data[pos : pos + h * row_bytes], dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(h, row_bytes), axis=1)[:, :w]
    return bits.astype(np.uint8)


def read_pgm(data: bytes) -> tuple[np.ndarray, int]:
    """Returns (matrix of states, state count); inverts the gray convention."""
    (w, h, maxval), pos = _read_header(data, b"P5", 3)
    if maxval > 255:
        raise ValueError("two-byte PGM not supported")
    raw = np.frombuffer(data[pos : pos + h * w], dtype=np.uint8).reshape(h, w)
    return (maxval - raw.astype(np.int64)).astype(np.uint8), maxval + 1


def write_matrix_image(matrix: np.ndarray, states: int, path: str) -> None:
    """PBM for binary matrices, PGM otherwise, chosen by the state count."""
    data = pbm_bytes(matrix) if states == 2 else pgm_bytes(matrix, states)
    with open(path, "wb") as fh:
        fh.write(data)
