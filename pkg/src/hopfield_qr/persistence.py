"""PBM image files, synthetic QR-like patterns, and the binary bank file.

Bank file layout (all integers unsigned 32-bit little-endian)::

    "HPBK" | version | rows | cols | k
    k x (n*n float64 LE, row-major)
    m | m x (id_len | id utf-8 bytes | network index)
    CRC-32 of every preceding byte

Manifest records are written sorted by id so that equal banks serialize to
identical bytes.
"""

from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path

import numpy as np

from .core import BinaryImage, NetworkBank
from .errors import CorruptionError, FormatError, ParameterError, ParseError

BANK_MAGIC = b"HPBK"
BANK_VERSION = 1
_HEADER = struct.Struct("<4sIIII")
_U32 = struct.Struct("<I")

_WS = b" \t\n\r\v\f"


# ---------------------------------------------------------------------------
# PBM

class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in _WS:
                self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"expected {what}", start)
        value = int(self.data[start:self.pos])
        if value < 1:
            raise ParseError(f"{what} must be positive, got {value}", start)
        return value


def parse_pbm(data: bytes) -> BinaryImage:
    """Decode a P1 (ASCII) or P4 (packed) bitmap; 1 = black = dark."""
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise FormatError(f"unsupported bitmap magic {magic!r}; only P1 and P4 are read")
    cur = _Cursor(data)
    cur.pos = 2
    if cur.pos < len(data) and data[cur.pos:cur.pos + 1] not in _WS + b"#":
        raise ParseError("missing whitespace after magic number", cur.pos)
    width = cur.integer("width")
    height = cur.integer("height")

    if magic == b"P1":
        out = np.empty(width * height, dtype=np.uint8)
        for idx in range(out.size):
            cur.skip_space()
            c = data[cur.pos:cur.pos + 1]
            if c not in (b"0", b"1"):
                what = "truncated raster" if not c else f"bad pixel {c!r}"
                raise ParseError(what, cur.pos)
            out[idx] = c == b"1"
            cur.pos += 1
        return BinaryImage(out.reshape(height, width))

    if cur.pos >= len(data) or data[cur.pos:cur.pos + 1] not in _WS:
        raise ParseError("expected a single whitespace byte before the raster", cur.pos)
    start = cur.pos + 1
    stride = (width + 7) // 8
    need = stride * height
    raster = data[start:start + need]
    if len(raster) < need:
        raise ParseError(f"truncated raster: {len(raster)} of {need} bytes", start + len(raster))
    bits = np.unpackbits(np.frombuffer(raster, dtype=np.uint8).reshape(height, stride), axis=1)
    return BinaryImage(bits[:, :width])


def format_pbm(img: BinaryImage, fmt: str = "P4") -> bytes:
    header = f"{fmt}\n{img.cols} {img.rows}\n".encode("ascii")
    if fmt == "P4":
        return header + np.packbits(img.pixels, axis=1).tobytes()
    if fmt == "P1":
        lines = []
        for row in img.pixels:
            digits = [str(int(v)) for v in row]
            # keep lines under 70 characters
            for start in range(0, len(digits), 35):
                lines.append(" ".join(digits[start:start + 35]))
        return header + ("\n".join(lines) + "\n").encode("ascii")
    raise ParameterError(f"unknown bitmap format {fmt!r}; use P1 or P4")


def read_pbm(path) -> BinaryImage:
    return parse_pbm(Path(path).read_bytes())


def write_pbm(img: BinaryImage, path, fmt: str = "P4") -> None:
    Path(path).write_bytes(format_pbm(img, fmt))


# ---------------------------------------------------------------------------
# synthetic patterns

def _finder() -> np.ndarray:
    m = np.ones((7, 7), dtype=np.uint8)
    m[1:6, 1:6] = 0
    m[2:5, 2:5] = 1
    return m


def synth_pattern(rows: int, cols: int, density: float = 0.5, finder_corners: bool = False,
                  seed=None) -> BinaryImage:
    """Random Bernoulli(density) image, optionally stamped with QR finder motifs.

    The three 7x7 motifs (with a light one-pixel separator) go at the
    top-left, top-right and bottom-left corners when the image is at least
    15x15.
    """
    if rows < 1 or cols < 1:
        raise ParameterError("rows and cols must be positive")
    if not 0.0 <= density <= 1.0:
        raise ParameterError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    px = (rng.random((rows, cols)) < density).astype(np.uint8)
    if finder_corners and rows >= 15 and cols >= 15:
        motif = _finder()
        for r0, c0 in ((0, 0), (0, cols - 7), (rows - 7, 0)):
            sr = slice(max(r0 - 1, 0), min(r0 + 8, rows))
            sc = slice(max(c0 - 1, 0), min(c0 + 8, cols))
            px[sr, sc] = 0
            px[r0:r0 + 7, c0:c0 + 7] = motif
    return BinaryImage(px)


def synth_patterns(count: int, rows: int, cols: int, density: float = 0.5,
                   finder_corners: bool = False, seed=0) -> list[BinaryImage]:
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    seeds = root.spawn(count)
    return [synth_pattern(rows, cols, density, finder_corners, s) for s in seeds]


# ---------------------------------------------------------------------------
# bank file

def save_bank(bank: NetworkBank, path) -> None:
    crc = 0
    with open(path, "wb") as fh:
        def put(chunk: bytes):
            nonlocal crc
            fh.write(chunk)
            crc = zlib.crc32(chunk, crc)

        put(_HEADER.pack(BANK_MAGIC, BANK_VERSION, bank.rows, bank.cols, bank.k))
        for w in bank.weights:
            put(np.ascontiguousarray(w, dtype="<f8").tobytes())
        records = sorted(bank.assignment.items())
        put(_U32.pack(len(records)))
        for pid, idx in records:
            raw = pid.encode("utf-8")
            put(_U32.pack(len(raw)) + raw + _U32.pack(idx))
        fh.write(_U32.pack(crc))


class _Reader:
    def __init__(self, fh):
        self.fh = fh
        self.offset = 0
        self.crc = 0

    def take(self, size: int, what: str, checksum: bool = True) -> bytes:
        chunk = self.fh.read(size)
        if len(chunk) < size:
            raise ParseError(f"truncated bank file while reading {what}", self.offset + len(chunk))
        if checksum:
            self.crc = zlib.crc32(chunk, self.crc)
        self.offset += size
        return chunk

    def u32(self, what: str) -> int:
        return _U32.unpack(self.take(4, what))[0]


def load_bank(path) -> NetworkBank:
    with open(path, "rb") as fh:
        rd = _Reader(fh)
        magic, version, rows, cols, k = _HEADER.unpack(rd.take(_HEADER.size, "header"))
        if magic != BANK_MAGIC:
            raise FormatError(f"{os.fspath(path)}: not a bank file (magic {magic!r})")
        if version != BANK_VERSION:
            raise FormatError(f"{os.fspath(path)}: unsupported bank version {version}")
        if rows < 1 or cols < 1 or k < 1:
            raise ParseError(f"invalid geometry rows={rows} cols={cols} k={k}", 8)
        n = rows * cols
        payload_end = _HEADER.size + k * n * n * 8
        size = os.fstat(fh.fileno()).st_size
        if payload_end > size:
            raise ParseError(f"truncated bank file: header promises {payload_end} weight bytes, file has {size}", size)
        weights = []
        for idx in range(k):
            raw = rd.take(n * n * 8, f"weights of network {idx}")
            weights.append(np.frombuffer(raw, dtype="<f8").reshape(n, n))
        m = rd.u32("manifest count")
        assignment = {}
        for _ in range(m):
            at = rd.offset
            raw = rd.take(rd.u32("id length"), "pattern id")
            try:
                pid = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise ParseError("pattern id is not valid UTF-8", at + 4) from None
            net = rd.u32("network index")
            if net >= k:
                raise ParseError(f"pattern {pid!r} assigned to network {net} of {k}", rd.offset - 4)
            if pid in assignment:
                raise ParseError(f"duplicate pattern id {pid!r}", at)
            assignment[pid] = net
        expected = rd.crc
        stored = _U32.unpack(rd.take(4, "checksum", checksum=False))[0]
        if fh.read(1):
            raise ParseError("trailing bytes after checksum", rd.offset)
    if stored != expected:
        raise CorruptionError(f"{os.fspath(path)}: checksum mismatch (stored {stored:08x}, computed {expected:08x})")
    return NetworkBank(rows, cols, tuple(weights), assignment)


def bank_file_size(bank: NetworkBank) -> int:
    manifest = 4 + sum(8 + len(pid.encode("utf-8")) for pid in bank.assignment)
    return _HEADER.size + bank.k * bank.n * bank.n * 8 + manifest + 4
