"""Minimal RawArray reader/writer, standard library only.

Written from the byte layout alone, sharing no code with the main package,
to demonstrate that the format fits in a couple hundred lines and to serve
as the second side of cross-implementation conformance tests.

Layout: eight magic bytes b"rawarray", then little-endian u64 words
(flags, eltype, elbyte, data_length, ndims, dims...), then data_length
raw data bytes, then optional metadata to EOF.  Flag bit 0 marks
big-endian data; all other flag bits reject.  Elements follow the
dims[0]-fastest convention.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

MAGIC = b"rawarray"
NDIMS_CAP = 65535


class MiniError(Exception):
    pass


class BadMagic(MiniError):
    pass


class Truncated(MiniError):
    pass


class TruncatedData(MiniError):
    pass


class UnknownFlags(MiniError):
    pass


class ReservedType(MiniError):
    pass


class InvalidType(MiniError):
    pass


class SizeMismatch(MiniError):
    pass


class DimsTooLarge(MiniError):
    pass


class UnsupportedWidth(MiniError):
    pass


@dataclass(frozen=True)
class MiniHeader:
    flags: int
    eltype: int
    elbyte: int
    data_length: int
    dims: tuple[int, ...]

    @property
    def big_endian(self) -> bool:
        return bool(self.flags & 1)

    @property
    def count(self) -> int:
        return math.prod(self.dims)


def mini_header(eltype: int, elbyte: int, dims, big_endian: bool = False) -> MiniHeader:
    dims = tuple(int(d) for d in dims)
    return MiniHeader(1 if big_endian else 0, eltype, elbyte,
                      elbyte * math.prod(dims), dims)


def _parse_header(blob: bytes) -> MiniHeader:
    if len(blob) < 8:
        raise Truncated(f"truncated header: need 48 bytes, got {len(blob)}")
    if blob[:8] != MAGIC:
        raise BadMagic(f"bad magic {blob[:8]!r}")
    if len(blob) < 48:
        raise Truncated(f"truncated header: need 48 bytes, got {len(blob)}")
    flags, eltype, elbyte, data_length, ndims = struct.unpack_from("<5Q", blob, 8)
    if flags & ~1:
        raise UnknownFlags(f"unknown flag bits {flags:#x}")
    if eltype >= 5:
        raise ReservedType(f"reserved type code {eltype}")
    if elbyte < 1 or (eltype == 4 and elbyte % 2):
        raise InvalidType(f"bad eltype/elbyte combination {eltype}/{elbyte}")
    if ndims > NDIMS_CAP:
        raise DimsTooLarge(f"ndims {ndims} over cap {NDIMS_CAP}")
    if len(blob) < 48 + 8 * ndims:
        raise Truncated(f"truncated header: need {48 + 8 * ndims} bytes, got {len(blob)}")
    dims = struct.unpack_from(f"<{ndims}Q", blob, 48)
    if data_length != elbyte * math.prod(dims):
        raise SizeMismatch(
            f"data_length {data_length} != elbyte*prod(dims) {elbyte * math.prod(dims)}"
        )
    return MiniHeader(flags, eltype, elbyte, data_length, dims)


# --- binary128 <-> float, in plain integer arithmetic --------------------

def _quad_unpack(chunk: bytes, big_endian: bool) -> float:
    u = int.from_bytes(chunk, "big" if big_endian else "little")
    negative = bool(u >> 127)
    exponent = (u >> 112) & 0x7FFF
    mantissa = u & ((1 << 112) - 1)
    if exponent == 0x7FFF:
        if mantissa == 0:
            return -math.inf if negative else math.inf
        top52 = mantissa >> 60
        if top52 == 0:
            top52 = 1 << 51  # keep it a NaN after the narrowing
        word = ((1 if negative else 0) << 63) | (0x7FF << 52) | top52
        return struct.unpack("<d", word.to_bytes(8, "little"))[0]
    if exponent == 0:
        if mantissa == 0:
            return -0.0 if negative else 0.0
        scale = -16382 - 112
        significand = mantissa
    else:
        scale = exponent - 16383 - 112
        significand = (1 << 112) | mantissa
    try:
        value = math.ldexp(significand, scale)
    except OverflowError:
        value = math.inf
    return -value if negative else value


def _quad_pack(value: float, big_endian: bool) -> bytes:
    word = struct.unpack("<Q", struct.pack("<d", value))[0]
    negative = word >> 63
    exponent = (word >> 52) & 0x7FF
    mantissa = word & ((1 << 52) - 1)
    if exponent == 0x7FF:
        out_e, out_m = 0x7FFF, mantissa << 60
    elif exponent == 0 and mantissa == 0:
        out_e, out_m = 0, 0
    elif exponent == 0:
        # subnormal double, value = mantissa * 2^-1074; renormalize
        width = mantissa.bit_length()
        out_e = width + 15308
        out_m = (mantissa - (1 << (width - 1))) << (113 - width)
    else:
        out_e = exponent + 15360  # rebias 1023 -> 16383
        out_m = mantissa << 60
    u = (negative << 127) | (out_e << 112) | out_m
    return u.to_bytes(16, "big" if big_endian else "little")


# --- element codecs -------------------------------------------------------

def _scalar_format(eltype: int, elbyte: int) -> str | None:
    if eltype == 1:
        return {1: "b", 2: "h", 4: "i", 8: "q"}.get(elbyte)
    if eltype == 2:
        return {1: "B", 2: "H", 4: "I", 8: "Q"}.get(elbyte)
    if eltype in (3, 4):
        width = elbyte if eltype == 3 else elbyte // 2
        return {2: "e", 4: "f", 8: "d"}.get(width)
    return None


def decode_values(header: MiniHeader, data: bytes) -> list:
    """Data segment -> list of ints, floats, complex, or bytes chunks."""
    order = ">" if header.big_endian else "<"
    eltype, elbyte = header.eltype, header.elbyte
    if eltype == 0 or (eltype in (1, 2) and elbyte > 8):
        return [data[i : i + elbyte] for i in range(0, len(data), elbyte)]
    if eltype == 3 and elbyte == 16:
        return [_quad_unpack(data[i : i + 16], header.big_endian)
                for i in range(0, len(data), 16)]
    code = _scalar_format(eltype, elbyte)
    if code is None:
        raise UnsupportedWidth(f"no interpretation for eltype {eltype} elbyte {elbyte}")
    flat = [v[0] for v in struct.iter_unpack(order + code, data)]
    if eltype == 4:
        return [complex(flat[i], flat[i + 1]) for i in range(0, len(flat), 2)]
    return flat


def encode_values(header: MiniHeader, values) -> bytes:
    order = ">" if header.big_endian else "<"
    eltype, elbyte = header.eltype, header.elbyte
    if eltype == 0 or (eltype in (1, 2) and elbyte > 8):
        return b"".join(bytes(v) for v in values)
    if eltype == 3 and elbyte == 16:
        return b"".join(_quad_pack(float(v), header.big_endian) for v in values)
    code = _scalar_format(eltype, elbyte)
    if code is None:
        raise UnsupportedWidth(f"no interpretation for eltype {eltype} elbyte {elbyte}")
    if eltype == 4:
        flat = []
        for z in values:
            z = complex(z)
            flat.extend((z.real, z.imag))
        return struct.pack(f"{order}{len(flat)}{code}", *flat)
    return struct.pack(f"{order}{len(list(values))}{code}", *values)


# --- file I/O --------------------------------------------------------------

def mini_read(path) -> tuple[MiniHeader, list, bytes]:
    """Read a file into (header, decoded values, metadata bytes)."""
    with open(path, "rb") as f:
        blob = f.read()
    header = _parse_header(blob)
    start = 48 + 8 * len(header.dims)
    end = start + header.data_length
    if len(blob) < end:
        raise TruncatedData(
            f"truncated data: need {header.data_length} bytes, got {len(blob) - start}"
        )
    return header, decode_values(header, blob[start:end]), blob[end:]


def mini_write(path, header: MiniHeader, values, metadata: bytes = b"") -> None:
    """Write header + values + metadata; byte-compatible with the main
    implementation for the same logical array."""
    words = [header.flags, header.eltype, header.elbyte, header.data_length,
             len(header.dims), *header.dims]
    data = encode_values(header, values)
    if len(data) != header.data_length:
        raise SizeMismatch(
            f"encoded {len(data)} bytes, header says {header.data_length}"
        )
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack(f"<{len(words)}Q", *words))
        f.write(data)
        f.write(bytes(metadata))
