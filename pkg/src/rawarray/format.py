"""On-disk header model for RawArray files.

A RawArray file is::

    offset 0                 u64  magic        b"rawarray"
    offset 8                 u64  flags        bit 0: data is big-endian
    offset 16                u64  eltype       element type code (0..4)
    offset 24                u64  elbyte       bytes per element
    offset 32                u64  data_length  total data segment bytes
    offset 40                u64  ndims        number of dimensions
    offset 48                u64[ndims]        dimension extents
    offset 48 + 8*ndims      u8[data_length]   array data
    then                     u8[]              optional metadata, to EOF

Header words are always stored little-endian, so ``od -t uL`` introspection
reads the same numbers on every machine; the endianness flag governs the
data segment only.  All flag bits other than bit 0 are reserved and rejected
on decode: a future flag (say compression) silently ignored would hand the
caller garbage bytes, so failing loudly is the archival-safe behaviour.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

from .errors import (
    BadMagic,
    DimsTooLarge,
    InvalidType,
    Overflow,
    ReservedType,
    SizeMismatch,
    Truncated,
    UnknownFlags,
)

MAGIC = 0x7961727261776172
MAGIC_BYTES = b"rawarray"

FLAG_BIG_ENDIAN = 1
_KNOWN_FLAGS = FLAG_BIG_ENDIAN

# Element type codes.
ELTYPE_STRUCT = 0
ELTYPE_INT = 1
ELTYPE_UINT = 2
ELTYPE_FLOAT = 3
ELTYPE_COMPLEX = 4
_FIRST_RESERVED_ELTYPE = 5

ELTYPE_NAMES = {
    ELTYPE_STRUCT: "struct",
    ELTYPE_INT: "int",
    ELTYPE_UINT: "uint",
    ELTYPE_FLOAT: "float",
    ELTYPE_COMPLEX: "complex",
}

# A corrupt ndims word of ~2^64 would otherwise drive an enormous read.
NDIMS_CAP = 65535

_U64_MAX = 2**64 - 1
_WORD = struct.Struct("<Q")
_PREFIX = struct.Struct("<6Q")

HEADER_PREFIX_LEN = _PREFIX.size  # 48


def header_len(ndims: int) -> int:
    """Encoded header size in bytes for an array of rank ``ndims``."""
    return HEADER_PREFIX_LEN + 8 * ndims


def _check_elbyte(eltype: int, elbyte: int) -> None:
    # Callers range-check eltype first (the classification differs: decode
    # reports codes >= 5 as ReservedType, construction as InvalidType).
    if elbyte < 1:
        raise InvalidType(f"elbyte must be >= 1, got {elbyte} (eltype {eltype})")
    if eltype == ELTYPE_COMPLEX and elbyte % 2 != 0:
        raise InvalidType(f"complex elbyte must be even, got {elbyte}")


@dataclass(frozen=True)
class Header:
    """Decoded form of the numeric file header.

    Immutable after construction and safe to share between threads.  ``dims``
    is kept as a tuple; ndims 0 is legal and denotes a scalar whose
    data_length equals elbyte (the empty product of dims is 1).
    """

    flags: int
    eltype: int
    elbyte: int
    data_length: int
    dims: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def ndims(self) -> int:
        return len(self.dims)

    @property
    def big_endian(self) -> bool:
        return bool(self.flags & FLAG_BIG_ENDIAN)

    @property
    def element_count(self) -> int:
        return math.prod(self.dims)

    def validate(self) -> "Header":
        """Check every header invariant, raising the classified error."""
        if self.flags & ~_KNOWN_FLAGS:
            raise UnknownFlags(self.flags)
        if self.eltype >= _FIRST_RESERVED_ELTYPE:
            raise ReservedType(self.eltype)
        if self.eltype < 0:
            raise InvalidType(f"element type code must be non-negative, got {self.eltype}")
        _check_elbyte(self.eltype, self.elbyte)
        if self.ndims > NDIMS_CAP:
            raise DimsTooLarge(self.ndims, NDIMS_CAP)
        for d in self.dims:
            if not 0 <= d <= _U64_MAX:
                raise InvalidType(f"dimension extent {d} outside u64 range")
        for name, value in (
            ("flags", self.flags),
            ("eltype", self.eltype),
            ("elbyte", self.elbyte),
            ("data_length", self.data_length),
        ):
            if not 0 <= value <= _U64_MAX:
                raise InvalidType(f"{name} {value} outside u64 range")
        expected = self.elbyte * self.element_count
        if self.data_length != expected:
            raise SizeMismatch(self.data_length, expected)
        return self


def make_header(
    eltype: int, elbyte: int, dims, big_endian: bool = False
) -> Header:
    """Build a validated header, computing data_length from elbyte and dims."""
    dims = tuple(int(d) for d in dims)
    if not 0 <= eltype < _FIRST_RESERVED_ELTYPE:
        raise InvalidType(f"unknown element type code {eltype}")
    _check_elbyte(eltype, elbyte)
    if len(dims) > NDIMS_CAP:
        raise DimsTooLarge(len(dims), NDIMS_CAP)
    for d in dims:
        if d < 0:
            raise InvalidType(f"dimension extent must be non-negative, got {d}")
        if d > _U64_MAX:
            raise Overflow(f"dimension extent {d} exceeds u64 range")
    length = elbyte * math.prod(dims)
    if length > _U64_MAX:
        raise Overflow(
            f"data length {length} (elbyte {elbyte} x {math.prod(dims)} elements) "
            f"exceeds u64 range"
        )
    flags = FLAG_BIG_ENDIAN if big_endian else 0
    return Header(flags, eltype, elbyte, length, dims)


def encode_header(h: Header) -> bytes:
    """Serialize a header to its exact 48 + 8*ndims on-disk bytes."""
    h.validate()
    return _PREFIX.pack(
        MAGIC, h.flags, h.eltype, h.elbyte, h.data_length, h.ndims
    ) + struct.pack(f"<{h.ndims}Q", *h.dims)


def parse_prefix(buf: bytes) -> tuple[int, int, int, int, int]:
    """Validate the fixed 48-byte prefix: (flags, eltype, elbyte, data_length,
    ndims).  Shared by the buffer and stream decoders so every path
    classifies malformed input identically."""
    if len(buf) < len(MAGIC_BYTES):
        raise Truncated(HEADER_PREFIX_LEN, len(buf))
    if buf[:8] != MAGIC_BYTES:
        raise BadMagic(buf[:8])
    if len(buf) < HEADER_PREFIX_LEN:
        raise Truncated(HEADER_PREFIX_LEN, len(buf))
    _, flags, eltype, elbyte, data_length, ndims = _PREFIX.unpack_from(buf)
    if flags & ~_KNOWN_FLAGS:
        raise UnknownFlags(flags)
    if eltype >= _FIRST_RESERVED_ELTYPE:
        raise ReservedType(eltype)
    _check_elbyte(eltype, elbyte)
    if ndims > NDIMS_CAP:
        raise DimsTooLarge(ndims, NDIMS_CAP)
    return flags, eltype, elbyte, data_length, ndims


def assemble_header(flags, eltype, elbyte, data_length, dims) -> Header:
    """Final consistency check shared by the decoders: the stated data
    length must equal elbyte times the product of dims."""
    expected = elbyte * math.prod(dims)
    if data_length != expected:
        raise SizeMismatch(data_length, expected)
    return Header(flags, eltype, elbyte, data_length, dims)


def decode_header(buf) -> Header:
    """Parse and validate a header from the start of ``buf``.

    ``buf`` may extend past the header (e.g. a whole file); trailing bytes
    are ignored.  Raises the classified FormatError for every way the bytes
    can be malformed; never returns a header violating an invariant.
    """
    buf = bytes(buf)
    flags, eltype, elbyte, data_length, ndims = parse_prefix(buf)
    total = header_len(ndims)
    if len(buf) < total:
        raise Truncated(total, len(buf))
    dims = struct.unpack_from(f"<{ndims}Q", buf, HEADER_PREFIX_LEN)
    return assemble_header(flags, eltype, elbyte, data_length, dims)
