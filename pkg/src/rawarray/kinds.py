"""Element kind resolution and index linearization.

An (eltype, elbyte) pair from the header resolves to a concrete
interpretation of the data segment.  Elements are laid out with dims[0]
varying fastest (column-major); the format itself does not care, so the
choice is pinned here once and used by every consumer in this repo,
including the PNG/IDX converters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import format as fmt
from .errors import InvalidType, OutOfBounds, ReservedType, UnsupportedWidth


class Family(Enum):
    USER_STRUCT = "struct"
    INT = "int"
    UINT = "uint"
    FLOAT = "float"
    COMPLEX = "complex"


_INT_WIDTHS = (1, 2, 4, 8)
_FLOAT_WIDTHS = (2, 4, 8, 16)
_COMPLEX_COMPONENT_WIDTHS = (2, 4, 8)


@dataclass(frozen=True)
class ElementKind:
    """Concrete element interpretation at a fixed byte width.

    ``width`` is the integer/float width in bytes, the component width for
    COMPLEX (stride is twice that), and the full stride for USER_STRUCT,
    whose contents are never reinterpreted.
    """

    family: Family
    width: int

    @property
    def stride(self) -> int:
        """Bytes occupied by one element on disk."""
        return 2 * self.width if self.family is Family.COMPLEX else self.width

    @property
    def name(self) -> str:
        return f"{self.family.value}{self.width * 8}"

    def dtype(self, big_endian: bool = False) -> np.dtype | None:
        """The numpy dtype that views this kind bit-exactly, or None.

        Float(16) and Complex(2) have no native machine type; Float(16)
        decodes through the quad-float kernels and Complex(2) through a
        half-precision upcast.  USER_STRUCT is opaque bytes.
        """
        code = {
            Family.INT: "i",
            Family.UINT: "u",
            Family.FLOAT: "f",
            Family.COMPLEX: "c",
        }.get(self.family)
        if code is None:
            return None
        if self.family is Family.COMPLEX:
            if self.width not in (4, 8):
                return None
            size = 2 * self.width
        else:
            if self.family is Family.FLOAT and self.width == 16:
                return None
            size = self.width
        return np.dtype(f"{'>' if big_endian else '<'}{code}{size}")


def resolve_kind(eltype: int, elbyte: int) -> ElementKind:
    """Map a header (eltype, elbyte) pair to its ElementKind.

    Raises ReservedType for codes >= 5 and UnsupportedWidth where no
    interpretation exists at that width (e.g. a 24-bit float).
    """
    if eltype >= 5:
        raise ReservedType(eltype)
    if eltype < 0:
        raise InvalidType(f"element type code must be non-negative, got {eltype}")
    if elbyte < 1:
        raise InvalidType(f"elbyte must be >= 1, got {elbyte}")
    if eltype == fmt.ELTYPE_STRUCT:
        return ElementKind(Family.USER_STRUCT, elbyte)
    if eltype in (fmt.ELTYPE_INT, fmt.ELTYPE_UINT):
        if elbyte in _INT_WIDTHS:
            family = Family.INT if eltype == fmt.ELTYPE_INT else Family.UINT
            return ElementKind(family, elbyte)
        if elbyte > 8:
            # Integers wider than any machine word (e.g. 512-bit vector
            # lanes) pass through as opaque exact bytes.
            return ElementKind(Family.USER_STRUCT, elbyte)
        raise UnsupportedWidth(f"no {elbyte * 8}-bit integer")
    if eltype == fmt.ELTYPE_FLOAT:
        if elbyte not in _FLOAT_WIDTHS:
            raise UnsupportedWidth(f"no {elbyte * 8}-bit float")
        return ElementKind(Family.FLOAT, elbyte)
    # complex: elbyte covers both components
    if elbyte % 2 != 0 or elbyte // 2 not in _COMPLEX_COMPONENT_WIDTHS:
        raise UnsupportedWidth(f"no complex type of {elbyte} bytes")
    return ElementKind(Family.COMPLEX, elbyte // 2)


def kind_of(header: fmt.Header) -> ElementKind:
    return resolve_kind(header.eltype, header.elbyte)


def linear_index(idx, dims) -> int:
    """Flat element offset of a multi-index, dims[0] varying fastest."""
    idx = tuple(idx)
    dims = tuple(dims)
    if len(idx) != len(dims):
        raise OutOfBounds(
            f"index rank {len(idx)} does not match array rank {len(dims)}"
        )
    offset = 0
    stride = 1
    for k, (i, d) in enumerate(zip(idx, dims)):
        if not 0 <= i < d:
            raise OutOfBounds(f"index {i} outside extent {d} at axis {k}")
        offset += i * stride
        stride *= d
    return offset
