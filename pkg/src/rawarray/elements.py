"""Encode and decode data-segment bytes as typed element values.

All byte-order handling happens on unsigned integer views of the same
width, never through float casts, so NaN payloads and signaling bits
survive every decode/encode round trip bit-exactly.  The mapping to host
values is:

    Int/UInt 1,2,4,8   native numpy integer arrays
    Float 2,4,8        native numpy float arrays
    Float 16           float64 array (values rounded; the raw bytes held by
                       RaArray stay exact) via the quad-float kernels
    Complex 2x(2,4,8)  complex64/complex128 arrays; half components upcast
    UserStruct         list of opaque byte chunks, never reinterpreted

Integer widths above 8 bytes resolve to opaque chunks as well (see
kinds.resolve_kind); there is no machine integer to decode them with.

Encoding is strict: a finite value that would overflow to infinity in the
target width (e.g. 65536.0 as a half float) raises UnrepresentableValue
instead of silently writing inf, and integers are range-checked.  Rounding
to a coarser precision is not an error.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import MisalignedLength, UnrepresentableValue
from .kinds import ElementKind, Family

_F16_MAX = 65504.0


def _order_char(big_endian: bool) -> str:
    return ">" if big_endian else "<"


def _bits_to_stored(bits: np.ndarray, big_endian: bool) -> bytes:
    """Native-order unsigned view -> on-disk bytes in the flagged order."""
    width = bits.dtype.itemsize
    if width == 1:
        return bits.tobytes()
    return bits.astype(f"{_order_char(big_endian)}u{width}").tobytes()


def _stored_to_bits(raw, width: int, big_endian: bool) -> np.ndarray:
    """On-disk bytes -> native-order unsigned array of the given width.

    Always a fresh writable array: decoded values should be editable in
    place (read, modify, write back) without tripping over a read-only
    buffer view.
    """
    arr = np.frombuffer(raw, dtype=f"{_order_char(big_endian)}u{width}")
    if width == 1:
        return arr.copy()
    return arr.astype(f"=u{width}")


def _chunked(raw: bytes, stride: int) -> list[bytes]:
    return [raw[i : i + stride] for i in range(0, len(raw), stride)]


def swap_components(raw, kind: ElementKind) -> bytes:
    """Reverse the byte order of every numeric component in ``raw``.

    UserStruct data is opaque and returned unchanged.  Used to compare data
    segments across endianness flags without interpreting the values.
    """
    buf = bytes(raw)
    if kind.family is Family.USER_STRUCT or kind.width == 1:
        return buf
    if len(buf) % kind.width != 0:
        raise MisalignedLength(
            f"{len(buf)} bytes is not a multiple of component width {kind.width}"
        )
    flipped = np.frombuffer(buf, dtype=np.uint8).reshape(-1, kind.width)[:, ::-1]
    return flipped.tobytes()


def decode_elements(raw, kind: ElementKind, big_endian: bool = False):
    """Decode a data segment to typed values in the flagged byte order."""
    buf = bytes(raw)
    if len(buf) % kind.stride != 0:
        raise MisalignedLength(
            f"{len(buf)} bytes is not a multiple of element stride {kind.stride}"
        )
    if kind.family is Family.USER_STRUCT:
        return _chunked(buf, kind.stride)
    if kind.family is Family.FLOAT and kind.width == 16:
        return _kernels.decode_f128(buf, big_endian)
    if kind.family is Family.COMPLEX:
        comp = _stored_to_bits(buf, kind.width, big_endian)
        if kind.width == 2:
            return comp.view(np.float16).astype(np.float32).view(np.complex64)
        return comp.view(f"=f{kind.width}").view(f"=c{2 * kind.width}")
    code = "f" if kind.family is Family.FLOAT else ("i" if kind.family is Family.INT else "u")
    return _stored_to_bits(buf, kind.width, big_endian).view(f"={code}{kind.width}")


def _check_float_overflow(src: np.ndarray, converted: np.ndarray, width: int) -> None:
    overflowed = np.isfinite(src) & ~np.isfinite(converted.astype(np.float64))
    if np.any(overflowed):
        culprit = src[overflowed].flat[0]
        raise UnrepresentableValue(
            f"{culprit!r} overflows a {width * 8}-bit float (max finite "
            f"{np.finfo(f'f{width}').max})"
        )


def _encode_float(values, width: int) -> np.ndarray:
    src = np.asarray(values)
    target = np.dtype(f"=f{width}")
    if src.dtype == target:
        return src
    src = src.astype(np.float64)
    with np.errstate(over="ignore"):
        out = src.astype(target)
    _check_float_overflow(src, out, width)
    return out


def _encode_int(values, kind: ElementKind) -> np.ndarray:
    target = np.dtype(f"={'i' if kind.family is Family.INT else 'u'}{kind.width}")
    src = np.asarray(values)
    if src.dtype == target:
        return src
    info = np.iinfo(target)
    try:
        wide = np.asarray(values, dtype=np.int64 if kind.family is Family.INT else np.uint64)
    except (OverflowError, ValueError, TypeError) as exc:
        raise UnrepresentableValue(f"values do not fit {kind.name}: {exc}") from None
    bad = (wide < info.min) | (wide > info.max)
    if np.any(bad):
        raise UnrepresentableValue(
            f"{wide[bad].flat[0]} outside {kind.name} range [{info.min}, {info.max}]"
        )
    return wide.astype(target)


def _encode_complex(values, width: int) -> np.ndarray:
    """Return the interleaved native-order component array (f16/f32/f64)."""
    src = np.ascontiguousarray(values)
    native = {4: np.complex64, 8: np.complex128}.get(width)
    if native is not None and src.dtype == native:
        return src.view(f"=f{width}")
    src = np.ascontiguousarray(src.astype(np.complex128))
    comps = src.view(np.float64)  # interleaved re, im
    if width == 8:
        return comps
    with np.errstate(over="ignore"):
        out = comps.astype(f"=f{width}")
    _check_float_overflow(comps, out, width)
    return out


def encode_elements(values, kind: ElementKind, big_endian: bool = False) -> bytes:
    """Encode values as data-segment bytes in the flagged byte order.

    Inverse of decode_elements: decoding the result yields equal values,
    bit-exactly when the input already has the kind's width.
    """
    if kind.family is Family.USER_STRUCT:
        chunks = [bytes(v) for v in values]
        for c in chunks:
            if len(c) != kind.stride:
                raise UnrepresentableValue(
                    f"struct chunk of {len(c)} bytes, expected {kind.stride}"
                )
        return b"".join(chunks)
    if kind.family is Family.FLOAT and kind.width == 16:
        return _kernels.encode_f128(np.asarray(values, dtype=np.float64), big_endian)
    if kind.family is Family.FLOAT:
        arr = _encode_float(values, kind.width)
    elif kind.family is Family.COMPLEX:
        arr = _encode_complex(values, kind.width)
    else:
        arr = _encode_int(values, kind)
    bits = np.ascontiguousarray(arr).view(f"=u{arr.dtype.itemsize}")
    return _bits_to_stored(bits, big_endian)
