"""Pure-Python IEEE binary128 <-> float64 conversion.

No machine type exists for 128-bit floats on common platforms (x86 long
double is 80-bit extended), so the conversion is done in integer
arithmetic.  The compiled twin in _quad.pyx implements the identical
algorithm; tests assert the two agree bit-exactly.

Decoding rounds the 113-bit significand to 53 bits (round-to-nearest-even)
and then scales, so results landing in the float64 subnormal range may be
double-rounded.  Encoding a float64 is always exact: every finite double,
infinity and NaN payload embeds losslessly in binary128, and decoding it
back returns the original bits.
"""

from __future__ import annotations

import math
import struct

import numpy as np

_EXP_MASK_128 = 0x7FFF
_MANT_MASK_128 = (1 << 112) - 1
_MANT_MASK_64 = (1 << 52) - 1


def _quad_bits_to_double(u: int) -> float:
    sign = u >> 127
    e = (u >> 112) & _EXP_MASK_128
    m = u & _MANT_MASK_128
    if e == _EXP_MASK_128:
        if m == 0:
            return -math.inf if sign else math.inf
        m64 = m >> 60
        if m64 == 0:
            m64 = 1 << 51  # payload lived in the dropped low bits; stay NaN
        bits = (sign << 63) | (0x7FF << 52) | m64
        return struct.unpack("<d", bits.to_bytes(8, "little"))[0]
    if e == 0:
        if m == 0:
            return -0.0 if sign else 0.0
        sig = m
        exp = -16382 - 112
    else:
        sig = (1 << 112) | m
        exp = e - 16383 - 112
    # Round the significand to at most 53 bits, then scale.
    length = sig.bit_length()
    if length > 53:
        shift = length - 53
        half = 1 << (shift - 1)
        rest = sig & ((1 << shift) - 1)
        sig >>= shift
        if rest > half or (rest == half and sig & 1):
            sig += 1
        exp += shift
    try:
        value = math.ldexp(float(sig), exp)
    except OverflowError:
        value = math.inf
    return -value if sign else value


def _double_to_quad_bits(v: float) -> int:
    bits = struct.unpack("<Q", struct.pack("<d", v))[0]
    sign = bits >> 63
    e11 = (bits >> 52) & 0x7FF
    m52 = bits & _MANT_MASK_64
    if e11 == 0x7FF:
        e = _EXP_MASK_128
        m = m52 << 60
    elif e11 == 0:
        if m52 == 0:
            e = 0
            m = 0
        else:
            # Subnormal double: value = m52 * 2^-1074; normalizes in binary128.
            top = m52.bit_length()
            e = top - 1075 + 16383
            m = (m52 ^ (1 << (top - 1))) << (112 - (top - 1))
    else:
        e = e11 - 1023 + 16383
        m = m52 << 60
    return (sign << 127) | (e << 112) | m


def decode_f128(data, big_endian: bool = False) -> np.ndarray:
    """Decode packed binary128 bytes to a float64 array."""
    buf = bytes(data)
    order = "big" if big_endian else "little"
    n = len(buf) // 16
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        u = int.from_bytes(buf[16 * i : 16 * i + 16], order)
        out[i] = _quad_bits_to_double(u)
    return out


def encode_f128(values: np.ndarray, big_endian: bool = False) -> bytes:
    """Encode a float64 array as packed binary128 bytes (exact)."""
    order = "big" if big_endian else "little"
    chunks = bytearray(16 * len(values))
    for i, v in enumerate(values):
        chunks[16 * i : 16 * i + 16] = _double_to_quad_bits(float(v)).to_bytes(16, order)
    return bytes(chunks)
