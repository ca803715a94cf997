# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled IEEE binary128 <-> float64 conversion.

Same algorithm as rawarray._kernels.pure, element-at-a-time over 128-bit
integers; see that module for the rounding notes.  Selected automatically
at import by rawarray._kernels when built.
"""

from libc.math cimport ldexp, INFINITY
from libc.string cimport memcpy

import numpy as np

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

cdef u128 _MANT_MASK_128 = ((<u128>1) << 112) - 1


cdef inline u128 _load_u128(const unsigned char *p, bint big_endian) noexcept:
    cdef u128 u = 0
    cdef int i
    if big_endian:
        for i in range(16):
            u = (u << 8) | p[i]
    else:
        for i in range(15, -1, -1):
            u = (u << 8) | p[i]
    return u


cdef inline void _store_u128(unsigned char *p, u128 u, bint big_endian) noexcept:
    cdef int i
    if big_endian:
        for i in range(15, -1, -1):
            p[i] = <unsigned char>(u & 0xFF)
            u >>= 8
    else:
        for i in range(16):
            p[i] = <unsigned char>(u & 0xFF)
            u >>= 8


cdef inline int _bit_length(u128 u) noexcept:
    cdef int n = 0
    while u:
        u >>= 1
        n += 1
    return n


cdef double _quad_bits_to_double(u128 u) noexcept:
    cdef unsigned long long sign = <unsigned long long>(u >> 127)
    cdef unsigned long long e = <unsigned long long>((u >> 112) & 0x7FFF)
    cdef u128 m = u & _MANT_MASK_128
    cdef u128 sig, rest, half
    cdef unsigned long long m64, bits, sig64
    cdef long exp
    cdef int length, shift
    cdef double value

    if e == 0x7FFF:
        if m == 0:
            return -INFINITY if sign else INFINITY
        m64 = <unsigned long long>(m >> 60)
        if m64 == 0:
            m64 = (<unsigned long long>1) << 51
        bits = (sign << 63) | ((<unsigned long long>0x7FF) << 52) | m64
        memcpy(&value, &bits, 8)
        return value
    if e == 0:
        if m == 0:
            return -0.0 if sign else 0.0
        sig = m
        exp = -16382 - 112
    else:
        sig = ((<u128>1) << 112) | m
        exp = <long>e - 16383 - 112
    length = _bit_length(sig)
    if length > 53:
        shift = length - 53
        half = (<u128>1) << (shift - 1)
        rest = sig & (((<u128>1) << shift) - 1)
        sig >>= shift
        if rest > half or (rest == half and (sig & 1)):
            sig += 1
        exp += shift
    sig64 = <unsigned long long>sig
    value = ldexp(<double>sig64, exp)
    return -value if sign else value


cdef u128 _double_to_quad_bits(double v) noexcept:
    cdef unsigned long long bits
    memcpy(&bits, &v, 8)
    cdef unsigned long long sign = bits >> 63
    cdef unsigned long long e11 = (bits >> 52) & 0x7FF
    cdef unsigned long long m52 = bits & (((<unsigned long long>1) << 52) - 1)
    cdef unsigned long long e
    cdef u128 m
    cdef int top

    if e11 == 0x7FF:
        e = 0x7FFF
        m = (<u128>m52) << 60
    elif e11 == 0:
        if m52 == 0:
            e = 0
            m = 0
        else:
            top = _bit_length(<u128>m52)
            e = top - 1075 + 16383
            m = (<u128>(m52 ^ ((<unsigned long long>1) << (top - 1)))) << (112 - (top - 1))
    else:
        e = e11 - 1023 + 16383
        m = (<u128>m52) << 60
    return ((<u128>sign) << 127) | ((<u128>e) << 112) | m


def decode_f128(data, bint big_endian=False):
    """Decode packed binary128 bytes to a float64 array."""
    cdef const unsigned char[::1] buf = bytes(data)
    cdef Py_ssize_t n = buf.shape[0] // 16
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    cdef Py_ssize_t i
    for i in range(n):
        view[i] = _quad_bits_to_double(_load_u128(&buf[16 * i], big_endian))
    return out


def encode_f128(values, bint big_endian=False):
    """Encode a float64 array as packed binary128 bytes (exact)."""
    cdef double[::1] vals = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = vals.shape[0]
    out = bytearray(16 * n)
    cdef unsigned char[::1] view = out
    cdef Py_ssize_t i
    for i in range(n):
        _store_u128(&view[16 * i], _double_to_quad_bits(vals[i]), big_endian)
    return bytes(out)
