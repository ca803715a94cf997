"""Deterministic conformance corpus: logical arrays and corrupted files.

Everything derives from a fixed seed so both implementations materialize
the exact same inputs in any order, with no hand-edited fixtures.

Half-precision values avoid NaN payloads on purpose: converting a payload
NaN from a Python float (a double) down to 16 bits is the one place where
stdlib struct (payload dropped) and vectorized converters (top bits kept)
legitimately disagree, and the format stores whatever the writer produced.
Canonical NaN, infinities and signed zeros are covered for every width;
payload NaNs are covered at 32, 64 and 128 bits where the conversions
agree bit-for-bit.
"""

from __future__ import annotations

import math
import random
import struct
from dataclasses import dataclass

CORPUS_SEED = 20240925

# (eltype, elbyte) pairs spanning every decodable kind
KIND_COMBOS = [
    (1, 1), (1, 2), (1, 4), (1, 8),
    (2, 1), (2, 2), (2, 4), (2, 8),
    (3, 2), (3, 4), (3, 8), (3, 16),
    (4, 4), (4, 8), (4, 16),
    (0, 1), (0, 7), (0, 24),
]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    eltype: int
    elbyte: int
    dims: tuple[int, ...]
    big_endian: bool
    values: tuple
    metadata: bytes


def _float_of_width(rnd: random.Random, width: int):
    if width >= 8:
        roll = rnd.random()
        if roll < 0.06:
            return rnd.choice([0.0, -0.0, math.inf, -math.inf, math.nan])
        if roll < 0.1:  # payload NaN, exact at 64 bits and up
            bits = 0x7FF8_0000_0000_0000 | rnd.getrandbits(50) | 1
            return struct.unpack("<d", struct.pack("<Q", bits))[0]
        return rnd.uniform(-1e300, 1e300) * 10.0 ** rnd.randint(-250, 0)
    code = {2: "e", 4: "f"}[width]
    roll = rnd.random()
    if roll < 0.06:
        return rnd.choice([0.0, -0.0, math.inf, -math.inf, math.nan])
    if roll < 0.1 and width == 4:  # quiet payload NaN survives f64->f32
        bits = 0x7FC0_0000 | rnd.getrandbits(20) | 1
        return float(struct.unpack("<f", struct.pack("<I", bits))[0])
    span = 60000.0 if width == 2 else 1e30
    return struct.unpack(f"<{code}", struct.pack(f"<{code}", rnd.uniform(-span, span)))[0]


def _values_for(rnd: random.Random, eltype: int, elbyte: int, count: int) -> tuple:
    if eltype == 0 or (eltype in (1, 2) and elbyte > 8):
        return tuple(rnd.randbytes(elbyte) for _ in range(count))
    if eltype == 1:
        lo, hi = -(2 ** (8 * elbyte - 1)), 2 ** (8 * elbyte - 1) - 1
        return tuple(rnd.randint(lo, hi) for _ in range(count))
    if eltype == 2:
        return tuple(rnd.randint(0, 2 ** (8 * elbyte) - 1) for _ in range(count))
    if eltype == 3:
        return tuple(_float_of_width(rnd, elbyte) for _ in range(count))
    half = elbyte // 2
    return tuple(
        complex(_float_of_width(rnd, half), _float_of_width(rnd, half))
        for _ in range(count)
    )


def _dims_variant(rnd: random.Random, variant: int) -> tuple[int, ...]:
    if variant == 0:
        return (rnd.randint(1, 24),)
    if variant == 1:
        return (rnd.randint(1, 6), rnd.randint(1, 6))
    return rnd.choice([(), (rnd.randint(2, 4), rnd.randint(2, 4), rnd.randint(2, 4)),
                       (0,), (rnd.randint(1, 3), 0, rnd.randint(1, 3))])


def generate_corpus(seed: int = CORPUS_SEED) -> list[CorpusEntry]:
    """216 entries: every kind x both byte orders x metadata present/absent."""
    rnd = random.Random(seed)
    entries = []
    for eltype, elbyte in KIND_COMBOS:
        for big_endian in (False, True):
            for with_meta in (False, True):
                for variant in range(3):
                    dims = _dims_variant(rnd, variant)
                    count = math.prod(dims)
                    metadata = rnd.randbytes(rnd.randint(1, 64)) if with_meta else b""
                    name = (f"t{eltype}b{elbyte}-{'be' if big_endian else 'le'}"
                            f"-{'meta' if with_meta else 'plain'}-{variant}")
                    entries.append(CorpusEntry(
                        name, eltype, elbyte, dims, big_endian,
                        _values_for(rnd, eltype, elbyte, count), metadata,
                    ))
    return entries


def _valid_base(seed: int) -> bytes:
    """One well-formed two-dimensional float32 file to corrupt."""
    rnd = random.Random(seed)
    dims = (3, 4)
    words = struct.pack("<6Q", 0x7961727261776172, 0, 3, 4, 48, 2)
    body = struct.pack("<2Q", *dims)
    data = struct.pack("<12f", *(rnd.uniform(-1, 1) for _ in range(12)))
    return words + body + data


def corrupted_fixtures(seed: int = CORPUS_SEED) -> list[tuple[str, bytes, str]]:
    """(name, file bytes, expected error class name) triples.

    The class names are the shared error taxonomy; both implementations
    must classify each fixture identically.
    """
    base = _valid_base(seed)
    fixtures = []

    def patched(offset: int, word: int) -> bytes:
        blob = bytearray(base)
        blob[offset : offset + 8] = struct.pack("<Q", word)
        return bytes(blob)

    fixtures.append(("zeroed-magic", b"\x00" * len(base), "BadMagic"))
    fixtures.append(("flipped-magic", b"X" + base[1:], "BadMagic"))
    fixtures.append(("empty", b"", "Truncated"))
    fixtures.append(("header-cut", base[:30], "Truncated"))
    fixtures.append(("dims-cut", base[:56], "Truncated"))
    fixtures.append(("data-cut", base[:-8], "TruncatedData"))
    fixtures.append(("reserved-flag", patched(8, 2), "UnknownFlags"))
    fixtures.append(("reserved-flag-high", patched(8, 1 << 63), "UnknownFlags"))
    fixtures.append(("reserved-type", patched(16, 7), "ReservedType"))
    fixtures.append(("reserved-type-big", patched(16, 2**40), "ReservedType"))
    fixtures.append(("zero-elbyte", patched(24, 0), "InvalidType"))
    fixtures.append(("length-off-by-one", patched(32, 49), "SizeMismatch"))
    fixtures.append(("length-huge", patched(32, 2**50), "SizeMismatch"))
    fixtures.append(("ndims-absurd", patched(40, 2**60), "DimsTooLarge"))
    return fixtures
