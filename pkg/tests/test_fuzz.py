"""Quick parser robustness run; the full 10k-input sweep lives in
test_acceptance.py."""

import io as stdio
import time

import rawarray as ra
from rawarray.errors import RaError

from fuzz_corpus import mutated_inputs


def parse_both_ways(blob: bytes):
    """Returns the error class names hit, or None where parsing succeeded."""
    outcomes = []
    for parse in (ra.decode_header, lambda b: ra.read_array(stdio.BytesIO(b))):
        try:
            parse(blob)
            outcomes.append(None)
        except RaError as exc:
            outcomes.append(type(exc).__name__)
    return outcomes


def test_fuzz_2000_inputs_classified():
    hit_errors = set()
    parsed_ok = 0
    for i, blob in mutated_inputs(2000, seed=1):
        start = time.perf_counter()
        outcomes = parse_both_ways(blob)  # must never raise anything else
        assert time.perf_counter() - start < 1.0, f"input {i} too slow"
        for name in outcomes:
            if name is None:
                parsed_ok += 1
            else:
                hit_errors.add(name)
    # the corpus is adversarial enough to exercise the whole taxonomy
    assert {"BadMagic", "Truncated", "TruncatedData", "UnknownFlags",
            "ReservedType", "SizeMismatch"} <= hit_errors
    assert parsed_ok > 0  # unmutated seeds still parse


def test_header_decode_never_returns_invalid():
    for _, blob in mutated_inputs(500, seed=2):
        try:
            header = ra.decode_header(blob)
        except RaError:
            continue
        header.validate()
