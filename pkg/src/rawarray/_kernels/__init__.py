"""Quad-float conversion kernels: compiled extension with pure fallback.

The compiled module (_quad, built from _quad.pyx) is preferred when
importable; setting RA_PURE=1 in the environment forces the pure-Python
codec.  Both implementations are importable side by side for differential
tests and for `ra-bench kernels`.
"""

import os

from . import pure

try:
    from . import _quad as compiled
except ImportError:
    compiled = None

if compiled is not None and os.environ.get("RA_PURE", "") not in ("1", "true", "yes"):
    active = compiled
    ACTIVE_IMPL = "compiled"
else:
    active = pure
    ACTIVE_IMPL = "pure"

decode_f128 = active.decode_f128
encode_f128 = active.encode_f128

__all__ = [
    "ACTIVE_IMPL",
    "active",
    "compiled",
    "decode_f128",
    "encode_f128",
    "pure",
]
