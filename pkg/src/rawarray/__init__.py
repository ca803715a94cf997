"""RawArray: a simple archival file format for multidimensional arrays.

A file is a purely numeric little-endian header (magic, flags, element
type/size, data length, dims) followed by the raw array bytes and an
optional free-form metadata trailer.  Quick start::

    import numpy as np
    import rawarray as ra

    ra.write("img.ra", np.zeros((64, 64), dtype=np.float32))
    img = ra.read("img.ra")
    img[0, 0] *= 2
    ra.write("img.ra", img)

The `ra` command-line tool (see rawarray.cli) inspects, creates, converts
and compares files; `ra-bench` (rawarray.bench) measures I/O throughput.
"""

from . import errors
from ._kernels import ACTIVE_IMPL
from .elements import decode_elements, encode_elements, swap_components
from .errors import RaError
from .format import (
    ELTYPE_COMPLEX,
    ELTYPE_FLOAT,
    ELTYPE_INT,
    ELTYPE_NAMES,
    ELTYPE_STRUCT,
    ELTYPE_UINT,
    MAGIC,
    MAGIC_BYTES,
    Header,
    decode_header,
    encode_header,
    header_len,
    make_header,
)
from .io import (
    ArrayView,
    RaArray,
    append_metadata,
    content_equal,
    diff_report,
    from_numpy,
    map_array,
    read,
    read_array,
    read_header_only,
    read_metadata,
    to_numpy,
    write,
    write_array,
)
from .kinds import ElementKind, Family, kind_of, linear_index, resolve_kind

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_IMPL",
    "ArrayView",
    "ELTYPE_COMPLEX",
    "ELTYPE_FLOAT",
    "ELTYPE_INT",
    "ELTYPE_NAMES",
    "ELTYPE_STRUCT",
    "ELTYPE_UINT",
    "ElementKind",
    "Family",
    "Header",
    "MAGIC",
    "MAGIC_BYTES",
    "RaArray",
    "RaError",
    "append_metadata",
    "content_equal",
    "decode_elements",
    "decode_header",
    "diff_report",
    "encode_elements",
    "encode_header",
    "errors",
    "from_numpy",
    "header_len",
    "kind_of",
    "linear_index",
    "make_header",
    "map_array",
    "read",
    "read_array",
    "read_header_only",
    "read_metadata",
    "resolve_kind",
    "swap_components",
    "to_numpy",
    "write",
    "write_array",
]
