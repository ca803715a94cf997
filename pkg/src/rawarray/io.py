"""Reading and writing whole RawArray files.

Files are immutable by convention: writers always produce a complete new
file and move it into place atomically (write-to-temp, rename), so
concurrent readers never observe a half-written file and re-writing the
same array yields bit-identical bytes for external checksumming.  The
optional metadata trailer has no length field; it is simply everything
between the end of the data segment and EOF.
"""

from __future__ import annotations

import itertools
import mmap
import os
import struct
from dataclasses import dataclass

import numpy as np

from . import format as fmt
from .elements import decode_elements, encode_elements, swap_components
from .errors import (
    ExplicitlyTooLarge,
    InvalidType,
    InvariantViolation,
    MappingUnsupported,
    RaError,
    Truncated,
    TruncatedData,
)
from .format import Header, decode_header, encode_header, header_len, make_header
from .kinds import kind_of

# Buffered reads refuse anything above this unless told otherwise; callers
# with genuinely huge files should memory-map instead.
DEFAULT_READ_CAP = 16 * 2**30

_MMAP_ENV = "RA_MMAP"


@dataclass(frozen=True)
class RaArray:
    """In-memory mirror of one file: header, raw data bytes, metadata."""

    header: Header
    data: bytes
    metadata: bytes = b""

    def __post_init__(self):
        object.__setattr__(self, "data", bytes(self.data))
        object.__setattr__(self, "metadata", bytes(self.metadata))
        if len(self.data) != self.header.data_length:
            raise InvariantViolation(
                f"data is {len(self.data)} bytes, header says {self.header.data_length}"
            )

    @property
    def file_size(self) -> int:
        return header_len(self.header.ndims) + len(self.data) + len(self.metadata)

    def values(self):
        """Decode the data segment per the header's kind and byte order."""
        return decode_elements(self.data, kind_of(self.header), self.header.big_endian)


class ArrayView:
    """Zero-copy read-only window over the data segment of a mapped file.

    Holds the underlying mapping open until close(); usable as a context
    manager.  The window is a memoryview: no data bytes are copied to
    establish it, and external modifications to the file show through.
    """

    def __init__(self, header: Header, window: memoryview, mapping=None):
        self.header = header
        self.data = window
        self._mapping = mapping

    def __len__(self) -> int:
        return len(self.data)

    def __enter__(self) -> "ArrayView":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        self.data.release()
        if self._mapping is not None:
            try:
                self._mapping.close()
            except BufferError:
                # as_numpy() views are still alive; the OS mapping is
                # released when the last of them is garbage collected.
                pass
            self._mapping = None

    def as_numpy(self) -> np.ndarray:
        """Typed read-only view of the window, still zero-copy.

        Only kinds with a direct machine dtype qualify; quad floats, half
        complex and user structs require decode_elements, which copies.
        """
        dtype = kind_of(self.header).dtype(self.header.big_endian)
        if dtype is None:
            raise InvalidType(
                f"no zero-copy dtype for eltype {self.header.eltype} "
                f"elbyte {self.header.elbyte}; use rawarray.decode_elements"
            )
        flat = np.frombuffer(self.data, dtype=dtype)
        return flat.reshape(self.header.dims, order="F")


def _read_exact(stream, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        piece = stream.read(remaining)
        if not piece:
            break
        chunks.append(piece)
        remaining -= len(piece)
    return b"".join(chunks)


def _read_header_stream(stream) -> Header:
    """Two-stage header read: fixed prefix, then the dims vector."""
    prefix = _read_exact(stream, fmt.HEADER_PREFIX_LEN)
    flags, eltype, elbyte, data_length, ndims = fmt.parse_prefix(prefix)
    dims_raw = _read_exact(stream, 8 * ndims)
    if len(dims_raw) < 8 * ndims:
        raise Truncated(header_len(ndims), fmt.HEADER_PREFIX_LEN + len(dims_raw))
    dims = struct.unpack(f"<{ndims}Q", dims_raw)
    return fmt.assemble_header(flags, eltype, elbyte, data_length, dims)


_TMP_COUNTER = itertools.count()


def write_array(dest, arr: RaArray) -> None:
    """Write header + data + metadata to a path (atomically) or a stream.

    Path writes go to a temp file in the same directory and rename into
    place, so a crash mid-write never leaves a half-written file behind the
    original name.  The temp naming is a cheap pid+counter scheme rather
    than tempfile's secure randomness: this runs once per written array and
    the many-tiny-files workload is the format's bread and butter.
    """
    payload = encode_header(arr.header)
    if hasattr(dest, "write"):
        dest.write(payload)
        dest.write(arr.data)
        dest.write(arr.metadata)
        return
    path = os.fspath(dest)
    directory = os.path.dirname(path) or "."
    while True:
        tmp = os.path.join(
            directory, f".ra-tmp-{os.getpid()}-{next(_TMP_COUNTER):x}"
        )
        try:
            fd = os.open(tmp, os.O_WRONLY | os.O_CREAT | os.O_EXCL, 0o666)
            break
        except FileExistsError:
            continue
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(payload)
            f.write(arr.data)
            f.write(arr.metadata)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def read_array(src, max_bytes: int = DEFAULT_READ_CAP) -> RaArray:
    """Read a complete file: validated header, data segment, metadata trailer.

    Raises ExplicitlyTooLarge when data_length exceeds ``max_bytes`` (default
    16 GiB); map_array is the right tool past that point.  Files within the
    cap are slurped in one read; larger ones go through the incremental
    stream path so the cap is enforced before any oversized buffering.
    """
    if hasattr(src, "read"):
        return _read_array_stream(src, max_bytes)
    fd = os.open(os.fspath(src), os.O_RDONLY)
    try:
        size = os.fstat(fd).st_size
        if size > max_bytes:
            with os.fdopen(fd, "rb") as f:
                fd = -1
                return _read_array_stream(f, max_bytes)
        chunks = []
        remaining = size
        while remaining:
            chunk = os.read(fd, remaining)
            if not chunk:
                break
            chunks.append(chunk)
            remaining -= len(chunk)
        blob = chunks[0] if len(chunks) == 1 else b"".join(chunks)
        return _parse_array_blob(blob, max_bytes)
    finally:
        if fd >= 0:
            os.close(fd)


def _check_cap(data_length: int, max_bytes: int) -> None:
    if data_length > max_bytes:
        raise ExplicitlyTooLarge(
            f"data segment of {data_length} bytes exceeds the {max_bytes}-byte "
            f"buffered-read cap; use map_array or raise max_bytes"
        )


def _parse_array_blob(blob: bytes, max_bytes: int) -> RaArray:
    header = decode_header(blob)
    _check_cap(header.data_length, max_bytes)
    start = header_len(header.ndims)
    end = start + header.data_length
    if len(blob) < end:
        raise TruncatedData(header.data_length, len(blob) - start)
    return RaArray(header, blob[start:end], blob[end:])


def _read_array_stream(stream, max_bytes: int) -> RaArray:
    header = _read_header_stream(stream)
    _check_cap(header.data_length, max_bytes)
    data = _read_exact(stream, header.data_length)
    if len(data) < header.data_length:
        raise TruncatedData(header.data_length, len(data))
    metadata = stream.read()
    return RaArray(header, data, metadata)


def read_header_only(src) -> Header:
    """Validated header without touching the data segment (O(header) I/O)."""
    if hasattr(src, "read"):
        return _read_header_stream(src)
    with open(src, "rb") as f:
        return _read_header_stream(f)


def read_metadata(src) -> bytes:
    """The metadata trailer bytes of a valid file (possibly empty)."""
    if hasattr(src, "read"):
        return _read_array_stream(src, DEFAULT_READ_CAP).metadata
    with open(src, "rb") as f:
        header = _read_header_stream(f)
        start = header_len(header.ndims) + header.data_length
        size = os.fstat(f.fileno()).st_size
        if size < start:
            raise TruncatedData(header.data_length, size - header_len(header.ndims))
        f.seek(start)
        return f.read()


def map_array(src) -> ArrayView:
    """Memory-map a file and return the zero-copy view of its data segment.

    Set RA_MMAP=0 to disable mapping globally (e.g. on network filesystems);
    callers may catch MappingUnsupported and fall back to read_array.
    """
    path = os.fspath(src)
    with open(path, "rb") as f:
        header = _read_header_stream(f)
        offset = header_len(header.ndims)
        size = os.fstat(f.fileno()).st_size
        if size < offset + header.data_length:
            raise TruncatedData(header.data_length, max(size - offset, 0))
        if header.data_length == 0:
            return ArrayView(header, memoryview(b""))
        if os.environ.get(_MMAP_ENV, "") == "0":
            raise MappingUnsupported(f"memory mapping disabled via {_MMAP_ENV}=0")
        try:
            mapping = mmap.mmap(f.fileno(), 0, access=mmap.ACCESS_READ)
        except (OSError, ValueError) as exc:
            raise MappingUnsupported(f"mmap of {path!r} failed: {exc}") from exc
    window = memoryview(mapping)[offset : offset + header.data_length]
    return ArrayView(header, window, mapping)


def append_metadata(path, extra: bytes) -> None:
    """Append bytes to the metadata trailer, validating the file first.

    A corrupted file is rejected untouched; appending to a file whose data
    segment is already truncated would silently splice the new bytes into
    the data region on the next read.
    """
    with open(path, "rb") as f:
        header = _read_header_stream(f)
        size = os.fstat(f.fileno()).st_size
        body = header_len(header.ndims) + header.data_length
        if size < body:
            raise TruncatedData(header.data_length, max(size - header_len(header.ndims), 0))
    if not extra:
        return
    with open(path, "ab") as f:
        f.write(bytes(extra))


def _first_data_difference(a: RaArray, b: RaArray) -> int | None:
    """Element index of the first difference, None if data segments agree.

    b's bytes are normalized to a's byte order before comparison, so the
    same values stored under different endianness flags compare equal.
    """
    kind = None
    try:
        kind = kind_of(a.header)
    except RaError:
        pass
    b_data = b.data
    if kind is not None and a.header.big_endian != b.header.big_endian:
        b_data = swap_components(b_data, kind)
    if a.data == b_data:
        return None
    stride = kind.stride if kind is not None else 1
    offset = next(i for i, (x, y) in enumerate(zip(a.data, b_data)) if x != y)
    return offset // stride


def diff_report(a_path, b_path, include_metadata: bool = False) -> str | None:
    """Human-readable description of the first difference, or None if equal.

    File identity ignores timestamps and the endianness flag: two files are
    the same array iff their headers agree field-wise (flags normalized) and
    their data bytes agree after byte-order normalization.
    """
    a = read_array(a_path)
    b = read_array(b_path)
    for name in ("eltype", "elbyte", "dims", "data_length"):
        av, bv = getattr(a.header, name), getattr(b.header, name)
        if av != bv:
            return f"header field {name}: {av} != {bv}"
    flags_a = a.header.flags & ~fmt.FLAG_BIG_ENDIAN
    flags_b = b.header.flags & ~fmt.FLAG_BIG_ENDIAN
    if flags_a != flags_b:
        return f"header field flags: {flags_a:#x} != {flags_b:#x}"
    index = _first_data_difference(a, b)
    if index is not None:
        return f"data element {index}"
    if include_metadata:
        if len(a.metadata) != len(b.metadata):
            return (
                f"metadata length {len(a.metadata)} != {len(b.metadata)}"
            )
        if a.metadata != b.metadata:
            offset = next(
                i for i, (x, y) in enumerate(zip(a.metadata, b.metadata)) if x != y
            )
            return f"metadata offset {offset}"
    return None


def content_equal(a, b, include_metadata: bool = False) -> bool:
    """True iff two files hold the same array (and metadata, if requested)."""
    return diff_report(a, b, include_metadata) is None


_DTYPE_ELTYPE = {"i": fmt.ELTYPE_INT, "u": fmt.ELTYPE_UINT, "f": fmt.ELTYPE_FLOAT,
                 "c": fmt.ELTYPE_COMPLEX}


def from_numpy(arr, big_endian: bool = False, metadata: bytes = b"") -> RaArray:
    """Build an RaArray from a numpy array, dims[0] varying fastest."""
    arr = np.asarray(arr)
    if arr.dtype in (np.dtype(np.longdouble), np.dtype(np.clongdouble)):
        raise InvalidType(
            "platform long double is not IEEE binary128; cast to float64/complex128 "
            "or encode through encode_elements with a Float(16) kind"
        )
    eltype = _DTYPE_ELTYPE.get(arr.dtype.kind)
    if eltype is None:
        raise InvalidType(f"no element type code for dtype {arr.dtype}")
    header = make_header(eltype, arr.dtype.itemsize, arr.shape, big_endian)
    kind = kind_of(header)
    data = encode_elements(np.ravel(arr, order="F"), kind, big_endian)
    return RaArray(header, data, metadata)


def to_numpy(arr: RaArray) -> np.ndarray:
    """Decode an RaArray to a numpy array of the header's shape."""
    values = arr.values()
    if isinstance(values, list):
        raise InvalidType(
            "user-struct data has no numpy interpretation; use RaArray.values()"
        )
    return values.reshape(arr.header.dims, order="F")


def read(path, max_bytes: int = DEFAULT_READ_CAP) -> np.ndarray:
    """Read a file straight to a numpy array (metadata discarded)."""
    return to_numpy(read_array(path, max_bytes))


def write(path, arr, big_endian: bool = False, metadata: bytes = b"") -> None:
    """Write a numpy array as a RawArray file."""
    write_array(path, from_numpy(arr, big_endian, metadata))
