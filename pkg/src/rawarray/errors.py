"""Exception hierarchy for the rawarray package.

Every malformed input is rejected with one of the classified errors below;
parsers never raise bare ValueError/struct.error on bad bytes.  FormatError
subclasses mean "the input file/buffer is not a valid RawArray"; the CLI
maps them to exit code 2.
"""


class RaError(Exception):
    """Base class for all rawarray errors."""


class FormatError(RaError):
    """The input is not a well-formed RawArray file or buffer."""


class BadMagic(FormatError):
    """First 8 bytes are not the 'rawarray' magic."""

    def __init__(self, found: bytes):
        super().__init__(f"bad magic: expected b'rawarray', found {found!r}")
        self.found = found


class Truncated(FormatError):
    """Header ends before 48 + 8*ndims bytes."""

    def __init__(self, needed: int, got: int):
        super().__init__(f"truncated header: need {needed} bytes, got {got}")
        self.needed = needed
        self.got = got


class TruncatedData(FormatError):
    """Data segment ends before data_length bytes."""

    def __init__(self, needed: int, got: int):
        super().__init__(f"truncated data segment: need {needed} bytes, got {got}")
        self.needed = needed
        self.got = got


class UnknownFlags(FormatError):
    """A reserved flag bit (anything but bit 0) is set."""

    def __init__(self, flags: int):
        super().__init__(f"unknown flag bits set: {flags:#018x}")
        self.flags = flags


class ReservedType(FormatError):
    """Element type code is in the reserved range (>= 5)."""

    def __init__(self, eltype: int):
        super().__init__(f"reserved type code {eltype}")
        self.eltype = eltype


class InvalidType(FormatError):
    """Element type/size combination violates the format rules."""


class SizeMismatch(FormatError):
    """data_length does not equal elbyte times the product of dims."""

    def __init__(self, stated: int, computed: int):
        super().__init__(
            f"data length {stated} does not match elbyte * prod(dims) = {computed}"
        )
        self.stated = stated
        self.computed = computed


class DimsTooLarge(FormatError):
    """ndims exceeds the decode sanity cap."""

    def __init__(self, ndims: int, cap: int):
        super().__init__(f"ndims {ndims} exceeds sanity cap {cap}")
        self.ndims = ndims
        self.cap = cap


class Overflow(RaError):
    """elbyte * prod(dims) does not fit in an unsigned 64-bit field."""


class UnsupportedWidth(RaError):
    """No element interpretation exists at this byte width."""


class OutOfBounds(RaError):
    """A per-dimension index lies outside its extent."""


class MisalignedLength(RaError):
    """Raw byte length is not a multiple of the element stride."""


class UnrepresentableValue(RaError):
    """A value cannot be stored exactly enough in the target kind
    (e.g. finite half-float overflow, integer out of range)."""


class InvariantViolation(RaError):
    """An RaArray value breaks its own invariants (corrupt construction)."""


class ExplicitlyTooLarge(RaError):
    """data_length exceeds the configured buffered-read cap; use map_array."""


class MappingUnsupported(RaError):
    """Memory mapping is disabled or refused by the platform/filesystem."""


class CountMismatch(RaError):
    """Element source supplied the wrong number of values/bytes."""


class UnsupportedSourceShape(RaError):
    """Conversion source shape/type cannot be expressed in the target format."""
