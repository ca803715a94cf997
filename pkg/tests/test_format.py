"""Header model: bit-exact encoding, decoding, and validation."""

import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rawarray as ra
from rawarray import errors
from rawarray.format import NDIMS_CAP


def words_of(buf: bytes):
    return struct.unpack(f"<{len(buf) // 8}Q", buf)


class TestMakeHeader:
    def test_float32_vector(self):
        h = ra.make_header(3, 4, [10], big_endian=False)
        assert h == ra.Header(flags=0, eltype=3, elbyte=4, data_length=40, dims=(10,))

    def test_complex64_matrix(self):
        # matches the header words of the shipped test.ra fixture
        h = ra.make_header(4, 8, [3, 4], big_endian=False)
        assert (h.flags, h.eltype, h.elbyte, h.data_length, h.dims) == (0, 4, 8, 96, (3, 4))

    def test_zero_extent_dimension(self):
        h = ra.make_header(3, 2, [0], big_endian=False)
        assert h.data_length == 0
        assert h.dims == (0,)

    def test_scalar_has_elbyte_length(self):
        assert ra.make_header(3, 8, []).data_length == 8

    def test_big_endian_flag(self):
        assert ra.make_header(1, 4, [2], big_endian=True).flags == 1
        assert ra.make_header(1, 4, [2], big_endian=False).flags == 0

    @pytest.mark.parametrize(
        "eltype,elbyte",
        [(5, 4), (99, 1), (-1, 4), (3, 0), (0, 0), (4, 7), (4, 1)],
    )
    def test_bad_type_combinations(self, eltype, elbyte):
        with pytest.raises(errors.InvalidType):
            ra.make_header(eltype, elbyte, [4])

    def test_overflow(self):
        with pytest.raises(errors.Overflow):
            ra.make_header(2, 8, [2**62, 2**62])

    def test_negative_dim(self):
        with pytest.raises(errors.InvalidType):
            ra.make_header(2, 1, [-1])


class TestHeaderLen:
    @pytest.mark.parametrize("ndims,expected", [(0, 48), (1, 56), (2, 64), (7, 104)])
    def test_formula(self, ndims, expected):
        assert ra.header_len(ndims) == expected


class TestEncodeHeader:
    def test_known_words(self):
        h = ra.Header(flags=0, eltype=3, elbyte=4, data_length=16, dims=(4,))
        buf = ra.encode_header(h)
        assert len(buf) == 56
        assert buf[:8] == b"rawarray"
        assert words_of(buf) == (0x7961727261776172, 0, 3, 4, 16, 1, 4)

    def test_fixture_prefix_words(self):
        # the decimal rendering od -t uL shows for the magic number
        buf = ra.encode_header(ra.make_header(4, 8, [3, 4]))
        assert words_of(buf)[:6] == (8746397786917265778, 0, 4, 8, 96, 2)

    def test_length_law(self):
        for ndims in range(6):
            h = ra.make_header(2, 1, [1] * ndims)
            assert len(ra.encode_header(h)) == ra.header_len(ndims)

    def test_invalid_header_rejected(self):
        with pytest.raises(errors.SizeMismatch):
            ra.encode_header(ra.Header(flags=0, eltype=3, elbyte=4, data_length=17, dims=(4,)))


class TestDecodeHeader:
    def test_fixture_header(self, fixture_path):
        h = ra.decode_header(fixture_path.read_bytes())
        assert (h.flags, h.eltype, h.elbyte, h.data_length, h.ndims) == (0, 4, 8, 96, 2)

    def test_zero_bytes_is_bad_magic(self):
        with pytest.raises(errors.BadMagic):
            ra.decode_header(b"\x00" * 48)

    def test_empty_is_truncated(self):
        with pytest.raises(errors.Truncated):
            ra.decode_header(b"")

    def test_magic_prefix_but_short(self):
        with pytest.raises(errors.Truncated):
            ra.decode_header(b"rawarray" + b"\x00" * 8)

    def test_size_mismatch(self):
        buf = bytearray(ra.encode_header(ra.make_header(4, 8, [3, 4])))
        buf[32:40] = struct.pack("<Q", 97)
        with pytest.raises(errors.SizeMismatch):
            ra.decode_header(bytes(buf))

    def test_unknown_flags(self):
        buf = bytearray(ra.encode_header(ra.make_header(3, 4, [4])))
        buf[8:16] = struct.pack("<Q", 2)
        with pytest.raises(errors.UnknownFlags):
            ra.decode_header(bytes(buf))

    def test_reserved_eltype(self):
        buf = bytearray(ra.encode_header(ra.make_header(3, 4, [4])))
        buf[16:24] = struct.pack("<Q", 7)
        with pytest.raises(errors.ReservedType) as exc:
            ra.decode_header(bytes(buf))
        assert "reserved type code 7" in str(exc.value)

    def test_dims_cap(self):
        buf = bytearray(ra.encode_header(ra.make_header(3, 4, [4])))
        buf[40:48] = struct.pack("<Q", NDIMS_CAP + 1)
        with pytest.raises(errors.DimsTooLarge):
            ra.decode_header(bytes(buf))

    def test_truncated_dims_vector(self):
        buf = ra.encode_header(ra.make_header(2, 1, [2, 3, 4]))
        with pytest.raises(errors.Truncated):
            ra.decode_header(buf[:-8])

    def test_trailing_bytes_ignored(self):
        h = ra.make_header(2, 1, [5])
        assert ra.decode_header(ra.encode_header(h) + b"junk") == h


@st.composite
def valid_headers(draw):
    eltype = draw(st.sampled_from([0, 1, 2, 3, 4]))
    elbyte = draw(st.integers(min_value=1, max_value=32))
    if eltype == 4 and elbyte % 2:
        elbyte += 1
    dims = draw(st.lists(st.integers(min_value=0, max_value=64), max_size=5))
    return ra.make_header(eltype, elbyte, dims, draw(st.booleans()))


class TestProperties:
    @given(valid_headers())
    def test_round_trip(self, h):
        assert ra.decode_header(ra.encode_header(h)) == h

    @given(valid_headers())
    def test_length_and_magic(self, h):
        buf = ra.encode_header(h)
        assert len(buf) == ra.header_len(h.ndims)
        assert buf.startswith(b"rawarray")

    @settings(max_examples=300)
    @given(st.binary(min_size=0, max_size=120))
    def test_rejection_totality_random(self, blob):
        # random bytes either decode to a valid header or classify cleanly
        try:
            h = ra.decode_header(blob)
        except errors.FormatError:
            return
        h.validate()

    @settings(max_examples=300)
    @given(
        st.binary(min_size=0, max_size=80),
        st.integers(min_value=0, max_value=79),
        st.binary(min_size=1, max_size=8),
    )
    def test_rejection_totality_mutated(self, tail, pos, patch):
        buf = bytearray(b"rawarray" + tail)
        buf[pos : pos + len(patch)] = patch
        try:
            h = ra.decode_header(bytes(buf))
        except errors.FormatError:
            return
        h.validate()
