"""File-level reading, writing, mapping, metadata, and identity."""

import hashlib
import io as stdio
import os
import struct

import numpy as np
import pytest

import rawarray as ra
from rawarray import errors
from rawarray.io import DEFAULT_READ_CAP

from conftest import canonical_fixture_array


def write_tmp(tmp_path, arr, name="a.ra"):
    path = tmp_path / name
    ra.write_array(path, arr)
    return path


class TestWriteArray:
    def test_scalar_file_size(self, tmp_path):
        arr = ra.RaArray(ra.make_header(3, 8, []), struct.pack("<d", 0.0))
        path = write_tmp(tmp_path, arr)
        assert path.stat().st_size == 56
        assert ra.read_array(path) == arr

    def test_fixture_bytes_exact(self, tmp_path):
        # Independent byte construction of the canonical 3x4 complex fixture:
        # header words then 12 (k, -1/k) float pairs, all little-endian.
        expected = struct.pack("<8Q", 0x7961727261776172, 0, 4, 8, 96, 2, 3, 4)
        for k in range(12):
            expected += struct.pack("<2f", k, -np.inf if k == 0 else -1.0 / k)
        path = write_tmp(tmp_path, canonical_fixture_array())
        assert path.read_bytes() == expected

    def test_shipped_fixture_is_reproducible(self, tmp_path, fixture_path):
        path = write_tmp(tmp_path, canonical_fixture_array())
        assert path.read_bytes() == fixture_path.read_bytes()

    def test_write_to_stream(self):
        arr = ra.from_numpy(np.arange(4, dtype=np.int16), metadata=b"xy")
        buf = stdio.BytesIO()
        ra.write_array(buf, arr)
        assert ra.read_array(stdio.BytesIO(buf.getvalue())) == arr

    def test_checksum_stable_across_writes(self, tmp_path):
        arr = ra.from_numpy(np.linspace(0, 1, 37, dtype=np.float32))
        d1 = hashlib.md5(write_tmp(tmp_path, arr, "1.ra").read_bytes()).hexdigest()
        d2 = hashlib.md5(write_tmp(tmp_path, arr, "2.ra").read_bytes()).hexdigest()
        assert d1 == d2

    def test_atomic_on_rename_failure(self, tmp_path, monkeypatch):
        path = write_tmp(tmp_path, ra.from_numpy(np.zeros(3, dtype=np.uint8)))
        before = path.read_bytes()

        def boom(src, dst):
            raise OSError("simulated failure between temp write and rename")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            ra.write_array(path, ra.from_numpy(np.ones(3, dtype=np.uint8)))
        assert path.read_bytes() == before
        assert [p for p in os.listdir(tmp_path) if p.startswith(".ra-tmp-")] == []

    def test_invariant_violation(self):
        with pytest.raises(errors.InvariantViolation):
            ra.RaArray(ra.make_header(3, 4, [4]), b"\x00" * 15)


class TestReadArray:
    def test_fixture(self, fixture_path):
        arr = ra.read_array(fixture_path)
        assert (arr.header.eltype, arr.header.elbyte) == (4, 8)
        assert arr.header.dims == (3, 4)
        assert len(arr.data) == 96
        assert arr.metadata == b""
        values = arr.values()
        assert values[0] == complex(0, -np.inf)
        assert values[3] == complex(3, -1.0 / 3.0)

    def test_trailing_metadata(self, tmp_path, fixture_path):
        path = tmp_path / "m.ra"
        path.write_bytes(fixture_path.read_bytes() + b"thirteen byte")
        arr = ra.read_array(path)
        assert arr.metadata == b"thirteen byte"
        assert len(arr.data) == 96

    def test_truncated_data(self, tmp_path, fixture_path):
        path = tmp_path / "t.ra"
        path.write_bytes(fixture_path.read_bytes()[:80])
        with pytest.raises(errors.TruncatedData):
            ra.read_array(path)

    def test_read_cap(self, tmp_path):
        path = write_tmp(tmp_path, ra.from_numpy(np.zeros(1000, dtype=np.uint8)))
        with pytest.raises(errors.ExplicitlyTooLarge):
            ra.read_array(path, max_bytes=999)
        assert ra.read_array(path, max_bytes=1000).header.data_length == 1000
        assert DEFAULT_READ_CAP == 16 * 2**30

    def test_round_trip_with_metadata(self, tmp_path):
        arr = ra.from_numpy(np.arange(6, dtype=np.float64).reshape(2, 3),
                            metadata=b'{"unit":"mm"}')
        assert ra.read_array(write_tmp(tmp_path, arr)) == arr


class TestReadHeaderOnly:
    def test_fixture(self, fixture_path):
        h = ra.read_header_only(fixture_path)
        assert (h.eltype, h.elbyte, h.data_length, h.ndims) == (4, 8, 96, 2)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.ra"
        path.touch()
        with pytest.raises(errors.Truncated):
            ra.read_header_only(path)

    def test_sparse_large_file_is_header_time(self, tmp_path):
        # 10 GB claimed data, sparse on disk: header read must not touch it
        import time

        path = tmp_path / "big.ra"
        n = 10_000_000_000
        header = ra.make_header(2, 1, [n])
        with open(path, "wb") as f:
            f.write(ra.encode_header(header))
            try:
                f.truncate(ra.header_len(1) + n)
            except OSError:
                pytest.skip("filesystem refuses sparse files")
        start = time.perf_counter()
        assert ra.read_header_only(path) == header
        assert time.perf_counter() - start < 1.0


class TestMapArray:
    def test_equals_buffered_read(self, tmp_path, fixture_path):
        with ra.map_array(fixture_path) as view:
            assert bytes(view.data) == ra.read_array(fixture_path).data
            assert len(view) == 96

    def test_zero_copy_sees_external_writes(self, tmp_path):
        path = write_tmp(tmp_path, ra.from_numpy(np.zeros(8, dtype=np.uint8)))
        with ra.map_array(path) as view:
            offset = ra.header_len(1)
            with open(path, "r+b") as f:
                f.seek(offset)
                f.write(b"\xaa")
            assert view.data[0] == 0xAA

    def test_as_numpy(self, tmp_path):
        arr = np.arange(12, dtype=np.float32).reshape(3, 4)
        path = tmp_path / "m.ra"
        ra.write(path, arr)
        with ra.map_array(path) as view:
            out = view.as_numpy()
            assert np.array_equal(out, arr)
            with pytest.raises(ValueError):
                out[0, 0] = 5.0  # read-only window

    def test_empty_data_view(self, tmp_path):
        path = write_tmp(tmp_path, ra.from_numpy(np.zeros((0, 4), dtype=np.float32)))
        with ra.map_array(path) as view:
            assert len(view) == 0

    def test_short_file_rejected_before_view(self, tmp_path, fixture_path):
        path = tmp_path / "short.ra"
        path.write_bytes(fixture_path.read_bytes()[:100])
        with pytest.raises(errors.TruncatedData):
            ra.map_array(path)

    def test_env_var_disables_mapping(self, tmp_path, fixture_path, monkeypatch):
        monkeypatch.setenv("RA_MMAP", "0")
        with pytest.raises(errors.MappingUnsupported):
            ra.map_array(fixture_path)

    def test_big_endian_view(self, tmp_path):
        arr = np.arange(5, dtype=np.int32)
        path = tmp_path / "be.ra"
        ra.write(path, arr, big_endian=True)
        with ra.map_array(path) as view:
            assert view.as_numpy().dtype == np.dtype(">i4")
            assert np.array_equal(view.as_numpy(), arr)


class TestAppendMetadata:
    def test_append(self, tmp_path, fixture_path):
        path = tmp_path / "m.ra"
        path.write_bytes(fixture_path.read_bytes())
        ra.append_metadata(path, b'{"unit":"mm"}')
        assert ra.read_metadata(path) == b'{"unit":"mm"}'
        ra.append_metadata(path, b"!")
        assert ra.read_metadata(path) == b'{"unit":"mm"}!'
        assert ra.read_array(path).data == ra.read_array(fixture_path).data

    def test_append_nothing(self, tmp_path, fixture_path):
        path = tmp_path / "m.ra"
        path.write_bytes(fixture_path.read_bytes())
        before = path.read_bytes()
        ra.append_metadata(path, b"")
        assert path.read_bytes() == before

    def test_corrupt_file_untouched(self, tmp_path):
        path = tmp_path / "bad.ra"
        path.write_bytes(b"notmagic" + b"\x00" * 56)
        with pytest.raises(errors.BadMagic):
            ra.append_metadata(path, b"extra")
        assert path.read_bytes() == b"notmagic" + b"\x00" * 56

    def test_truncated_data_untouched(self, tmp_path, fixture_path):
        path = tmp_path / "trunc.ra"
        path.write_bytes(fixture_path.read_bytes()[:100])
        with pytest.raises(errors.TruncatedData):
            ra.append_metadata(path, b"extra")


class TestContentEqual:
    def test_identical_copy_different_mtime(self, tmp_path, fixture_path):
        copy = tmp_path / "copy.ra"
        copy.write_bytes(fixture_path.read_bytes())
        os.utime(copy, (0, 0))
        assert ra.content_equal(fixture_path, copy)
        assert ra.content_equal(fixture_path, copy, include_metadata=True)

    def test_endianness_normalized(self, tmp_path):
        # same values stored under both flags; bytes differ, contents equal
        values = np.array([1.5, -2.25, np.pi], dtype=np.float64)
        le = tmp_path / "le.ra"
        be = tmp_path / "be.ra"
        ra.write(le, values, big_endian=False)
        ra.write(be, values, big_endian=True)
        assert le.read_bytes() != be.read_bytes()
        assert ra.content_equal(le, be)
        # independent construction of the big-endian bytes
        assert be.read_bytes()[56:] == struct.pack(">3d", *values)

    def test_data_difference_reported(self, tmp_path, fixture_path):
        mutated = bytearray(fixture_path.read_bytes())
        mutated[64 + 8 * 5] ^= 0xFF  # perturb element 5
        other = tmp_path / "mut.ra"
        other.write_bytes(bytes(mutated))
        assert not ra.content_equal(fixture_path, other)
        assert ra.diff_report(fixture_path, other) == "data element 5"

    def test_metadata_only_difference(self, tmp_path, fixture_path):
        plain = tmp_path / "plain.ra"
        extra = tmp_path / "extra.ra"
        plain.write_bytes(fixture_path.read_bytes())
        extra.write_bytes(fixture_path.read_bytes() + b"x")
        assert ra.content_equal(plain, extra)  # metadata excluded by default
        assert not ra.content_equal(plain, extra, include_metadata=True)

    def test_header_difference(self, tmp_path):
        a = tmp_path / "a.ra"
        b = tmp_path / "b.ra"
        ra.write(a, np.zeros(6, dtype=np.float32))
        ra.write(b, np.zeros((2, 3), dtype=np.float32))
        assert ra.diff_report(a, b).startswith("header field dims")


class TestNumpyBridge:
    def test_fortran_linearization(self, tmp_path):
        # dims[0] varies fastest on disk
        arr = np.array([[0, 3, 6, 9], [1, 4, 7, 10], [2, 5, 8, 11]], dtype=np.int32)
        path = tmp_path / "f.ra"
        ra.write(path, arr)
        stored = ra.read_array(path)
        assert np.array_equal(
            np.frombuffer(stored.data, dtype="<i4"), np.arange(12, dtype=np.int32)
        )
        assert np.array_equal(ra.read(path), arr)

    def test_rejects_long_double(self):
        with pytest.raises(errors.InvalidType):
            ra.from_numpy(np.zeros(3, dtype=np.longdouble))

    def test_rejects_object_dtype(self):
        with pytest.raises(errors.InvalidType):
            ra.from_numpy(np.array(["a", "b"]))

    def test_scalar_array(self, tmp_path):
        path = tmp_path / "s.ra"
        ra.write(path, np.float64(2.5))
        out = ra.read(path)
        assert out.shape == ()
        assert out == 2.5

    @pytest.mark.parametrize("dtype", ["i1", "u2", "f2", "f8", "c8", "c16"])
    @pytest.mark.parametrize("big_endian", [False, True])
    def test_round_trip_dtypes(self, tmp_path, dtype, big_endian):
        rng = np.random.default_rng(3)
        if dtype.startswith(("i", "u")):
            arr = rng.integers(0, 100, (4, 5)).astype(dtype)
        else:
            arr = rng.standard_normal((4, 5)).astype(dtype)
        path = tmp_path / "r.ra"
        ra.write(path, arr, big_endian=big_endian)
        out = ra.read(path)
        assert out.dtype == arr.dtype
        assert np.array_equal(out, arr)
        assert ra.read_header_only(path).big_endian == big_endian
