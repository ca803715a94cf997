"""Element kind resolution and the dims[0]-fastest linearization."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rawarray import errors
from rawarray.kinds import ElementKind, Family, linear_index, resolve_kind


class TestResolveKind:
    def test_quad_float(self):
        assert resolve_kind(3, 16) == ElementKind(Family.FLOAT, 16)

    def test_half_float(self):
        assert resolve_kind(3, 2) == ElementKind(Family.FLOAT, 2)

    def test_complex_single(self):
        k = resolve_kind(4, 8)
        assert k == ElementKind(Family.COMPLEX, 4)
        assert k.stride == 8

    def test_complex_half_components(self):
        assert resolve_kind(4, 4) == ElementKind(Family.COMPLEX, 2)

    def test_no_24_bit_float(self):
        with pytest.raises(errors.UnsupportedWidth):
            resolve_kind(3, 3)

    def test_reserved(self):
        with pytest.raises(errors.ReservedType):
            resolve_kind(5, 8)

    @pytest.mark.parametrize("eltype", [1, 2])
    @pytest.mark.parametrize("width", [1, 2, 4, 8])
    def test_native_int_widths(self, eltype, width):
        k = resolve_kind(eltype, width)
        assert k.family is (Family.INT if eltype == 1 else Family.UINT)
        assert k.stride == width

    @pytest.mark.parametrize("eltype", [1, 2])
    def test_wide_ints_are_opaque_chunks(self, eltype):
        # no machine integer above 8 bytes: stored and read as exact bytes
        k = resolve_kind(eltype, 64)
        assert k.family is Family.USER_STRUCT
        assert k.stride == 64

    @pytest.mark.parametrize("eltype,width", [(1, 3), (2, 5), (1, 7), (4, 6), (4, 2), (4, 32)])
    def test_unsupported_widths(self, eltype, width):
        with pytest.raises(errors.UnsupportedWidth):
            resolve_kind(eltype, width)

    def test_user_struct_any_stride(self):
        assert resolve_kind(0, 17) == ElementKind(Family.USER_STRUCT, 17)

    def test_dtype_mapping(self):
        assert resolve_kind(3, 4).dtype() == np.dtype("<f4")
        assert resolve_kind(3, 4).dtype(big_endian=True) == np.dtype(">f4")
        assert resolve_kind(4, 8).dtype() == np.dtype("<c8")
        assert resolve_kind(1, 2).dtype() == np.dtype("<i2")
        assert resolve_kind(3, 16).dtype() is None
        assert resolve_kind(4, 4).dtype() is None
        assert resolve_kind(0, 5).dtype() is None


def odometer(dims):
    """Independent oracle: indices enumerated with axis 0 spinning fastest."""
    return itertools.product(*(range(d) for d in reversed(dims)))


class TestLinearIndex:
    def test_origin(self):
        assert linear_index([0, 0], [3, 4]) == 0

    def test_first_axis_fastest(self):
        assert linear_index([2, 0], [3, 4]) == 2

    def test_second_axis_stride(self):
        # frozen from the odometer oracle below: (0,1) is the 4th cell visited
        assert linear_index([0, 1], [3, 4]) == 3

    def test_matches_odometer_oracle(self):
        for dims in [(3, 4), (2, 3, 4), (5,), (1, 1, 1), (4, 1, 3)]:
            for pos, rev_idx in enumerate(odometer(dims)):
                idx = tuple(reversed(rev_idx))
                assert linear_index(idx, dims) == pos

    def test_out_of_bounds(self):
        with pytest.raises(errors.OutOfBounds):
            linear_index([3, 0], [3, 4])
        with pytest.raises(errors.OutOfBounds):
            linear_index([0], [3, 4])

    def test_scalar(self):
        assert linear_index([], []) == 0

    @given(st.lists(st.integers(min_value=1, max_value=10), min_size=1, max_size=4))
    def test_bijection(self, dims):
        # exhaustive over small lattices: every cell hits a distinct offset
        if math.prod(dims) > 1000:
            dims = dims[:2]
        seen = set()
        for rev_idx in odometer(dims):
            offset = linear_index(tuple(reversed(rev_idx)), dims)
            assert 0 <= offset < math.prod(dims)
            seen.add(offset)
        assert len(seen) == math.prod(dims)

    def test_matches_numpy_fortran_order(self):
        arr = np.arange(24).reshape((2, 3, 4), order="F")
        for idx in np.ndindex(2, 3, 4):
            assert arr[idx] == linear_index(idx, (2, 3, 4))
