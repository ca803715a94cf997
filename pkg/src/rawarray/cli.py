"""The `ra` command-line tool: inspect, dump, create, convert, compare.

Exit codes follow one contract everywhere: 0 success (or files equal),
1 runtime/I-O failure (or files differ), 2 malformed input.

The dump subcommand mirrors the classic octal-dump workflows so files
remain introspectable with nothing but a pager: `--format u64` is the
od -t uL view of the numeric header, `--format ascii` the od -a view that
makes the magic readable, and `--format float` the od -j HLEN -f view of
the data segment.  `--format auto` goes one step further than od and
renders elements per the header's actual type, including complex pairs.
"""

from __future__ import annotations

import argparse
import math
import os
import struct
import sys

import numpy as np

from . import format as fmt
from .elements import encode_elements
from .errors import (
    CountMismatch,
    FormatError,
    RaError,
    TruncatedData,
    UnrepresentableValue,
    UnsupportedSourceShape,
)
from .io import RaArray, diff_report, read_array, read_header_only, write_array
from .kinds import Family, kind_of, resolve_kind

# od -a character names (bytes are masked to 7 bits, as od does)
_OD_NAMES = (
    "nul soh stx etx eot enq ack bel  bs  ht  nl  vt  ff  cr  so  si "
    "dle dc1 dc2 dc3 dc4 nak syn etb can  em sub esc  fs  gs  rs  us"
).split() + [chr(c) for c in range(33, 127)]


def _od_name(byte: int) -> str:
    byte &= 0x7F
    if byte == 32:
        return "sp"
    if byte == 127:
        return "del"
    return _OD_NAMES[byte] if byte < 33 else chr(byte)


def _fmt_float(v) -> str:
    return f"{float(v):.6e}"  # renders inf/-inf/nan literally


def _fmt_element(v, family: Family) -> str:
    if family is Family.COMPLEX:
        return f"({_fmt_float(v.real)}, {_fmt_float(v.imag)})"
    if family is Family.FLOAT:
        return _fmt_float(v)
    if family is Family.USER_STRUCT:
        return v.hex()
    return str(int(v))


def cmd_info(args) -> int:
    header = read_header_only(args.file)
    size = os.stat(args.file).st_size
    body = fmt.header_len(header.ndims) + header.data_length
    if size < body:
        raise TruncatedData(header.data_length, size - fmt.header_len(header.ndims))
    print("magic: ok")
    print(f"endianness: {'big' if header.big_endian else 'little'}")
    print(f"eltype: {fmt.ELTYPE_NAMES[header.eltype]}")
    print(f"elbyte: {header.elbyte}")
    print(f"data_length: {header.data_length}")
    print(f"ndims: {header.ndims}")
    print(f"dims: {','.join(str(d) for d in header.dims) if header.dims else '-'}")
    print(f"metadata: {size - body} bytes")
    return 0


def _dump_od_lines(items, start_offset: int, per_line: int, item_width: int, fmt_item):
    """od-style lines: octal offset, fixed-width items, trailing offset."""
    lines = []
    offset = start_offset
    for i in range(0, len(items), per_line):
        row = items[i : i + per_line]
        lines.append(f"{offset:07o}" + "".join(fmt_item(x) for x in row))
        offset += item_width * len(row)
    lines.append(f"{offset:07o}")
    return lines


def cmd_dump(args) -> int:
    limit = args.limit
    if args.format == "ascii":
        with open(args.file, "rb") as f:
            blob = f.read()
        items = blob if limit is None else blob[:limit]
        print("\n".join(_dump_od_lines(items, 0, 16, 1, lambda b: f" {_od_name(b):>3}")))
        return 0
    if args.format == "u64":
        with open(args.file, "rb") as f:
            blob = f.read()
        words = [w[0] for w in struct.iter_unpack("<Q", blob[: 8 * (len(blob) // 8)])]
        if limit is not None:
            words = words[:limit]
        print("\n".join(_dump_od_lines(words, 0, 2, 8, lambda w: f" {w:>22}")))
        return 0

    arr = read_array(args.file)
    if args.format == "float":
        # od -j HLEN -f: reinterpret the data segment as little-endian f32
        data = arr.data[: 4 * (len(arr.data) // 4)]
        vals = list(np.frombuffer(data, dtype="<f4"))
        if limit is not None:
            vals = vals[:limit]
        start = fmt.header_len(arr.header.ndims)
        print("\n".join(_dump_od_lines(vals, start, 4, 4, lambda v: f"{_fmt_float(v):>16}")))
        return 0

    kind = kind_of(arr.header)
    if args.format == "hex":
        stride = kind.stride
        chunks = [arr.data[i : i + stride] for i in range(0, len(arr.data), stride)]
        for chunk in chunks if limit is None else chunks[:limit]:
            print(chunk.hex())
        return 0

    values = arr.values()
    if limit is not None:
        values = values[:limit]
    for v in values:
        print(_fmt_element(v, kind.family))
    return 0


_ELTYPE_BY_NAME = {name: code for code, name in fmt.ELTYPE_NAMES.items()}


def _parse_dims(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _parse_token(token: str, family: Family, stride: int):
    try:
        if family is Family.USER_STRUCT:
            chunk = bytes.fromhex(token)
            if len(chunk) != stride:
                raise ValueError(f"need {2 * stride} hex digits")
            return chunk
        if family is Family.COMPLEX:
            return complex(token)
        if family is Family.FLOAT:
            return float(token)
        return int(token, 0)
    except ValueError as exc:
        raise UnrepresentableValue(f"cannot parse {token!r} as {family.value}: {exc}") from None


def cmd_create(args) -> int:
    eltype = _ELTYPE_BY_NAME.get(args.eltype)
    if eltype is None:
        raise UnrepresentableValue(
            f"unknown eltype {args.eltype!r}; choose from {sorted(_ELTYPE_BY_NAME)}"
        )
    dims = _parse_dims(args.dims)
    header = fmt.make_header(eltype, args.elbyte, dims, args.endian == "big")
    kind = resolve_kind(eltype, args.elbyte)
    count = header.element_count

    if args.raw is not None:
        with open(args.raw, "rb") as f:
            data = f.read()
        if len(data) != header.data_length:
            raise CountMismatch(
                f"raw source holds {len(data)} bytes, need {header.data_length}"
            )
    else:
        if args.text is not None:
            if args.text == "-":
                tokens = sys.stdin.read().split()
            else:
                with open(args.text) as f:
                    tokens = f.read().split()
            if len(tokens) != count:
                raise CountMismatch(f"got {len(tokens)} values, need {count}")
        else:
            tokens = [args.fill] * count
        values = [_parse_token(t, kind.family, kind.stride) for t in tokens]
        data = encode_elements(values, kind, header.big_endian)

    write_array(args.out, RaArray(header, data))
    return 0


def _idx_to_ra(path: str) -> RaArray:
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < 4 or blob[0] != 0 or blob[1] != 0:
        raise FormatError(f"not an IDX file: bad magic {blob[:4]!r}")
    code, ndims = blob[2], blob[3]
    typemap = {
        0x08: (fmt.ELTYPE_UINT, 1),
        0x09: (fmt.ELTYPE_INT, 1),
        0x0B: (fmt.ELTYPE_INT, 2),
        0x0C: (fmt.ELTYPE_INT, 4),
        0x0D: (fmt.ELTYPE_FLOAT, 4),
        0x0E: (fmt.ELTYPE_FLOAT, 8),
    }
    if code not in typemap:
        raise FormatError(f"unknown IDX type code {code:#04x}")
    eltype, elbyte = typemap[code]
    if len(blob) < 4 + 4 * ndims:
        raise FormatError("truncated IDX dimension vector")
    idx_dims = struct.unpack_from(f">{ndims}I", blob, 4)
    data = blob[4 + 4 * ndims :]
    if len(data) != elbyte * math.prod(idx_dims):
        raise FormatError(
            f"IDX data is {len(data)} bytes, dims say {elbyte * math.prod(idx_dims)}"
        )
    # IDX stores the last axis fastest; our dims[0] is fastest, so the axis
    # list reverses and the data bytes carry over untouched.  Multi-byte IDX
    # data is big-endian, which the endianness flag records as-is.
    header = fmt.make_header(eltype, elbyte, tuple(reversed(idx_dims)), elbyte > 1)
    return RaArray(header, data)


def _png_to_ra(path: str) -> RaArray:
    from PIL import Image

    from .io import from_numpy

    with Image.open(path) as img:
        if img.mode not in ("L", "RGB"):
            raise UnsupportedSourceShape(
                f"PNG mode {img.mode}; only 8-bit grayscale (L) and RGB convert"
            )
        pixels = np.asarray(img)
    # C-order pixel stream == dims[0]-fastest stream of the reversed shape
    return from_numpy(pixels.transpose())


def _npy_to_ra(path: str) -> RaArray:
    from .io import from_numpy

    arr = np.load(path, allow_pickle=False)
    if arr.dtype.hasobject:
        raise UnsupportedSourceShape("object arrays are not convertible")
    if not arr.flags.c_contiguous:
        raise UnsupportedSourceShape("only C-contiguous npy arrays are supported")
    return from_numpy(arr.transpose(), big_endian=arr.dtype.byteorder == ">")


def _ra_to_png(arr: RaArray, out: str) -> None:
    from PIL import Image

    from .io import to_numpy

    header = arr.header
    if header.eltype != fmt.ELTYPE_UINT or header.elbyte != 1:
        raise UnsupportedSourceShape(
            f"PNG needs 8-bit unsigned pixels, file is eltype "
            f"{fmt.ELTYPE_NAMES[header.eltype]} elbyte {header.elbyte}"
        )
    if header.ndims == 2:
        mode = "L"
    elif header.ndims == 3 and header.dims[0] == 3:
        mode = "RGB"
    else:
        raise UnsupportedSourceShape(
            f"dims {list(header.dims)} do not describe a grayscale or RGB image"
        )
    Image.fromarray(to_numpy(arr).transpose(), mode).save(out, format="PNG")


def cmd_convert(args) -> int:
    pair = (args.source_format, args.target_format)
    if pair[1] == "ra":
        readers = {"idx": _idx_to_ra, "png": _png_to_ra, "npy": _npy_to_ra,
                   "ra": read_array}
        write_array(args.output, readers[pair[0]](args.input))
        return 0
    if pair == ("ra", "png"):
        _ra_to_png(read_array(args.input), args.output)
        return 0
    if pair == ("ra", "raw"):
        with open(args.output, "wb") as f:
            f.write(read_array(args.input).data)
        return 0
    raise UnsupportedSourceShape(f"no conversion from {pair[0]} to {pair[1]}")


def cmd_diff(args) -> int:
    report = diff_report(args.a, args.b, include_metadata=args.metadata)
    if report is None:
        return 0
    print(f"files differ: first difference at {report}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ra", description="inspect, create, convert and compare RawArray files"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="print the decoded header")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("dump", help="print file contents, od-style or typed")
    p.add_argument("file")
    p.add_argument("--format", choices=["auto", "hex", "u64", "float", "ascii"],
                   default="auto")
    p.add_argument("--limit", type=int, default=None, metavar="N",
                   help="cap the number of printed items")
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("create", help="write a new file from values or raw bytes")
    p.add_argument("out")
    p.add_argument("--eltype", required=True,
                   help="struct | int | uint | float | complex")
    p.add_argument("--elbyte", type=int, required=True)
    p.add_argument("--dims", default="", help="comma-separated extents, empty for scalar")
    p.add_argument("--endian", choices=["little", "big"], default="little")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--text", metavar="FILE",
                        help="whitespace-separated values ('-' for stdin)")
    source.add_argument("--raw", metavar="FILE", help="exact data-segment bytes")
    source.add_argument("--fill", metavar="VALUE", help="repeat one value")
    p.set_defaults(func=cmd_create)

    p = sub.add_parser("convert", help="convert between idx/png/npy and ra")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--from", dest="source_format", required=True,
                   choices=["idx", "png", "npy", "ra"])
    p.add_argument("--to", dest="target_format", required=True,
                   choices=["ra", "png", "raw"])
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("diff", help="compare two files by content")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--metadata", action="store_true",
                   help="include the metadata trailer in the comparison")
    p.set_defaults(func=cmd_diff)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
