"""mini-ra: read/write entry points for CI conformance jobs."""

from __future__ import annotations

import argparse
import sys

from . import MiniError, mini_header, mini_read, mini_write


def _cmd_read(args) -> int:
    header, values, metadata = mini_read(args.file)
    print(f"eltype={header.eltype} elbyte={header.elbyte} "
          f"dims={','.join(map(str, header.dims)) or '-'} "
          f"endian={'big' if header.big_endian else 'little'} "
          f"metadata={len(metadata)}")
    for v in values:
        print(v.hex() if isinstance(v, bytes) else v)
    return 0


def _cmd_write(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(",")) if args.dims else ()
    header = mini_header(args.eltype, args.elbyte, dims, args.big_endian)
    tokens = args.values.split()
    if args.eltype == 0 or (args.eltype in (1, 2) and args.elbyte > 8):
        values = [bytes.fromhex(t) for t in tokens]
    elif args.eltype in (1, 2):
        values = [int(t, 0) for t in tokens]
    elif args.eltype == 3:
        values = [float(t) for t in tokens]
    else:
        values = [complex(t) for t in tokens]
    if len(values) != header.count:
        raise MiniError(f"got {len(values)} values, need {header.count}")
    mini_write(args.out, header, values, args.metadata.encode())
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mini-ra")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("read")
    p.add_argument("file")
    p.set_defaults(func=_cmd_read)

    p = sub.add_parser("write")
    p.add_argument("out")
    p.add_argument("--eltype", type=int, required=True)
    p.add_argument("--elbyte", type=int, required=True)
    p.add_argument("--dims", default="")
    p.add_argument("--values", required=True, help="whitespace-separated tokens")
    p.add_argument("--big-endian", action="store_true")
    p.add_argument("--metadata", default="")
    p.set_defaults(func=_cmd_write)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MiniError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
