"""I/O benchmark harness: stride workloads, image-dataset reads, kernels.

Three stride workloads move the same total bytes through a different
number of I/O calls (many tiny vector files, many small image files, one
large matrix), exposing per-call overhead.  The dataset benchmark reads
the same synthetic images stored both as PNG and as RawArray files.  The
kernels benchmark compares the compiled quad-float codec against the
pure-Python fallback.

Timings use the monotonic clock, run single-threaded, and report medians
over several trials; every trial verifies a random sample of read-back
values before its timing is accepted.  Results land in CSV with one row
per (trial, workload, format, op).
"""

from __future__ import annotations

import argparse
import csv
import math
import shutil
import statistics
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as raio
from ._kernels import compiled, pure

CSV_FIELDS = ["workload", "format", "op", "files", "bytes_total", "elapsed_s",
              "throughput_bps"]

BASE_VECTOR_COUNT = 100_000  # scale=1 totals: one million 32-bit floats
BASE_IMAGE_COUNT = 10_000
BASE_MATRIX_COLS = 100_000


@dataclass(frozen=True)
class BenchRecord:
    workload: str
    format: str
    op: str
    files: int
    bytes_total: int
    elapsed_s: float
    throughput_bps: float

    def __post_init__(self):
        assert self.elapsed_s > 0, "monotonic clock went backwards?"

    @classmethod
    def timed(cls, workload, format, op, files, bytes_total, elapsed_s):
        return cls(workload, format, op, files, bytes_total, elapsed_s,
                   bytes_total / elapsed_s)


class SkippedUnavailable:
    """Marker result for an optional backend that is not installed."""

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"SkippedUnavailable({self.reason!r})"


def stride_workloads(scale: int) -> dict[str, tuple[int, tuple[int, ...]]]:
    """(file count, array shape) per workload; equal total bytes at any scale."""
    if scale < 1:
        raise ValueError("scale must be >= 1")
    return {
        "vectors": (BASE_VECTOR_COUNT // scale, (10,)),
        "images": (BASE_IMAGE_COUNT // scale, (10, 10)),
        "matrix": (1, (10, BASE_MATRIX_COLS // scale)),
    }


class RaBackend:
    name = "ra"
    suffix = ".ra"

    def write(self, path, arr):
        raio.write(path, arr)

    def read(self, path):
        return raio.read(path)


class Hdf5Backend:
    name = "hdf5"
    suffix = ".h5"

    def __init__(self):
        import h5py

        self.h5py = h5py

    def write(self, path, arr):
        with self.h5py.File(path, "w") as f:
            f.create_dataset("data", data=arr)

    def read(self, path):
        with self.h5py.File(path, "r") as f:
            return f["data"][...]


def _workload_arrays(count: int, shape: tuple[int, ...], seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((count, *shape), dtype=np.float32)


def _verify_sample(backend, paths, arrays, rng) -> None:
    for i in rng.choice(len(paths), size=min(5, len(paths)), replace=False):
        if not np.array_equal(backend.read(paths[i]), arrays[i]):
            raise AssertionError(f"read-back mismatch in {paths[i]}")


def _run_strides(backend, scale: int, trials: int, workdir: Path) -> list[BenchRecord]:
    records = []
    rng = np.random.default_rng(0)
    for trial in range(trials):
        for workload, (count, shape) in stride_workloads(scale).items():
            arrays = _workload_arrays(count, shape, seed=hash((workload, trial)) % 2**32)
            nbytes = arrays.nbytes
            subdir = workdir / f"{backend.name}-{workload}-{trial}"
            subdir.mkdir(parents=True)
            paths = [subdir / f"{i}{backend.suffix}" for i in range(count)]

            start = time.perf_counter()
            for path, arr in zip(paths, arrays):
                backend.write(path, arr)
            write_elapsed = time.perf_counter() - start

            start = time.perf_counter()
            for path in paths:
                backend.read(path)
            read_elapsed = time.perf_counter() - start

            _verify_sample(backend, paths, arrays, rng)
            shutil.rmtree(subdir)
            records.append(BenchRecord.timed(workload, backend.name, "write",
                                             count, nbytes, write_elapsed))
            records.append(BenchRecord.timed(workload, backend.name, "read",
                                             count, nbytes, read_elapsed))
    return records


def bench_strides(scale: int = 10, trials: int = 5, workdir=None) -> list[BenchRecord]:
    """Write-then-read the three stride workloads at 1/scale of full size."""
    with _scratch(workdir) as root:
        return _run_strides(RaBackend(), scale, trials, root)


def bench_hdf5_compare(scale: int = 10, trials: int = 5, workdir=None):
    """The stride workloads through HDF5, or SkippedUnavailable without it."""
    try:
        backend = Hdf5Backend()
    except ImportError:
        return SkippedUnavailable("h5py is not installed")
    with _scratch(workdir) as root:
        return _run_strides(backend, scale, trials, root)


def _drop_caches() -> None:
    # Best effort; needs privileges, silently skipped where refused.
    try:
        with open("/proc/sys/vm/drop_caches", "w") as f:
            f.write("3\n")
    except OSError:
        pass


def _dataset_pixels(kind: str, count: int, source, seed: int):
    """Per-image pixel arrays: seeded synthetic by default, or sliced out of
    a real IDX archive when ``source`` is a path to one."""
    if kind == "mnist-like":
        shape = (28, 28)
    elif kind == "cifar-like":
        shape = (36, 36, 3)
    else:
        raise ValueError(f"unknown dataset kind {kind!r}")
    if source != "synthetic":
        from .cli import _idx_to_ra

        arr = _idx_to_ra(source)
        per_image = math.prod(arr.header.dims[:-1])
        available = arr.header.dims[-1]
        if available < count:
            raise ValueError(f"{source} holds {available} images, need {count}")
        if per_image != math.prod(shape):
            raise ValueError(
                f"{source} images have {per_image} bytes, {kind} expects {math.prod(shape)}"
            )
        for i in range(count):
            chunk = arr.data[i * per_image : (i + 1) * per_image]
            yield np.frombuffer(chunk, dtype=np.uint8).reshape(shape)
        return
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield rng.integers(0, 256, shape, dtype=np.uint8)


def prepare_dataset(kind: str, count: int, workdir: Path, seed: int = 0,
                    source="synthetic"):
    """One PNG and one ra file per image, identical pixel content."""
    from PIL import Image

    mode = "L" if kind == "mnist-like" else "RGB"
    png_dir = workdir / f"{kind}-png"
    ra_dir = workdir / f"{kind}-ra"
    png_dir.mkdir(parents=True)
    ra_dir.mkdir(parents=True)
    pngs, ras = [], []
    for i, pixels in enumerate(_dataset_pixels(kind, count, source, seed)):
        png_path = png_dir / f"{i}.png"
        Image.fromarray(pixels, mode).save(png_path, format="PNG")
        ra_path = ra_dir / f"{i}.ra"
        raio.write(ra_path, pixels.transpose())
        pngs.append(png_path)
        ras.append(ra_path)
    return pngs, ras


def _read_png(path) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img)


def bench_dataset_read(kind: str, count: int = 50_000, trials: int = 5,
                       workdir=None, cold: bool = False,
                       source="synthetic") -> list[BenchRecord]:
    """Read every image via the PNG decode path and the ra path, per trial.

    The default count matches a full-scale dataset read; CI-sized runs pass
    something smaller.  ``source`` is "synthetic" (seeded pixels) or a path
    to a real IDX archive to draw images from.  The format measured first
    alternates between trials so page-cache effects spread evenly across
    both; --cold additionally asks the OS to drop caches before each timing
    (silently skipped without privileges).
    """
    with _scratch(workdir) as root:
        pngs, ras = prepare_dataset(kind, count, root, source=source)
        png_bytes = sum(p.stat().st_size for p in pngs)
        ra_bytes = sum(p.stat().st_size for p in ras)
        rng = np.random.default_rng(1)
        records = []
        for trial in range(trials):
            sides = [("png", pngs, _read_png, png_bytes),
                     ("ra", ras, raio.read, ra_bytes)]
            if trial % 2:
                sides.reverse()
            for name, paths, reader, nbytes in sides:
                if cold:
                    _drop_caches()
                start = time.perf_counter()
                for path in paths:
                    reader(path)
                elapsed = time.perf_counter() - start
                records.append(BenchRecord.timed(kind, name, "read",
                                                 count, nbytes, elapsed))
            for i in rng.choice(count, size=min(5, count), replace=False):
                png_pixels = _read_png(pngs[i])
                ra_pixels = raio.read(ras[i]).transpose()
                if not np.array_equal(png_pixels, ra_pixels):
                    raise AssertionError(f"pixel mismatch at image {i}")
        return records


def bench_kernels(n: int = 100_000, trials: int = 5) -> list[BenchRecord]:
    """Compiled vs pure quad-float codec on the same random doubles."""
    rng = np.random.default_rng(2)
    values = rng.standard_normal(n)
    nbytes = 16 * n
    impls = [("pure", pure)] + ([("compiled", compiled)] if compiled else [])
    records = []
    for trial in range(trials):
        for name, impl in impls:
            start = time.perf_counter()
            raw = impl.encode_f128(values, False)
            elapsed = time.perf_counter() - start
            records.append(BenchRecord.timed("quadfloat", name, "write",
                                             0, nbytes, elapsed))
            start = time.perf_counter()
            decoded = impl.decode_f128(raw, False)
            elapsed = time.perf_counter() - start
            records.append(BenchRecord.timed("quadfloat", name, "read",
                                             0, nbytes, elapsed))
            if not np.array_equal(decoded, values):
                raise AssertionError(f"{name} kernel round trip failed")
    return records


def emit_results(records, out) -> None:
    """Write records as CSV with a fixed header row, preserving order."""
    close = False
    if not hasattr(out, "write"):
        out = open(out, "w", newline="")
        close = True
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow([r.workload, r.format, r.op, r.files, r.bytes_total,
                             repr(r.elapsed_s), repr(r.throughput_bps)])
    finally:
        if close:
            out.close()


def median_elapsed(records, workload: str, format: str, op: str) -> float:
    matching = [r.elapsed_s for r in records
                if (r.workload, r.format, r.op) == (workload, format, op)]
    if not matching:
        raise ValueError(f"no records for {workload}/{format}/{op}")
    return statistics.median(matching)


def summarize(records) -> str:
    lines = []
    seen = []
    for r in records:
        key = (r.workload, r.format, r.op)
        if key not in seen:
            seen.append(key)
    for workload, format, op in seen:
        med = median_elapsed(records, workload, format, op)
        files = next(r.files for r in records
                     if (r.workload, r.format, r.op) == (workload, format, op))
        nbytes = next(r.bytes_total for r in records
                      if (r.workload, r.format, r.op) == (workload, format, op))
        lines.append(f"{workload:12s} {format:8s} {op:5s} files={files:<7d} "
                     f"median={med * 1e3:10.3f} ms  {nbytes / med / 1e6:10.1f} MB/s")
    return "\n".join(lines)


def speedup_vs_hdf5(ra_records, hdf5_records, workload: str) -> float:
    """hdf5 median write+read time over ra's: >1 means ra is faster."""
    ra_total = (median_elapsed(ra_records, workload, "ra", "write")
                + median_elapsed(ra_records, workload, "ra", "read"))
    h5_total = (median_elapsed(hdf5_records, workload, "hdf5", "write")
                + median_elapsed(hdf5_records, workload, "hdf5", "read"))
    return h5_total / ra_total


class _scratch:
    """Temporary work directory unless the caller supplies one."""

    def __init__(self, workdir):
        self.workdir = workdir
        self.own = workdir is None

    def __enter__(self) -> Path:
        if self.own:
            self.path = Path(tempfile.mkdtemp(prefix="ra-bench-"))
        else:
            self.path = Path(self.workdir)
            self.path.mkdir(parents=True, exist_ok=True)
        return self.path

    def __exit__(self, *exc):
        if self.own:
            shutil.rmtree(self.path, ignore_errors=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ra-bench", description="RawArray I/O benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strides", help="many-small-files vs one-big-file workloads")
    p.add_argument("--scale", type=int, default=10,
                   help="divide the full workload sizes by N (default 10)")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--dir", default=None, help="scratch directory")

    p = sub.add_parser("dataset", help="PNG decode path vs ra read path")
    p.add_argument("--kind", choices=["mnist-like", "cifar-like"], required=True)
    p.add_argument("--count", type=int, default=50_000,
                   help="images per format (default: full-scale 50000)")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--idx", default=None, metavar="FILE",
                   help="draw real images from this IDX archive instead of synthesizing")
    p.add_argument("--cold", action="store_true",
                   help="drop OS caches before each timing where permitted")
    p.add_argument("--out", default=None)
    p.add_argument("--dir", default=None)

    p = sub.add_parser("hdf5", help="stride workloads vs an HDF5 backend")
    p.add_argument("--scale", type=int, default=10)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--out", default=None)
    p.add_argument("--dir", default=None)

    p = sub.add_parser("kernels", help="compiled vs pure quad-float codec")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    if args.command == "strides":
        records = bench_strides(args.scale, args.trials, args.dir)
    elif args.command == "dataset":
        records = bench_dataset_read(args.kind, args.count, args.trials,
                                     args.dir, args.cold,
                                     source=args.idx or "synthetic")
        for kind in ("png", "ra"):
            med = median_elapsed(records, args.kind, kind, "read")
            print(f"{kind}: median read of {args.count} images: {med:.3f} s")
        ratio = (median_elapsed(records, args.kind, "png", "read")
                 / median_elapsed(records, args.kind, "ra", "read"))
        print(f"ra speedup over png: {ratio:.2f}x")
    elif args.command == "hdf5":
        hdf5_records = bench_hdf5_compare(args.scale, args.trials, args.dir)
        if isinstance(hdf5_records, SkippedUnavailable):
            print(f"skipped: {hdf5_records.reason}")
            return 0
        ra_records = bench_strides(args.scale, args.trials, args.dir)
        records = ra_records + hdf5_records
        for workload in stride_workloads(args.scale):
            ratio = speedup_vs_hdf5(ra_records, hdf5_records, workload)
            print(f"{workload}: ra is {ratio:.2f}x the speed of hdf5 (write+read)")
    else:
        records = bench_kernels(args.n, args.trials)
        if compiled is None:
            print("extension not built; pure-Python timings only")

    print(summarize(records))
    if args.out:
        emit_results(records, args.out)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
