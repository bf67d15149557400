"""Evaluation runs and their CSV / manifest output.

* perspective 1: one payload size, many images of equal dimensions
* perspective 2: one image, several payload sizes
* perspective 3: one payload size, the same image source at several dimensions

Synthetic images and random payloads are seeded, so a rerun with the same
spec writes byte-identical files.
"""
import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__, codec, metrics
from .codec import FORMAT_VERSION
from .errors import PayloadExceedsCapacity
from .framing import frame_bits_for
from .image import read_image, synth_image
from .prng import random_bytes, splitmix64_words

CSV_COLUMNS = ["image_name", "width", "height", "payload_bytes", "psnr", "mse", "ncc", "ssim",
               "perspective", "row_type", "note"]
METRIC_COLUMNS = ("psnr", "mse", "ncc", "ssim")

DEFAULT_P1_IMAGES = 20
DEFAULT_P1_PAYLOAD = 8186
DEFAULT_P2_SIZES = (2043, 4086, 6129, 8186)
DEFAULT_P3_DIMENSIONS = (128, 256, 512, 1024)
DEFAULT_P3_PAYLOAD = 2042


@dataclass(frozen=True)
class ImageSource:
    name: str
    path: str = None
    seed: int = None

    def __post_init__(self):
        if (self.path is None) == (self.seed is None):
            raise ValueError(f"image {self.name!r} needs exactly one of path or seed")

    def load(self, dims=None):
        if self.path is not None:
            return read_image(self.path)
        return synth_image(self.seed, *dims)


@dataclass
class ExperimentSpec:
    perspective: int
    images: list
    dimensions: list = field(default_factory=list)
    payload_sizes: list = field(default_factory=list)
    payload_seed: int = 0
    payload_file: str = None
    seed: int = None

    def payload(self, size):
        if self.payload_file is None:
            return random_bytes(self.payload_seed, size).tobytes()
        with open(self.payload_file, "rb") as fh:
            data = fh.read(size)
        if len(data) < size:
            raise ValueError(f"payload file {self.payload_file} has fewer than {size} bytes")
        return data

    def validate(self):
        if self.perspective not in (1, 2, 3):
            raise ValueError(f"perspective must be 1, 2 or 3, got {self.perspective}")
        if not self.images:
            raise ValueError("spec lists no images")
        if not self.payload_sizes or any(s < 0 for s in self.payload_sizes):
            raise ValueError("spec needs non-negative payload sizes")
        if self.perspective in (1, 3) and len(self.payload_sizes) != 1:
            raise ValueError(f"perspective {self.perspective} takes exactly one payload size")
        if self.perspective == 2 and len(self.images) != 1:
            raise ValueError("perspective 2 takes exactly one image")
        if self.perspective == 3:
            synth = [i for i in self.images if i.seed is not None]
            if synth and (len(self.images) != 1 or len(self.dimensions) < 2):
                raise ValueError("perspective 3 takes one synthetic image and at least two dimensions")
            if not synth and len(self.images) < 2:
                raise ValueError("perspective 3 takes at least two image files")
        elif any(i.seed is not None for i in self.images) and len(self.dimensions) != 1:
            raise ValueError(f"perspective {self.perspective} synthetic images need one dimension")


@dataclass(frozen=True)
class ExperimentRow:
    image_name: str
    width: int
    height: int
    payload_bytes: int
    psnr: float
    mse: float
    ncc: float
    ssim: float
    row_type: str = "data"
    note: str = ""


@dataclass
class ExperimentTable:
    perspective: int
    rows: list
    average: ExperimentRow = None

    def all_rows(self):
        return self.rows + ([self.average] if self.average is not None else [])


def _derived_seeds(seed, n):
    return [int(w) for w in splitmix64_words(seed, n)]


def default_spec(perspective, seed=0):
    """The stock desk-scale runs: synthetic covers and a random payload."""
    seeds = _derived_seeds(seed, DEFAULT_P1_IMAGES + 1)
    payload_seed, image_seeds = seeds[0], seeds[1:]
    if perspective == 1:
        images = [ImageSource(f"synth-{i + 1:02d}", seed=s) for i, s in enumerate(image_seeds)]
        return ExperimentSpec(1, images, [(256, 256)], [DEFAULT_P1_PAYLOAD], payload_seed, seed=seed)
    if perspective == 2:
        return ExperimentSpec(2, [ImageSource("synth-01", seed=image_seeds[0])], [(256, 256)],
                              list(DEFAULT_P2_SIZES), payload_seed, seed=seed)
    if perspective == 3:
        return ExperimentSpec(3, [ImageSource("synth-01", seed=image_seeds[0])],
                              [(d, d) for d in DEFAULT_P3_DIMENSIONS], [DEFAULT_P3_PAYLOAD],
                              payload_seed, seed=seed)
    raise ValueError(f"perspective must be 1, 2 or 3, got {perspective}")


def load_spec(path):
    """Read a JSON spec.

    Keys: ``perspective``, ``images`` (list of ``{"name", "path"|"seed"}``),
    ``dimensions`` (list of ``[w, h]``), ``payload_sizes``, and ``payload``
    as ``{"seed": n}`` or ``{"file": path}``. Relative paths resolve against
    the spec's directory.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    images = [ImageSource(im["name"], path=resolve(im["path"]) if "path" in im else None,
                          seed=im.get("seed")) for im in raw["images"]]
    payload = raw.get("payload", {"seed": 0})
    return ExperimentSpec(
        perspective=int(raw["perspective"]),
        images=images,
        dimensions=[tuple(d) for d in raw.get("dimensions", [])],
        payload_sizes=[int(s) for s in raw["payload_sizes"]],
        payload_seed=int(payload.get("seed", 0)),
        payload_file=resolve(payload["file"]) if "file" in payload else None,
        seed=raw.get("seed"),
    )


def _plan(spec):
    """(name, source, dims, payload size) for every row, in output order."""
    p = spec.perspective
    if p == 1:
        size = spec.payload_sizes[0]
        return [(im.name, im, spec.dimensions[0] if spec.dimensions else None, size) for im in spec.images]
    if p == 2:
        im = spec.images[0]
        dims = spec.dimensions[0] if spec.dimensions else None
        return [(im.name, im, dims, size) for size in sorted(spec.payload_sizes)]
    size = spec.payload_sizes[0]
    if spec.images[0].seed is not None:
        im = spec.images[0]
        return [(f"{im.name}@{w}x{h}", im, (w, h), size) for w, h in spec.dimensions]
    return [(im.name, im, None, size) for im in spec.images]


def _measure(job, payloads):
    name, source, dims, size = job
    cover = source.load(dims)
    need = frame_bits_for(size)
    if need > codec.capacity_bits(cover):
        raise PayloadExceedsCapacity(need, codec.capacity_bits(cover))
    stego = codec.embed(cover, payloads[size])
    r = metrics.evaluate(cover, stego)
    return ExperimentRow(name, cover.width, cover.height, size, r.psnr, r.mse, r.ncc, r.ssim)


def _check_capacity(jobs):
    for name, source, dims, size in jobs:
        if dims is None:
            continue
        need, have = frame_bits_for(size), dims[0] * dims[1]
        if need > have:
            raise PayloadExceedsCapacity(need, have)


def average_row(rows):
    finite = [r.psnr for r in rows if not math.isinf(r.psnr)]
    excluded = len(rows) - len(finite)
    psnr = sum(finite) / len(finite) if finite else math.inf
    note = f"psnr_inf_excluded={excluded}" if excluded else ""
    n = len(rows)
    return ExperimentRow("average", None, None, None, psnr,
                         sum(r.mse for r in rows) / n,
                         sum(r.ncc for r in rows) / n,
                         sum(r.ssim for r in rows) / n,
                         row_type="average", note=note)


def run_experiment(spec, workers=1):
    spec.validate()
    jobs = _plan(spec)
    _check_capacity(jobs)
    payloads = {size: spec.payload(size) for size in set(spec.payload_sizes)}
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda j: _measure(j, payloads), jobs))
    else:
        rows = [_measure(j, payloads) for j in jobs]
    if spec.perspective == 1 and len({(r.width, r.height) for r in rows}) > 1:
        raise ValueError("perspective 1 requires images of identical dimensions")
    return ExperimentTable(spec.perspective, rows, average_row(rows))


def run_perspective1(spec, workers=1):
    if spec.perspective != 1:
        raise ValueError("not a perspective-1 spec")
    return run_experiment(spec, workers)


def run_perspective2(spec, workers=1):
    if spec.perspective != 2:
        raise ValueError("not a perspective-2 spec")
    return run_experiment(spec, workers)


def run_perspective3(spec, workers=1):
    if spec.perspective != 3:
        raise ValueError("not a perspective-3 spec")
    return run_experiment(spec, workers)


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def table_to_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in table.all_rows():
        w.writerow([format_value(r.image_name), format_value(r.width), format_value(r.height), format_value(r.payload_bytes),
                    format_value(r.psnr), format_value(r.mse), format_value(r.ncc), format_value(r.ssim),
                    table.perspective, r.row_type, r.note])
    return buf.getvalue()


def write_csv(table, destination):
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(table_to_csv(table))


def read_csv(source):
    """Parse a CSV written by :func:`write_csv` back into a table."""
    with open(source, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows, average, perspective = [], None, None
        for rec in reader:
            def opt_int(k):
                return int(rec[k]) if rec[k] else None
            row = ExperimentRow(rec["image_name"], opt_int("width"), opt_int("height"),
                                opt_int("payload_bytes"),
                                *(float(rec[k]) for k in METRIC_COLUMNS),
                                row_type=rec["row_type"], note=rec["note"])
            perspective = int(rec["perspective"])
            if row.row_type == "average":
                average = row
            else:
                rows.append(row)
    return ExperimentTable(perspective, rows, average)


def manifest_text(spec, table):
    lines = [
        f"format_version={FORMAT_VERSION}",
        f"tool=stegosink {__version__}",
        f"perspective={spec.perspective}",
        f"seed={'' if spec.seed is None else spec.seed}",
        f"payload_source={'file:' + spec.payload_file if spec.payload_file else 'random'}",
        f"payload_seed={spec.payload_seed}",
        "payload_sizes=" + ",".join(str(s) for s in spec.payload_sizes),
        "dimensions=" + ",".join(f"{w}x{h}" for w, h in spec.dimensions),
        "images=" + ",".join(
            f"{im.name}:seed={im.seed}" if im.seed is not None else f"{im.name}:path={im.path}"
            for im in spec.images),
        f"rows={len(table.rows)}",
    ]
    return "\n".join(lines) + "\n"


def write_outputs(spec, table, out_dir):
    """Write ``perspectiveN.csv`` and ``perspectiveN_manifest.txt``; returns both paths."""
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, f"perspective{spec.perspective}")
    csv_path, manifest_path = stem + ".csv", stem + "_manifest.txt"
    write_csv(table, csv_path)
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(manifest_text(spec, table))
    return csv_path, manifest_path
