"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 data / capacity error, 3 I/O or
network error.
"""
import argparse
import csv
import logging
import os
import sys

from . import __version__, codec, experiments, metrics, sensors
from .errors import StegoError
from .image import read_image, write_image

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

log = logging.getLogger("stegosink")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _path(text):
    if not text:
        raise argparse.ArgumentTypeError("path must not be empty")
    return text


def _endpoint(text):
    try:
        return sensors.parse_endpoint(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def read_records_csv(path):
    """Rows of ``id,kind,timestamp,value_millis``; an optional header line is skipped."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and not row[0].strip().isdigit():
                continue
            if len(row) != 4:
                raise StegoError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                sid, kind, ts, value = (int(v) for v in row)
                records.append(sensors.SensorRecord(sid, ts, kind, value))
            except ValueError as exc:
                raise StegoError(f"{path}:{lineno}: {exc}") from None
    return records


def format_record(r):
    return f"{r.sensor_id},{r.kind},{r.timestamp},{r.value}"


def cmd_embed(args):
    cover = read_image(args.cover)
    if args.payload_hex is not None:
        try:
            payload = bytes.fromhex(args.payload_hex)
        except ValueError as exc:
            raise UsageError(f"--payload-hex: {exc}") from None
    else:
        with open(args.payload, "rb") as fh:
            payload = fh.read()
    stego = codec.embed(cover, payload)
    write_image(stego, args.out)
    used = 8 * (len(payload) + 6)
    print(f"embedded {len(payload)} payload bytes: {used} of {codec.capacity_bits(cover)} bits used")
    return EXIT_OK


def cmd_extract(args):
    payload = codec.extract(read_image(args.stego))
    with open(args.out, "wb") as fh:
        fh.write(payload)
    print(f"extracted {len(payload)} payload bytes")
    return EXIT_OK


def cmd_metrics(args):
    cover = read_image(args.cover)
    stego = read_image(args.stego)
    report = metrics.evaluate(cover, stego)
    if args.csv:
        try:
            payload_bytes = len(codec.extract(stego))
        except StegoError:
            payload_bytes = None
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(experiments.CSV_COLUMNS[:8])
        values = [payload_bytes, *report.as_dict().values()]
        w.writerow([os.path.basename(args.stego), stego.width, stego.height]
                   + [experiments.format_value(v) for v in values])
    else:
        for name, value in report.as_dict().items():
            print(f"{name} {experiments.format_value(value)}")
    return EXIT_OK


def cmd_capacity(args):
    cover = read_image(args.cover)
    print(f"{codec.capacity_bits(cover)} bits, {codec.usable_payload_bytes(cover)} payload bytes")
    return EXIT_OK


def cmd_experiment(args):
    if args.spec:
        spec = experiments.load_spec(args.spec)
        if args.perspective is not None and args.perspective != spec.perspective:
            raise UsageError(f"--perspective {args.perspective} disagrees with spec file "
                             f"(perspective {spec.perspective})")
    else:
        if args.perspective is None:
            raise UsageError("--perspective is required without --spec")
        spec = experiments.default_spec(args.perspective, args.seed)
    try:
        spec.validate()
    except ValueError as exc:
        raise StegoError(str(exc)) from None
    table = experiments.run_experiment(spec, workers=args.workers)
    csv_path, manifest_path = experiments.write_outputs(spec, table, args.out_dir)
    print(f"wrote {csv_path} ({len(table.rows)} rows + average) and {manifest_path}")
    return EXIT_OK


def cmd_pipeline_send(args):
    records = read_records_csv(args.records)
    cover = read_image(args.cover)
    if args.to_file:
        result = sensors.sink_write_file(records, cover, args.to_file)
    else:
        result = sensors.sink_send(records, cover, args.to, timeout=args.timeout)
    print(f"sent {len(records)} records ({result.payload_bytes} payload bytes, "
          f"{result.bytes_sent} bytes on the wire)")
    return EXIT_OK


def cmd_pipeline_serve(args):
    if args.from_file:
        reception = sensors.fusion_read_file(args.from_file, args.max_length)
        for r in reception.records:
            print(format_record(r))
        return EXIT_OK
    status = EXIT_OK
    with sensors.FusionCenter(args.listen, max_length=args.max_length) as center:
        host, port = center.address
        print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
        handled = 0
        while args.count is None or handled < args.count:
            handled += 1
            try:
                reception = center.receive_one(timeout=args.timeout)
            except StegoError as exc:
                print(f"rejected message: {exc}", file=sys.stderr, flush=True)
                status = EXIT_DATA
                continue
            except OSError as exc:
                print(f"connection error: {exc}", file=sys.stderr, flush=True)
                status = EXIT_IO
                continue
            for r in reception.records:
                print(format_record(r))
            sys.stdout.flush()
    return status


def build_parser():
    p = _Parser(prog="stegosink", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("embed", help="hide a payload in a cover image")
    e.add_argument("--cover", type=_path, required=True)
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--payload", type=_path, help="payload file")
    src.add_argument("--payload-hex", help="payload as a hex string")
    e.add_argument("--out", type=_path, required=True, help="stego image (.png or .ppm)")
    e.set_defaults(func=cmd_embed)

    x = sub.add_parser("extract", help="recover the payload from a stego image")
    x.add_argument("--stego", type=_path, required=True)
    x.add_argument("--out", type=_path, required=True)
    x.set_defaults(func=cmd_extract)

    m = sub.add_parser("metrics", help="PSNR, MSE, NCC and SSIM of a cover/stego pair")
    m.add_argument("--cover", type=_path, required=True)
    m.add_argument("--stego", type=_path, required=True)
    m.add_argument("--csv", action="store_true", help="print a CSV header and row")
    m.set_defaults(func=cmd_metrics)

    c = sub.add_parser("capacity", help="embedding capacity of a cover image")
    c.add_argument("--cover", type=_path, required=True)
    c.set_defaults(func=cmd_capacity)

    ex = sub.add_parser("experiment", help="run an evaluation perspective and write CSV + manifest")
    ex.add_argument("--perspective", type=int, choices=(1, 2, 3))
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--spec", type=_path, help="JSON experiment spec (defaults are used otherwise)")
    ex.add_argument("--out-dir", type=_path, required=True)
    ex.add_argument("--workers", type=int, default=1)
    ex.set_defaults(func=cmd_experiment)

    pl = sub.add_parser("pipeline", help="sink -> fusion center transport")
    psub = pl.add_subparsers(dest="role", required=True, parser_class=_Parser)

    serve = psub.add_parser("serve", help="receive stego messages and print decoded records")
    where = serve.add_mutually_exclusive_group(required=True)
    where.add_argument("--listen", type=_endpoint, metavar="HOST:PORT")
    where.add_argument("--from-file", type=_path, metavar="PATH")
    serve.add_argument("--count", type=int, help="exit after this many connections")
    serve.add_argument("--timeout", type=float, default=30.0, help="per-connection read timeout")
    serve.add_argument("--max-length", type=int, default=sensors.DEFAULT_MAX_LENGTH)
    serve.set_defaults(func=cmd_pipeline_serve)

    send = psub.add_parser("send", help="embed records in a cover and transmit once")
    dest = send.add_mutually_exclusive_group(required=True)
    dest.add_argument("--to", type=_endpoint, metavar="HOST:PORT")
    dest.add_argument("--to-file", type=_path, metavar="PATH")
    send.add_argument("--cover", type=_path, required=True)
    send.add_argument("--records", type=_path, required=True,
                      help="CSV of id,kind,timestamp,value_millis")
    send.add_argument("--timeout", type=float, default=30.0)
    send.set_defaults(func=cmd_pipeline_send)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"stegosink: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StegoError, ValueError) as exc:
        print(f"stegosink: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"stegosink: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
