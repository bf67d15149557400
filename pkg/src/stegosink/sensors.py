"""Sensor aggregates and the sink -> fusion center transport.

Record layout (big-endian, 15 bytes)::

    sensor_id u16 | timestamp_ms u64 | kind u8 | value_millis i32

An aggregate is ``count u16`` followed by ``count`` records.

Wire message: ``b"STG1" | u32 big-endian length | PNG bytes``, one message
per connection. File-drop mode writes the same bytes to a file.
"""
import enum
import logging
import socket
import struct
from dataclasses import dataclass

from . import codec
from .errors import (
    BadKind,
    BadProtocolMagic,
    ConnectionFailed,
    LengthOverflow,
    TooManyRecords,
    TruncatedFrame,
    TruncatedMessage,
)
from .image import ImageFormat, load_image, save_image

log = logging.getLogger(__name__)

RECORD = struct.Struct(">HQBi")
COUNT = struct.Struct(">H")
RECORD_SIZE = RECORD.size
MAX_RECORDS = (1 << 16) - 1

PROTOCOL_MAGIC = b"STG1"
MESSAGE_HEADER = struct.Struct(">4sI")
DEFAULT_MAX_LENGTH = 64 * 1024 * 1024


class SensorKind(enum.IntEnum):
    TEMPERATURE = 0
    PRESSURE = 1
    MOTION = 2
    SOUND = 3
    OTHER = 4


@dataclass(frozen=True)
class SensorRecord:
    sensor_id: int
    timestamp: int
    kind: int
    value: int

    def __post_init__(self):
        if not 0 <= self.sensor_id < 1 << 16:
            raise ValueError(f"sensor_id {self.sensor_id} out of u16 range")
        if not 0 <= self.timestamp < 1 << 64:
            raise ValueError(f"timestamp {self.timestamp} out of u64 range")
        if not -(1 << 31) <= self.value < 1 << 31:
            raise ValueError(f"value {self.value} out of i32 range")
        if not 0 <= self.kind <= max(SensorKind):
            raise BadKind(f"unknown sensor kind {self.kind}")

    def pack(self):
        return RECORD.pack(self.sensor_id, self.timestamp, self.kind, self.value)


def encode_aggregate(records):
    records = list(records)
    if len(records) > MAX_RECORDS:
        raise TooManyRecords(f"{len(records)} records exceed the u16 count field")
    return COUNT.pack(len(records)) + b"".join(r.pack() for r in records)


def decode_aggregate(data):
    data = bytes(data)
    if len(data) < COUNT.size:
        raise TruncatedFrame("aggregate shorter than its count field")
    (count,) = COUNT.unpack_from(data)
    expected = COUNT.size + RECORD_SIZE * count
    if len(data) != expected:
        raise TruncatedFrame(f"aggregate of {count} records needs {expected} bytes, got {len(data)}")
    records = []
    for off in range(COUNT.size, expected, RECORD_SIZE):
        sensor_id, ts, kind, value = RECORD.unpack_from(data, off)
        if kind > max(SensorKind):
            raise BadKind(f"record at byte {off} has unknown kind {kind}")
        records.append(SensorRecord(sensor_id, ts, kind, value))
    return records


@dataclass(frozen=True)
class SendResult:
    bytes_sent: int
    payload_bytes: int
    capacity_bits: int


@dataclass(frozen=True)
class Reception:
    records: list
    width: int
    height: int
    payload_bytes: int


def encode_message(png):
    return MESSAGE_HEADER.pack(PROTOCOL_MAGIC, len(png)) + png


def build_message(records, cover):
    """Embed the aggregate of ``records`` in ``cover``; returns (message, payload size)."""
    payload = encode_aggregate(records)
    stego = codec.embed(cover, payload)
    return encode_message(save_image(stego, ImageFormat.PNG)), len(payload)


def _read_exact(stream, n):
    chunks = []
    remaining = n
    while remaining:
        chunk = stream.read(remaining)
        if not chunk:
            break
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_message(stream, max_length=DEFAULT_MAX_LENGTH):
    """Read one framed message from a binary stream; returns the PNG bytes."""
    header = _read_exact(stream, MESSAGE_HEADER.size)
    if not PROTOCOL_MAGIC.startswith(header[:4]):
        raise BadProtocolMagic(f"expected {PROTOCOL_MAGIC!r}, got {header[:4]!r}")
    if len(header) < MESSAGE_HEADER.size:
        raise TruncatedMessage("stream ended inside the message header")
    _, length = MESSAGE_HEADER.unpack(header)
    if length > max_length:
        raise LengthOverflow(f"declared length {length} exceeds the {max_length}-byte limit")
    body = _read_exact(stream, length)
    if len(body) != length:
        raise TruncatedMessage(f"expected {length} body bytes, got {len(body)}")
    return body


def decode_message(png):
    stego = load_image(png, ImageFormat.PNG)
    payload = codec.extract(stego)
    return Reception(decode_aggregate(payload), stego.width, stego.height, len(payload))


def receive_from_stream(stream, max_length=DEFAULT_MAX_LENGTH):
    return decode_message(read_message(stream, max_length))


def parse_endpoint(text):
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"endpoint must look like HOST:PORT, got {text!r}")
    return host.strip("[]") or "127.0.0.1", int(port)


def sink_send(records, cover, endpoint, timeout=30.0):
    """Embed ``records`` in ``cover`` and deliver one message to ``endpoint``."""
    message, payload_len = build_message(records, cover)
    if isinstance(endpoint, str):
        endpoint = parse_endpoint(endpoint)
    try:
        with socket.create_connection(endpoint, timeout=timeout) as sock:
            sock.sendall(message)
            sock.shutdown(socket.SHUT_WR)
    except OSError as exc:
        raise ConnectionFailed(f"cannot deliver to {endpoint[0]}:{endpoint[1]}: {exc}") from exc
    log.info("sent %d records (%d payload bytes) to %s:%s", len(records), payload_len, *endpoint)
    return SendResult(len(message), payload_len, codec.capacity_bits(cover))


def sink_write_file(records, cover, path):
    """File-drop variant of :func:`sink_send`."""
    message, payload_len = build_message(records, cover)
    with open(path, "wb") as fh:
        fh.write(message)
    return SendResult(len(message), payload_len, codec.capacity_bits(cover))


def fusion_read_file(path, max_length=DEFAULT_MAX_LENGTH):
    with open(path, "rb") as fh:
        return receive_from_stream(fh, max_length)


def fusion_receive(listener, max_length=DEFAULT_MAX_LENGTH, timeout=None):
    """Accept one connection on a bound, listening socket and decode its message."""
    conn, peer = listener.accept()
    with conn:
        conn.settimeout(timeout)
        with conn.makefile("rb") as stream:
            reception = receive_from_stream(stream, max_length)
    log.info("received %d records from %s", len(reception.records), peer)
    return reception


class FusionCenter:
    """Listening endpoint that decodes one message per connection."""

    def __init__(self, endpoint=("127.0.0.1", 0), max_length=DEFAULT_MAX_LENGTH, backlog=8):
        if isinstance(endpoint, str):
            endpoint = parse_endpoint(endpoint)
        self.max_length = max_length
        family = socket.AF_INET6 if ":" in endpoint[0] else socket.AF_INET
        self.sock = socket.socket(family, socket.SOCK_STREAM)
        try:
            self.sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self.sock.bind(endpoint)
            self.sock.listen(backlog)
        except OSError:
            self.sock.close()
            raise

    @property
    def address(self):
        return self.sock.getsockname()[:2]

    def receive_one(self, timeout=None):
        return fusion_receive(self.sock, self.max_length, timeout)

    def close(self):
        self.sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
