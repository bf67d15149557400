"""Payload framing.

A frame is ``MAGIC (16 bits, 0x5357) | LENGTH (32 bits, big-endian byte
count) | PAYLOAD``, and every byte is expanded to bits most significant bit
first. :func:`bytes_to_bits` / :func:`bits_to_bytes` are the only bit-order
conversions in the package.
"""
import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadMagic, PayloadTooLong, TruncatedStream

MAGIC = 0x5357
HEADER_BYTES = 6
HEADER_BITS = 8 * HEADER_BYTES
MAX_PAYLOAD = (1 << 32) - 1
_HEADER = struct.Struct(">HI")


def bytes_to_bits(data):
    """MSB-first bit expansion as a uint8 array of 0/1."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8), bitorder="big")


def bits_to_bytes(bits):
    """Inverse of :func:`bytes_to_bits`; a trailing partial byte is dropped."""
    bits = np.asarray(bits, dtype=np.uint8)
    whole = bits.size - bits.size % 8
    return np.packbits(bits[:whole], bitorder="big").tobytes()


def frame_bits_for(payload_len):
    return HEADER_BITS + 8 * payload_len


@dataclass(frozen=True, eq=False)
class FramedBitstream:
    bits: np.ndarray
    payload_length: int

    def __len__(self):
        return int(self.bits.size)

    def __eq__(self, other):
        if not isinstance(other, FramedBitstream):
            return NotImplemented
        return self.payload_length == other.payload_length and np.array_equal(self.bits, other.bits)


def frame_bytes(payload):
    """Header plus payload as bytes, ready for bit expansion."""
    payload = bytes(payload)
    if len(payload) > MAX_PAYLOAD:
        raise PayloadTooLong(f"payload of {len(payload)} bytes exceeds the 32-bit length field")
    return _HEADER.pack(MAGIC, len(payload)) + payload


def frame(payload):
    data = frame_bytes(payload)
    bits = bytes_to_bits(data)
    bits.flags.writeable = False
    return FramedBitstream(bits, len(data) - HEADER_BYTES)


def parse_header(header):
    """Return the declared payload length from the 6 header bytes."""
    if len(header) < HEADER_BYTES:
        raise TruncatedStream(f"need {HEADER_BITS} header bits, got {8 * len(header)}")
    magic, length = _HEADER.unpack(bytes(header[:HEADER_BYTES]))
    if magic != MAGIC:
        raise BadMagic(f"frame magic is 0x{magic:04X}, expected 0x{MAGIC:04X}: not a stego frame")
    return length


def deframe_bytes(data):
    """Payload from frame bytes (header included)."""
    length = parse_header(data)
    available = len(data) - HEADER_BYTES
    if available < length:
        raise TruncatedStream(
            f"frame declares {length} payload bytes but only {available} are present"
        )
    return bytes(data[HEADER_BYTES:HEADER_BYTES + length])


def deframe(bits):
    bits = bits.bits if isinstance(bits, FramedBitstream) else np.asarray(bits, dtype=np.uint8)
    if bits.size < HEADER_BITS:
        # the magic check still wins when enough bits for it exist
        if bits.size >= 16 and bits_to_bytes(bits[:16]) != _HEADER.pack(MAGIC, 0)[:2]:
            raise BadMagic("frame magic mismatch: not a stego frame")
        raise TruncatedStream(f"need {HEADER_BITS} header bits, got {bits.size}")
    length = parse_header(bits_to_bytes(bits[:HEADER_BITS]))
    need = frame_bits_for(length)
    if bits.size < need:
        raise TruncatedStream(f"frame declares {need} bits but only {bits.size} are present")
    return bits_to_bytes(bits[HEADER_BITS:need])
