"""Cyclic LSB substitution (stego format version 1).

Frame bit ``i`` replaces the least significant bit of pixel ``i`` (row-major
from the top-left), in channel red, green, blue, red, ... as ``i`` advances.
One bit per pixel, so a ``w x h`` cover carries ``w*h`` frame bits.
Extraction is blind: only the stego image is needed.
"""
import enum

import numpy as np

from . import kernels
from .errors import PayloadExceedsCapacity, TruncatedStream
from .framing import HEADER_BITS, HEADER_BYTES, frame_bits_for, frame_bytes, parse_header
from .image import RgbImage

FORMAT_VERSION = 1


class Channel(enum.IntEnum):
    RED = 1
    GREEN = 2
    BLUE = 3

    def successor(self):
        return Channel(self % 3 + 1)


def channel_for_bit(i):
    if i < 0:
        raise ValueError("bit ordinal must be non-negative")
    return Channel(i % 3 + 1)


def capacity_bits(img):
    return img.pixel_count


def usable_payload_bytes(img):
    return max(0, (capacity_bits(img) - HEADER_BITS) // 8)


def embed(cover, payload):
    """Return a new stego image carrying ``payload``; ``cover`` is untouched."""
    data = frame_bytes(payload)
    nbits = 8 * len(data)
    available = capacity_bits(cover)
    if nbits > available:
        raise PayloadExceedsCapacity(nbits, available)
    samples = np.array(cover.interleaved(), copy=True)
    kernels.embed_frame(samples, data, nbits)
    return RgbImage(samples.reshape(cover.height, cover.width, 3))


def extract(stego):
    samples = np.ascontiguousarray(stego.interleaved())
    available = capacity_bits(stego)
    if available < HEADER_BITS:
        if available >= 16:
            magic = kernels.extract_frame(samples, 2)
            parse_header(magic + b"\0" * (HEADER_BYTES - 2))
        raise TruncatedStream(f"image holds {available} bits, a frame header needs {HEADER_BITS}")
    length = parse_header(kernels.extract_frame(samples, HEADER_BYTES))
    need = frame_bits_for(length)
    if need > available:
        raise TruncatedStream(
            f"header declares {length} payload bytes ({need} bits) but the image holds {available} bits"
        )
    return kernels.extract_frame(samples, HEADER_BYTES + length)[HEADER_BYTES:]
