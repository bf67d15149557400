"""8-bit RGB raster model, lossless PNG / PPM (P6) I/O and seeded synthetic images."""
import enum
import io
import os
import struct
import zlib

import numpy as np
from PIL import Image

from .errors import CorruptStream, UnsupportedFormat, ZeroDimension
from .prng import random_bytes

C_MAX = 255
PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"

RED, GREEN, BLUE = 0, 1, 2


class ImageFormat(str, enum.Enum):
    PNG = "png"
    PPM = "ppm"


class RgbImage:
    """Immutable 8-bit RGB image.

    Samples live in one read-only ``(height, width, 3)`` uint8 array; the
    red, green and blue planes are row-major views into it.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.asarray(data)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected a (height, width, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ZeroDimension(f"image dimensions must be >= 1, got {arr.shape[1]}x{arr.shape[0]}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > C_MAX):
                raise ValueError("sample values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, order="C", copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "_data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("RgbImage is immutable")

    @classmethod
    def from_planes(cls, width, height, red, green, blue):
        n = width * height
        planes = [np.asarray(p).reshape(-1) for p in (red, green, blue)]
        if any(p.size != n for p in planes):
            raise ValueError("every plane must hold width*height samples")
        return cls(np.stack(planes, axis=-1).reshape(height, width, 3))

    @property
    def width(self):
        return self._data.shape[1]

    @property
    def height(self):
        return self._data.shape[0]

    @property
    def pixel_count(self):
        return self.width * self.height

    @property
    def array(self):
        """Read-only ``(height, width, 3)`` view of the samples."""
        return self._data

    def plane(self, channel):
        return self._data[:, :, channel].reshape(-1)

    @property
    def red(self):
        return self.plane(RED)

    @property
    def green(self):
        return self.plane(GREEN)

    @property
    def blue(self):
        return self.plane(BLUE)

    def interleaved(self):
        """Flat R,G,B,R,G,B,... sample buffer (read-only)."""
        return self._data.reshape(-1)

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self):
        return f"RgbImage(width={self.width}, height={self.height})"


def detect_format(data):
    if data[:8] == PNG_SIGNATURE:
        return ImageFormat.PNG
    if data[:2] == b"P6":
        return ImageFormat.PPM
    raise UnsupportedFormat("unrecognised image signature (expected PNG or binary PPM P6)")


def _read_source(source):
    if isinstance(source, (bytes, bytearray, memoryview)):
        return bytes(source)
    if hasattr(source, "read"):
        return source.read()
    raise TypeError("source must be bytes or a binary file object")


def load_image(source, format=None):
    """Decode an 8-bit RGB PNG or P6 PPM from bytes or a binary file object."""
    data = _read_source(source)
    fmt = ImageFormat(format) if format is not None else detect_format(data)
    if fmt is ImageFormat.PNG:
        return _load_png(data)
    return _load_ppm(data)


def save_image(img, format=ImageFormat.PNG):
    """Encode ``img`` losslessly; returns the file bytes."""
    fmt = ImageFormat(format)
    if fmt is ImageFormat.PPM:
        header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
        return header + img.interleaved().tobytes()
    buf = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(img.array), "RGB").save(buf, "PNG")
    return buf.getvalue()


def format_for_path(path):
    ext = os.path.splitext(os.fspath(path))[1].lower()
    return ImageFormat.PPM if ext in (".ppm", ".pnm") else ImageFormat.PNG


def read_image(path):
    with open(path, "rb") as fh:
        return load_image(fh.read())


def write_image(img, path, format=None):
    fmt = format_for_path(path) if format is None else ImageFormat(format)
    with open(path, "wb") as fh:
        fh.write(save_image(img, fmt))


def _load_png(data):
    # Validate IHDR ourselves: Pillow quietly narrows 16-bit RGB to 8 bits.
    if len(data) < 33 or data[:8] != PNG_SIGNATURE:
        raise CorruptStream("truncated PNG header")
    length, ctype = struct.unpack(">I4s", data[8:16])
    if ctype != b"IHDR" or length != 13:
        raise CorruptStream("PNG does not start with an IHDR chunk")
    if zlib.crc32(data[12:29]) != struct.unpack(">I", data[29:33])[0]:
        raise CorruptStream("IHDR checksum mismatch")
    width, height, depth, color_type = struct.unpack(">IIBB", data[16:26])
    if width == 0 or height == 0:
        raise CorruptStream("PNG declares a zero dimension")
    if color_type in (4, 6):
        raise UnsupportedFormat("PNG has an alpha channel")
    if color_type == 3:
        raise UnsupportedFormat("paletted PNG is not supported")
    if color_type == 0:
        raise UnsupportedFormat("grayscale PNG is not supported")
    if color_type != 2:
        raise CorruptStream(f"invalid PNG color type {color_type}")
    if depth != 8:
        raise UnsupportedFormat(f"PNG bit depth {depth} is not supported (need 8)")
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            if "transparency" in im.info:
                raise UnsupportedFormat("PNG carries a tRNS transparency chunk")
            if im.mode != "RGB":
                raise UnsupportedFormat(f"unexpected decoded mode {im.mode}")
            arr = np.asarray(im, dtype=np.uint8)
    except UnsupportedFormat:
        raise
    except Exception as exc:
        raise CorruptStream(f"cannot decode PNG: {exc}") from exc
    if arr.shape != (height, width, 3):
        raise CorruptStream("decoded PNG does not match its header")
    return RgbImage(arr)


def _ppm_tokens(data, count):
    """Return ``count`` header tokens and the offset just past the single
    whitespace byte that terminates the last one."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and (data[pos:pos + 1].isspace() or data[pos] == 0x23):
            if data[pos] == 0x23:  # '#' comment runs to end of line
                while pos < n and data[pos] not in (0x0A, 0x0D):
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos] != 0x23:
            pos += 1
        if start == pos:
            raise CorruptStream("truncated PPM header")
        tokens.append(data[start:pos])
    if pos >= n or not data[pos:pos + 1].isspace():
        raise CorruptStream("PPM header must end with one whitespace byte")
    return tokens, pos + 1


def _load_ppm(data):
    tokens, offset = _ppm_tokens(data, 4)
    magic, *fields = tokens
    if magic != b"P6":
        raise UnsupportedFormat("only binary PPM (P6) is supported")
    try:
        width, height, maxval = (int(t) for t in fields)
    except ValueError as exc:
        raise CorruptStream(f"bad PPM header field: {exc}") from exc
    if width < 1 or height < 1:
        raise CorruptStream("PPM declares a zero dimension")
    if maxval != C_MAX:
        raise UnsupportedFormat(f"PPM maxval {maxval} is not supported (need 255)")
    need = width * height * 3
    body = data[offset:offset + need]
    if len(body) != need:
        raise CorruptStream(f"PPM raster has {len(body)} bytes, expected {need}")
    arr = np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)
    return RgbImage(arr)


def synth_image(seed, width, height):
    """Deterministic uniform-noise image drawn from the SplitMix64 stream of ``seed``.

    Interleaved sample ``3*p + c`` (pixel ``p`` in row-major order, channel
    ``c``) is byte ``3*p + c`` of :func:`stegosink.prng.random_bytes`.
    """
    if width < 1 or height < 1:
        raise ZeroDimension(f"image dimensions must be >= 1, got {width}x{height}")
    samples = random_bytes(seed, width * height * 3)
    return RgbImage(samples.reshape(height, width, 3))
