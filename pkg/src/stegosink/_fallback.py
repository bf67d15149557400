"""Pure numpy kernels. Same signatures and results as the compiled ``_kernels``.

Bit ``i`` of a frame lives in interleaved sample ``3*i + i % 3``: pixel ``i``,
channel ``i mod 3`` (red, green, blue, red, ...).
"""
import numpy as np


def _positions(nbits):
    i = np.arange(nbits, dtype=np.int64)
    return 3 * i + i % 3


def _check_fits(nbits, size):
    if nbits > 0 and 3 * (nbits - 1) + (nbits - 1) % 3 >= size:
        raise ValueError("frame does not fit the sample buffer")


def embed_frame(samples, data, nbits):
    """Overwrite the LSB at each bit position of ``samples`` in place."""
    data = np.frombuffer(bytes(data), dtype=np.uint8)
    if nbits > data.size * 8:
        raise ValueError("nbits exceeds the supplied data")
    _check_fits(nbits, samples.shape[0])
    bits = np.unpackbits(data, bitorder="big")[:nbits]
    pos = _positions(nbits)
    samples[pos] = (samples[pos] & 0xFE) | bits


def extract_frame(samples, nbytes):
    nbits = 8 * nbytes
    _check_fits(nbits, samples.shape[0])
    bits = np.asarray(samples)[_positions(nbits)] & 1
    return np.packbits(bits, bitorder="big").tobytes()


def sum_sq_diff(a, b):
    if a.shape[0] != b.shape[0]:
        raise ValueError("length mismatch")
    d = a.astype(np.int64) - b.astype(np.int64)
    return int(np.dot(d, d))


def dot(a, b):
    if a.shape[0] != b.shape[0]:
        raise ValueError("length mismatch")
    return int(np.dot(a.astype(np.int64), b.astype(np.int64)))


def channel_moments(x, y):
    """Per channel: sum x, sum y, sum x^2, sum y^2, sum xy (int64, shape (3, 5))."""
    if x.shape[0] != y.shape[0] or x.shape[0] % 3:
        raise ValueError("expected equal-length interleaved RGB buffers")
    xv = x.astype(np.int64).reshape(-1, 3)
    yv = y.astype(np.int64).reshape(-1, 3)
    return np.stack([
        xv.sum(axis=0),
        yv.sum(axis=0),
        (xv * xv).sum(axis=0),
        (yv * yv).sum(axis=0),
        (xv * yv).sum(axis=0),
    ], axis=1)
