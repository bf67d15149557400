"""SplitMix64, the seeded generator behind synthetic images and payloads.

SplitMix64 (Steele, Lea & Flood, OOPSLA 2014) is counter based: output ``k``
depends only on ``seed + (k + 1) * GOLDEN_GAMMA``, so whole streams are
produced with vectorised uint64 arithmetic and never depend on numpy's own
generators. Byte ``j`` of the stream is byte ``j % 8`` (little-endian) of
output word ``j // 8``.
"""
import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def splitmix64_scalar(state):
    """Reference scalar step: returns ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def splitmix64_words(seed, count):
    """The first ``count`` 64-bit outputs for ``seed`` as a uint64 array."""
    seed = int(seed) & _MASK64
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + k * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


def random_bytes(seed, n):
    """``n`` uniformly distributed bytes from the SplitMix64 stream of ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    words = splitmix64_words(seed, (n + 7) // 8)
    return words.astype("<u8").view(np.uint8)[:n].copy()
