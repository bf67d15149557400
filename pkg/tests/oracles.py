"""Brute-force reference implementations used as independent test oracles.

Plain Python loops over nested lists; nothing here touches numpy bit
helpers or the package's kernels.
"""
import math

import numpy as np

from stegosink.image import RgbImage


def bits_msb_first(data):
    return [int(ch) for b in data for ch in format(b, "08b")]


def frame_bits(payload):
    header = [0x53, 0x57] + list(len(payload).to_bytes(4, "big"))
    return bits_msb_first(bytes(header) + bytes(payload))


def samples(img):
    """Nested list [row][col][channel] of ints."""
    return img.array.tolist()


def embed_oracle(img, payload):
    """Cyclic LSB substitution walked pixel by pixel with an explicit indicator."""
    grid = samples(img)
    w = img.width
    indicator = 1
    for i, bit in enumerate(frame_bits(payload)):
        y, x = divmod(i, w)
        ch = indicator - 1
        grid[y][x][ch] = (grid[y][x][ch] & ~1) | bit
        indicator = 1 if indicator == 3 else indicator + 1
    return grid


def flat(img):
    return [v for row in samples(img) for px in row for v in px]


def mse_oracle(c, s):
    a, b = flat(c), flat(s)
    return sum((x - y) ** 2 for x, y in zip(a, b)) / len(a)


def psnr_oracle(mse):
    return math.inf if mse == 0 else 10 * math.log10(255 ** 2 / mse)


def ncc_oracle(c, s):
    a, b = flat(c), flat(s)
    return sum(x * y for x, y in zip(b, a)) / sum(y * y for y in b)


def ssim_plane_oracle(xs, ys, c1=(0.01 * 255) ** 2, c2=(0.03 * 255) ** 2):
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    vx = math.fsum((x - mx) ** 2 for x in xs) / n
    vy = math.fsum((y - my) ** 2 for y in ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys)) / n
    return ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx ** 2 + my ** 2 + c1) * (vx + vy + c2))


def ssim_oracle(c, s):
    a, b = flat(c), flat(s)
    return sum(ssim_plane_oracle(a[k::3], b[k::3]) for k in range(3)) / 3


def expected_psnr(frame_bit_count, pixels):
    """Mean PSNR for LSB substitution of random-looking bits: half the bits flip."""
    return 10 * math.log10(255 ** 2 * 6 * pixels / frame_bit_count)


def random_image(rng, width, height):
    return RgbImage(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))
