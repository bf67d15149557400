"""Imperceptibility metrics for a (cover, stego) pair.

MSE, PSNR and NCC pool all three planes (``3*M*N`` samples). SSIM is the
single-window form evaluated on whole-plane statistics (population
moments) and averaged over the three planes. Sample sums are exact
integers; floating point enters only in the final ratios.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateDenominator, DimensionMismatch
from .image import C_MAX

K1 = 0.01
K2 = 0.03
SSIM_C1 = (K1 * C_MAX) ** 2
SSIM_C2 = (K2 * C_MAX) ** 2

PSNR_INF = math.inf


@dataclass(frozen=True)
class MetricReport:
    psnr: float
    mse: float
    ncc: float
    ssim: float

    def as_dict(self):
        return {"psnr": self.psnr, "mse": self.mse, "ncc": self.ncc, "ssim": self.ssim}


def _pair(cover, stego):
    if (cover.width, cover.height) != (stego.width, stego.height):
        raise DimensionMismatch(
            f"cover is {cover.width}x{cover.height}, stego is {stego.width}x{stego.height}"
        )
    return (np.ascontiguousarray(cover.interleaved()),
            np.ascontiguousarray(stego.interleaved()))


def mse(cover, stego):
    c, s = _pair(cover, stego)
    return kernels.sum_sq_diff(s, c) / c.size


def psnr_from_mse(value):
    if value < 0:
        raise ValueError("mse must be non-negative")
    if value == 0:
        return PSNR_INF
    return 10.0 * math.log10(C_MAX ** 2 / value)


def psnr(cover, stego):
    return psnr_from_mse(mse(cover, stego))


def ncc(cover, stego):
    """Sum(S*C) / Sum(S^2). Not symmetric, and can exceed 1."""
    c, s = _pair(cover, stego)
    denom = kernels.dot(s, s)
    if denom == 0:
        raise DegenerateDenominator("stego image is all zero; NCC is undefined")
    return kernels.dot(s, c) / denom


def _ssim_from_moments(n, sx, sy, sxx, syy, sxy):
    mx = sx / n
    my = sy / n
    nn = n * n
    vx = (n * sxx - sx * sx) / nn
    vy = (n * syy - sy * sy) / nn
    cov = (n * sxy - sx * sy) / nn
    num = (2 * mx * my + SSIM_C1) * (2 * cov + SSIM_C2)
    den = (mx * mx + my * my + SSIM_C1) * (vx + vy + SSIM_C2)
    return num / den


def ssim_planes(cover, stego):
    """SSIM of the red, green and blue planes."""
    c, s = _pair(cover, stego)
    moments = kernels.channel_moments(c, s)
    n = cover.pixel_count
    return [_ssim_from_moments(n, *(int(v) for v in row)) for row in moments]


def ssim(cover, stego):
    return sum(ssim_planes(cover, stego)) / 3.0


def evaluate(cover, stego):
    m = mse(cover, stego)
    return MetricReport(psnr=psnr_from_mse(m), mse=m, ncc=ncc(cover, stego), ssim=ssim(cover, stego))
