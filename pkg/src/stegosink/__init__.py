"""Hide sensor aggregates in the LSBs of RGB images with a cyclic R/G/B channel walk."""
__version__ = "0.1.0"

from .codec import capacity_bits, channel_for_bit, embed, extract, usable_payload_bytes  # noqa: E402
from .image import RgbImage, load_image, read_image, save_image, synth_image, write_image  # noqa: E402
from .metrics import MetricReport, evaluate  # noqa: E402

__all__ = [
    "RgbImage", "load_image", "save_image", "read_image", "write_image", "synth_image",
    "capacity_bits", "usable_payload_bytes", "channel_for_bit", "embed", "extract",
    "MetricReport", "evaluate",
]
