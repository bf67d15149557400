"""Exception hierarchy.

Every error raised on bad *data* derives from :class:`StegoError`, which the
CLI maps to exit code 2. Transport failures derive from
:class:`TransportError` as well as :class:`OSError` and map to exit code 3.
"""


class StegoError(Exception):
    """Base class for data, format and capacity errors."""


# image_core
class ImageError(StegoError):
    pass


class UnsupportedFormat(ImageError):
    pass


class CorruptStream(ImageError):
    pass


class ZeroDimension(ImageError, ValueError):
    pass


class DimensionMismatch(StegoError, ValueError):
    pass


# payload framing / codec
class PayloadTooLong(StegoError, ValueError):
    pass


class BadMagic(StegoError):
    """The leading bits are not the frame magic: not a stego image from this tool."""


class TruncatedStream(StegoError):
    """Fewer bits are available than the frame header declares."""


class PayloadExceedsCapacity(StegoError, ValueError):
    def __init__(self, required_bits, available_bits):
        self.required_bits = required_bits
        self.available_bits = available_bits
        super().__init__(
            f"payload needs {required_bits} bits but the cover holds "
            f"{available_bits} bits"
        )


# metrics
class DegenerateDenominator(StegoError, ZeroDivisionError):
    pass


# sensor records
class TooManyRecords(StegoError, ValueError):
    pass


class TruncatedFrame(StegoError):
    pass


class BadKind(StegoError, ValueError):
    pass


# transport
class ProtocolError(StegoError):
    pass


class BadProtocolMagic(ProtocolError):
    pass


class LengthOverflow(ProtocolError):
    pass


class TruncatedMessage(ProtocolError):
    pass


class TransportError(OSError):
    pass


class ConnectionFailed(TransportError):
    pass
