"""
Codec errors

Every failure raised by the OBD II codec derives from CodecError so callers
can catch the whole family at once.
"""


class CodecError(ValueError):
    """Base class for OBD II codec failures"""


class InvalidRequest(CodecError):
    """Request text or fields outside the J1979 request grammar"""


class MalformedHex(CodecError):
    """Response text is not a sequence of hex byte pairs"""


class ModeMismatch(CodecError):
    """First response byte is not the request mode + 0x40"""


class PidMismatch(CodecError):
    """Response PID differs from the requested PID"""


class NoData(CodecError):
    """ECU answered with the NO DATA sentinel"""


class WrongPid(CodecError):
    """Decoder applied to a response for another PID"""


class EmptyData(CodecError):
    """Response carries no data bytes"""


class InsufficientData(CodecError):
    """Response carries fewer data bytes than the PID defines"""


class ValueOutOfRange(CodecError):
    """Physical value cannot be represented in the PID's data bytes"""


class EmptyInput(CodecError):
    """Checksum requested over zero bytes"""


class PayloadTooLong(CodecError):
    """ISO 9141-2 payload longer than 7 bytes"""


class ChecksumMismatch(CodecError):
    """Trailing checksum byte does not match the frame contents"""


class TooShort(CodecError):
    """Raw frame shorter than header + one payload byte + checksum"""


class IdentifierOverflow(CodecError):
    """CAN identifier does not fit the declared identifier width"""


class CrcMismatch(CodecError):
    """CAN CRC field does not match the preceding bits"""
