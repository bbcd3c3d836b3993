"""
Wire envelopes around J1979 messages.

ISO 9141-2 and ISO 14230-4 share one layout: priority, receiver and
transmitter bytes, a 1..7 byte payload and an additive checksum. CAN frames
carry an 11- or 29-bit identifier, eight data bytes and a CRC-15 field.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple

from .errors import (
    ChecksumMismatch,
    CrcMismatch,
    EmptyInput,
    IdentifierOverflow,
    PayloadTooLong,
    TooShort,
)

ISO_MAX_PAYLOAD = 7
ISO_HEADER_LENGTH = 3
ISO_MIN_FRAME = ISO_HEADER_LENGTH + 1 + 1

# Functional request header (tester -> all ECUs) and ECU response header
ISO_REQUEST_HEADER = (0x68, 0x6A, 0xF1)
ISO_RESPONSE_HEADER = (0x48, 0x6B, 0x10)

CAN_DATA_LENGTH = 8
CAN_CRC_BITS = 15
CAN_CRC_POLYNOMIAL = 0x4599

# Functional broadcast request and first ECU response identifiers
CAN11_REQUEST_ID = 0x7DF
CAN11_RESPONSE_ID = 0x7E8
CAN29_REQUEST_ID = 0x18DB33F1
CAN29_RESPONSE_ID = 0x18DAF110

Header = Tuple[int, int, int]


def checksum(data: Sequence[int]) -> int:
    """8-bit additive checksum: sum of all bytes modulo 256"""
    if not data:
        raise EmptyInput('checksum of zero bytes')
    return sum(data) & 0xFF


@dataclass(frozen=True)
class Iso9141Frame:
    priority: int
    receiver: int
    transmitter: int
    payload: bytes
    checksum: int

    @property
    def header(self) -> Header:
        return (self.priority, self.receiver, self.transmitter)

    def to_bytes(self) -> bytes:
        return bytes([*self.header, *self.payload, self.checksum])


def frame_iso9141(priority: int, receiver: int, transmitter: int, payload: bytes) -> Iso9141Frame:
    payload = bytes(payload)
    if len(payload) > ISO_MAX_PAYLOAD:
        raise PayloadTooLong(f'payload of {len(payload)} bytes exceeds {ISO_MAX_PAYLOAD}')
    if not payload:
        raise TooShort('payload must carry at least one byte')
    for field_name, value in (('priority', priority), ('receiver', receiver), ('transmitter', transmitter)):
        if not 0 <= value <= 0xFF:
            raise ValueError(f'{field_name} {value!r} does not fit in one byte')
    body = bytes([priority, receiver, transmitter]) + payload
    return Iso9141Frame(priority, receiver, transmitter, payload, checksum(body))


def unframe_iso9141(raw: bytes) -> Tuple[Header, bytes]:
    """Split a raw frame into its header triple and payload, verifying the checksum"""
    raw = bytes(raw)
    if len(raw) < ISO_MIN_FRAME:
        raise TooShort(f'frame of {len(raw)} bytes, need at least {ISO_MIN_FRAME}')
    if len(raw) > ISO_HEADER_LENGTH + ISO_MAX_PAYLOAD + 1:
        raise PayloadTooLong(f'frame of {len(raw)} bytes carries more than {ISO_MAX_PAYLOAD} payload bytes')
    body, received = raw[:-1], raw[-1]
    expected = checksum(body)
    if received != expected:
        raise ChecksumMismatch(f'checksum {received:02X}, computed {expected:02X}')
    header = (body[0], body[1], body[2])
    return header, body[ISO_HEADER_LENGTH:]


class IdWidth(Enum):
    STANDARD_11 = 11
    EXTENDED_29 = 29

    @property
    def limit(self) -> int:
        return 1 << self.value


@dataclass(frozen=True)
class CanFrame:
    identifier: int
    id_width: IdWidth
    data: bytes
    checksum_bits: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'data', bytes(self.data))
        if not 0 <= self.identifier < self.id_width.limit:
            raise IdentifierOverflow(
                f'identifier {self.identifier:#x} does not fit {self.id_width.value} bits'
            )
        if len(self.data) != CAN_DATA_LENGTH:
            raise ValueError(f'CAN data field must be {CAN_DATA_LENGTH} bytes, got {len(self.data)}')


def crc15(bits: str) -> int:
    """CRC-15/CAN over a string of '0'/'1' characters"""
    crc = 0
    for ch in bits:
        bit = 1 if ch == '1' else 0
        if ((crc >> 14) & 1) ^ bit:
            crc = ((crc << 1) ^ CAN_CRC_POLYNOMIAL) & 0x7FFF
        else:
            crc = (crc << 1) & 0x7FFF
    return crc


def _bits(value: int, width: int) -> str:
    return format(value, f'0{width}b')


def encode_can_frame(frame: CanFrame) -> str:
    """identifier || data (64 bits) || CRC-15 of the preceding bits"""
    body = _bits(frame.identifier, frame.id_width.value) + ''.join(_bits(b, 8) for b in frame.data)
    return body + _bits(crc15(body), CAN_CRC_BITS)


def decode_can_frame(bits: str) -> CanFrame:
    data_bits = CAN_DATA_LENGTH * 8
    widths = {w.value + data_bits + CAN_CRC_BITS: w for w in IdWidth}
    id_width = widths.get(len(bits))
    if id_width is None or set(bits) - {'0', '1'}:
        raise ValueError(f'not a CAN bit sequence of {len(bits)} characters')

    body, crc_field = bits[:-CAN_CRC_BITS], int(bits[-CAN_CRC_BITS:], 2)
    expected = crc15(body)
    if crc_field != expected:
        raise CrcMismatch(f'CRC {crc_field:04X}, computed {expected:04X}')

    identifier = int(body[:id_width.value], 2)
    payload = body[id_width.value:]
    data = bytes(int(payload[i:i + 8], 2) for i in range(0, data_bits, 8))
    return CanFrame(identifier, id_width, data, crc_field)


def can_request_frame(mode: int, pid: int, id_width: IdWidth = IdWidth.STANDARD_11) -> CanFrame:
    """ISO 15765-4 single frame carrying a two-byte J1979 request, zero padded"""
    identifier = CAN11_REQUEST_ID if id_width is IdWidth.STANDARD_11 else CAN29_REQUEST_ID
    data = bytes([2, mode, pid]).ljust(CAN_DATA_LENGTH, b'\x00')
    frame = CanFrame(identifier, id_width, data)
    return decode_can_frame(encode_can_frame(frame))
