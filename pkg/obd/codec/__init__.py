"""
OBD II codec

SAE J1979 mode-01 requests and responses in the ELM327 ASCII dialect, plus
the ISO 9141-2 / ISO 14230-4 and CAN envelopes they travel in. All functions
are pure and safe to call from any thread.

Usage:
    from obd.codec import ObdRequest, Pid, encode_request, parse_response, decode_speed

    req = ObdRequest.current(Pid.SPEED)
    encode_request(req)                                 # b'010D\\r'
    decode_speed(parse_response('41 0D 32', req))       # 50
"""

from .errors import (
    ChecksumMismatch,
    CodecError,
    CrcMismatch,
    EmptyData,
    EmptyInput,
    IdentifierOverflow,
    InsufficientData,
    InvalidRequest,
    MalformedHex,
    ModeMismatch,
    NoData,
    PayloadTooLong,
    PidMismatch,
    TooShort,
    ValueOutOfRange,
    WrongPid,
)
from .framing import (
    CAN11_RESPONSE_ID,
    CAN29_RESPONSE_ID,
    ISO_REQUEST_HEADER,
    ISO_RESPONSE_HEADER,
    CanFrame,
    IdWidth,
    Iso9141Frame,
    can_request_frame,
    checksum,
    crc15,
    decode_can_frame,
    encode_can_frame,
    frame_iso9141,
    unframe_iso9141,
)
from .messages import (
    NO_DATA,
    ObdRequest,
    ObdResponse,
    decode_maf,
    decode_speed,
    decode_supported_pids,
    encode_maf,
    encode_request,
    encode_response,
    encode_speed,
    parse_hex_bytes,
    parse_response,
    response_for,
    supported_pids_bitmap,
)
from .pids import (
    PID_DATA_LENGTH,
    PID_DESCRIPTIONS,
    MafGramsPerSec,
    Pid,
    Protocol,
    SpeedKmh,
)

__all__ = [
    'CAN11_RESPONSE_ID', 'CAN29_RESPONSE_ID', 'ISO_REQUEST_HEADER', 'ISO_RESPONSE_HEADER',
    'NO_DATA', 'PID_DATA_LENGTH', 'PID_DESCRIPTIONS',
    'CanFrame', 'ChecksumMismatch', 'CodecError', 'CrcMismatch', 'EmptyData', 'EmptyInput',
    'IdWidth', 'IdentifierOverflow', 'InsufficientData', 'InvalidRequest', 'Iso9141Frame',
    'MafGramsPerSec', 'MalformedHex', 'ModeMismatch', 'NoData', 'ObdRequest', 'ObdResponse',
    'PayloadTooLong', 'Pid', 'PidMismatch', 'Protocol', 'SpeedKmh', 'TooShort',
    'ValueOutOfRange', 'WrongPid',
    'can_request_frame', 'checksum', 'crc15', 'decode_can_frame', 'decode_maf', 'decode_speed',
    'decode_supported_pids', 'encode_can_frame', 'encode_maf', 'encode_request',
    'encode_response', 'encode_speed', 'frame_iso9141', 'parse_hex_bytes', 'parse_response',
    'response_for', 'supported_pids_bitmap', 'unframe_iso9141',
]
