"""
SAE J1979 request/response messages in the ELM327 ASCII form.

A request is the mode byte followed by the PID byte ("010D"); the ECU answers
with the mode + 0x40, the PID echo and up to seven data bytes ("41 0D 32").
"""

import string
from dataclasses import dataclass
from typing import FrozenSet, Iterable

from .errors import (
    EmptyData,
    InsufficientData,
    InvalidRequest,
    MalformedHex,
    ModeMismatch,
    NoData,
    PidMismatch,
    ValueOutOfRange,
    WrongPid,
)
from .pids import (
    MAF_MAX,
    MODE_CURRENT_DATA,
    MODE_MAX,
    MODE_MIN,
    RESPONSE_MODE_OFFSET,
    SPEED_MAX,
    MafGramsPerSec,
    Pid,
    SpeedKmh,
)

NO_DATA = 'NO DATA'
MAX_DATA_BYTES = 7
_HEX_DIGITS = frozenset(string.hexdigits)


@dataclass(frozen=True)
class ObdRequest:
    mode: int
    pid: int

    def __post_init__(self):
        if not MODE_MIN <= self.mode <= MODE_MAX:
            raise InvalidRequest(f'mode {self.mode:#04x} outside 0x01..0x0A')
        if not 0 <= self.pid <= 0xFF:
            raise InvalidRequest(f'PID {self.pid!r} does not fit in one byte')

    @classmethod
    def current(cls, pid: int) -> 'ObdRequest':
        """Mode 01 (current data) request for a PID"""
        return cls(MODE_CURRENT_DATA, int(pid))

    @classmethod
    def parse(cls, text: str) -> 'ObdRequest':
        """Read the ASCII form back; spaces and a trailing CR are ignored"""
        compact = ''.join(text.split())
        if len(compact) != 4 or not set(compact) <= _HEX_DIGITS:
            raise InvalidRequest(f'not a mode/PID request: {text!r}')
        return cls(int(compact[:2], 16), int(compact[2:], 16))

    @property
    def expected_mode_echo(self) -> int:
        return self.mode + RESPONSE_MODE_OFFSET


@dataclass(frozen=True)
class ObdResponse:
    mode_echo: int
    pid_echo: int
    data: bytes = b''

    @property
    def request_mode(self) -> int:
        return self.mode_echo - RESPONSE_MODE_OFFSET


def _hex_bytes(values: Iterable[int], spaces: bool) -> str:
    sep = ' ' if spaces else ''
    return sep.join(f'{b:02X}' for b in values)


def encode_request(req: ObdRequest, spaces_enabled: bool = False) -> bytes:
    """Uppercase hex of mode then PID, CR terminated: b'010D\\r'"""
    return (_hex_bytes((req.mode, req.pid), spaces_enabled) + '\r').encode('ascii')


def encode_response(resp: ObdResponse, spaces_enabled: bool = True) -> str:
    """ECU side of the exchange, without CR or prompt: '41 0D 32'"""
    return _hex_bytes((resp.mode_echo, resp.pid_echo, *resp.data), spaces_enabled)


def response_for(req: ObdRequest, data: bytes) -> ObdResponse:
    return ObdResponse(req.expected_mode_echo, req.pid, bytes(data))


def parse_hex_bytes(text: str) -> bytes:
    """Whitespace-tolerant, case-insensitive hex byte pairs"""
    compact = ''.join(text.split())
    if not compact or len(compact) % 2 or not set(compact) <= _HEX_DIGITS:
        raise MalformedHex(f'not a sequence of hex byte pairs: {text!r}')
    return bytes.fromhex(compact)


def parse_response(line: str, expected: ObdRequest) -> ObdResponse:
    """
    Parse one ECU reply line against the request that produced it.

    Raises:
        NoData: the ECU replied with the NO DATA sentinel
        MalformedHex: a token is not hex or the line is too short
        ModeMismatch / PidMismatch: the echo bytes do not match the request
    """
    text = line.replace('>', '').strip()
    if ''.join(text.split()).upper() == NO_DATA.replace(' ', ''):
        raise NoData(f'ECU has no data for {expected.mode:02X} {expected.pid:02X}')

    raw = parse_hex_bytes(text)
    if len(raw) < 2:
        raise MalformedHex(f'response shorter than mode and PID: {line!r}')
    if len(raw) - 2 > MAX_DATA_BYTES:
        raise MalformedHex(f'response carries more than {MAX_DATA_BYTES} data bytes: {line!r}')

    mode_echo, pid_echo, data = raw[0], raw[1], raw[2:]
    if mode_echo != expected.expected_mode_echo:
        raise ModeMismatch(
            f'expected mode echo {expected.expected_mode_echo:02X}, got {mode_echo:02X}'
        )
    if pid_echo != expected.pid:
        raise PidMismatch(f'expected PID {expected.pid:02X}, got {pid_echo:02X}')
    return ObdResponse(mode_echo, pid_echo, bytes(data))


def decode_speed(resp: ObdResponse) -> SpeedKmh:
    """Vehicle speed in km/h: byte A read as an unsigned integer"""
    if resp.pid_echo != Pid.SPEED:
        raise WrongPid(f'speed decoder applied to PID {resp.pid_echo:02X}')
    if not resp.data:
        raise EmptyData('speed response carries no data byte')
    return SpeedKmh(resp.data[0])


def decode_maf(resp: ObdResponse) -> MafGramsPerSec:
    """Mass air flow in g/s: (A * 256 + B) / 100"""
    if resp.pid_echo != Pid.MAF:
        raise WrongPid(f'MAF decoder applied to PID {resp.pid_echo:02X}')
    if len(resp.data) < 2:
        raise InsufficientData(f'MAF needs 2 data bytes, got {len(resp.data)}')
    a, b = resp.data[0], resp.data[1]
    return MafGramsPerSec((a * 256 + b) / 100)


def encode_speed(value: int) -> bytes:
    if not 0 <= value <= SPEED_MAX or int(value) != value:
        raise ValueOutOfRange(f'speed {value!r} is not an integer in 0..{SPEED_MAX} km/h')
    return bytes([int(value)])


def encode_maf(value: float) -> bytes:
    raw = round(value * 100)
    if not 0 <= value <= MAF_MAX or raw > 0xFFFF:
        raise ValueOutOfRange(f'MAF {value!r} outside 0..{MAF_MAX} g/s')
    return bytes([raw >> 8, raw & 0xFF])


def supported_pids_bitmap(pids: Iterable[int]) -> bytes:
    """
    Four-byte answer to PID 0x00: bit 7 of byte A is PID 0x01,
    bit 0 of byte D is PID 0x20.
    """
    bitmap = 0
    for pid in pids:
        if 0x01 <= pid <= 0x20:
            bitmap |= 1 << (32 - pid)
    return bitmap.to_bytes(4, 'big')


def decode_supported_pids(resp: ObdResponse) -> FrozenSet[int]:
    if resp.pid_echo != Pid.SUPPORTED_PIDS:
        raise WrongPid(f'supported-PID decoder applied to PID {resp.pid_echo:02X}')
    if len(resp.data) < 4:
        raise InsufficientData(f'supported-PID bitmap needs 4 bytes, got {len(resp.data)}')
    bitmap = int.from_bytes(resp.data[:4], 'big')
    return frozenset(pid for pid in range(0x01, 0x21) if bitmap & (1 << (32 - pid)))
