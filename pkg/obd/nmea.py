"""
NMEA 0183 GLL sentences from the GPS module.

    $GPGLL,4916.45,N,12311.12,W,225444,A,*1D

Fields: talker + GLL, latitude ddmm.mmmm, N/S, longitude dddmm.mmmm, E/W,
UTC time, status (A valid / V void) and an optional mode indicator. The
checksum is the XOR of every character between '$' and '*'.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Tuple


DEFAULT_TALKER = 'GP'
_TALKER = re.compile(r'^[A-Z]{2}$')
_UTC = re.compile(r'^\d{6}(\.\d+)?$')

# 1e-4 arc-minute units per degree
_UNITS_PER_DEGREE = 60 * 10_000


class NmeaError(ValueError):
    """Base class for NMEA sentence failures"""


class BadChecksum(NmeaError):
    pass


class WrongSentenceType(NmeaError):
    pass


class MalformedField(NmeaError):
    pass


class OutOfRange(NmeaError):
    pass


class FixStatus(str, Enum):
    VALID = 'A'
    VOID = 'V'


@dataclass(frozen=True)
class GeoFix:
    latitude: float
    longitude: float
    utc_time: str = '000000'
    status: FixStatus = FixStatus.VALID

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise OutOfRange(f'latitude {self.latitude} outside -90..90')
        if not -180.0 <= self.longitude <= 180.0:
            raise OutOfRange(f'longitude {self.longitude} outside -180..180')
        if not _UTC.match(self.utc_time):
            raise MalformedField(f'UTC time {self.utc_time!r} is not hhmmss[.sss]')
        object.__setattr__(self, 'status', FixStatus(self.status))

    @property
    def is_valid(self) -> bool:
        return self.status is FixStatus.VALID


def nmea_checksum(body: str) -> int:
    value = 0
    for ch in body:
        value ^= ord(ch)
    return value


def _split_checksum(sentence: str) -> Tuple[str, str]:
    text = sentence.strip()
    if not text.startswith('$'):
        raise MalformedField(f'sentence does not start with $: {sentence!r}')
    body, sep, transmitted = text[1:].partition('*')
    if not sep or len(transmitted) != 2:
        raise MalformedField(f'sentence has no *HH checksum: {sentence!r}')
    try:
        received = int(transmitted, 16)
    except ValueError:
        raise MalformedField(f'checksum {transmitted!r} is not hex') from None
    if received != nmea_checksum(body):
        raise BadChecksum(f'checksum {transmitted}, computed {nmea_checksum(body):02X}')
    return body, transmitted


def _parse_coordinate(value: str, hemisphere: str, degree_digits: int, positive: str,
                      negative: str, limit: float) -> float:
    if hemisphere not in (positive, negative):
        raise MalformedField(f'hemisphere {hemisphere!r} is not {positive}/{negative}')
    if len(value) < degree_digits + 2 or not value[:degree_digits].isdigit():
        raise MalformedField(f'coordinate {value!r} is not d{"d" * (degree_digits - 1)}mm.mmmm')
    try:
        degrees = int(value[:degree_digits])
        minutes = float(value[degree_digits:])
    except ValueError:
        raise MalformedField(f'coordinate {value!r} is not numeric') from None
    if not 0.0 <= minutes < 60.0:
        raise OutOfRange(f'minutes {minutes} outside 0..60')
    decimal = degrees + minutes / 60.0
    if decimal > limit:
        raise OutOfRange(f'coordinate {decimal} beyond {limit}')
    return -decimal if hemisphere == negative else decimal


def parse_gll(sentence: str) -> GeoFix:
    """
    Parse a GLL sentence into signed decimal degrees.

    Raises:
        BadChecksum, WrongSentenceType, MalformedField, OutOfRange
    """
    body, _ = _split_checksum(sentence)
    fields = body.split(',')
    kind = fields[0]
    if len(kind) != 5 or kind[2:] != 'GLL' or not _TALKER.match(kind[:2]):
        raise WrongSentenceType(f'expected a GLL sentence, got {kind!r}')
    if len(fields) not in (7, 8):
        raise MalformedField(f'GLL sentence has {len(fields) - 1} fields')

    lat, ns, lon, ew, utc, status = fields[1:7]
    if status not in (FixStatus.VALID.value, FixStatus.VOID.value):
        raise MalformedField(f'status {status!r} is not A/V')
    status = FixStatus(status)

    if status is FixStatus.VOID and not (lat and lon):
        # A void fix may leave the position empty
        return GeoFix(0.0, 0.0, utc or '000000', status)

    latitude = _parse_coordinate(lat, ns, 2, 'N', 'S', 90.0)
    longitude = _parse_coordinate(lon, ew, 3, 'E', 'W', 180.0)
    return GeoFix(latitude, longitude, utc, status)


def _format_coordinate(value: float, degree_digits: int) -> str:
    units = round(abs(value) * _UNITS_PER_DEGREE)
    degrees, rem = divmod(units, _UNITS_PER_DEGREE)
    minutes, fraction = divmod(rem, 10_000)
    return f'{degrees:0{degree_digits}d}{minutes:02d}.{fraction:04d}'


def render_gll(fix: GeoFix, talker: str = DEFAULT_TALKER) -> str:
    """Render a fix as a GLL sentence (no CRLF); position kept to 1e-4 arc-minutes"""
    body = ','.join([
        f'{talker}GLL',
        _format_coordinate(fix.latitude, 2),
        'S' if fix.latitude < 0 else 'N',
        _format_coordinate(fix.longitude, 3),
        'W' if fix.longitude < 0 else 'E',
        fix.utc_time,
        fix.status.value,
    ])
    return f'${body}*{nmea_checksum(body):02X}'
