"""
TelemetrySample and its uplink wire form.

On the wire a sample is one flat JSON object per line:

    {"vehicle_id": "car-1", "seq": 7, "timestamp": 1700000007000, "speed_kmh": 50,
     "maf_gs": 3.8, "fuel_l_per_km": 0.0227, "cumulative_distance_km": 0.07,
     "period_s": 1.0, "lat": -25.752, "lon": 28.226, "fix_time": "080007", "fix_status": "A"}

fuel_l_per_km is null while standing still; the four fix fields are null
when the sample carries no GPS fix.
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from obd.nmea import FixStatus, GeoFix, NmeaError

RECORD_FIELDS = (
    'vehicle_id', 'seq', 'timestamp', 'speed_kmh', 'maf_gs', 'fuel_l_per_km',
    'cumulative_distance_km', 'period_s', 'lat', 'lon', 'fix_time', 'fix_status',
)


class SampleFormatError(ValueError):
    """A record that does not describe a valid TelemetrySample"""


@dataclass(frozen=True)
class TelemetrySample:
    vehicle_id: str
    seq: int
    timestamp: int  # UTC milliseconds, agent clock
    speed_kmh: int
    maf_gs: float
    fuel_l_per_km: Optional[float]
    cumulative_distance_km: float
    fix: Optional[GeoFix] = None
    period_s: float = 1.0  # integration step behind this sample's distance

    def to_record(self) -> Dict[str, Any]:
        fix = self.fix
        return {
            'vehicle_id': self.vehicle_id,
            'seq': self.seq,
            'timestamp': self.timestamp,
            'speed_kmh': self.speed_kmh,
            'maf_gs': self.maf_gs,
            'fuel_l_per_km': self.fuel_l_per_km,
            'cumulative_distance_km': self.cumulative_distance_km,
            'period_s': self.period_s,
            'lat': fix.latitude if fix else None,
            'lon': fix.longitude if fix else None,
            'fix_time': fix.utc_time if fix else None,
            'fix_status': fix.status.value if fix else None,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_record(), separators=(',', ':')) + '\n'

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'TelemetrySample':
        if not isinstance(record, dict):
            raise SampleFormatError(f'expected an object, got {type(record).__name__}')
        missing = [name for name in RECORD_FIELDS[:7] if name not in record]
        if missing:
            raise SampleFormatError(f"missing fields: {', '.join(missing)}")

        vehicle_id = record['vehicle_id']
        if not isinstance(vehicle_id, str) or not vehicle_id:
            raise SampleFormatError('vehicle_id must be a non-empty string')

        seq = _integer(record, 'seq', minimum=0)
        timestamp = _integer(record, 'timestamp', minimum=0)
        speed = _integer(record, 'speed_kmh', minimum=0, maximum=255)
        maf = _number(record, 'maf_gs', minimum=0)
        distance = _number(record, 'cumulative_distance_km', minimum=0)
        fuel = None if record['fuel_l_per_km'] is None else _number(record, 'fuel_l_per_km', minimum=0)
        period = _number(record, 'period_s', minimum=0) if record.get('period_s') is not None else 1.0
        if period <= 0:
            raise SampleFormatError('period_s must be positive')

        return cls(
            vehicle_id=vehicle_id,
            seq=seq,
            timestamp=timestamp,
            speed_kmh=speed,
            maf_gs=maf,
            fuel_l_per_km=fuel,
            cumulative_distance_km=distance,
            fix=_fix(record),
            period_s=period,
        )

    @classmethod
    def from_line(cls, line: str) -> 'TelemetrySample':
        try:
            record = json.loads(line)
        except ValueError as e:
            raise SampleFormatError(f'not JSON: {e}') from None
        return cls.from_record(record)


def _integer(record, name, minimum=None, maximum=None) -> int:
    value = record.get(name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SampleFormatError(f'{name} must be an integer, got {value!r}')
    if (minimum is not None and value < minimum) or (maximum is not None and value > maximum):
        raise SampleFormatError(f'{name} {value} out of range')
    return value


def _number(record, name, minimum=None) -> float:
    value = record.get(name)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SampleFormatError(f'{name} must be a finite number, got {value!r}')
    if minimum is not None and value < minimum:
        raise SampleFormatError(f'{name} {value} out of range')
    return float(value)


def _fix(record) -> Optional[GeoFix]:
    if record.get('lat') is None and record.get('lon') is None:
        return None
    latitude = _number(record, 'lat')
    longitude = _number(record, 'lon')
    utc_time = record.get('fix_time') or '000000'
    if not isinstance(utc_time, str):
        raise SampleFormatError(f'fix_time must be a string, got {utc_time!r}')
    try:
        status = FixStatus(record.get('fix_status') or FixStatus.VALID.value)
        return GeoFix(latitude, longitude, utc_time, status)
    except (NmeaError, ValueError) as e:
        raise SampleFormatError(f'bad fix: {e}') from None
