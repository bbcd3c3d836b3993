import threading
import time
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from obd.nmea import GeoFix
from telemetry.samples import TelemetrySample

from fleet.errors import NoFixAvailable


def now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True)
class StoredSample:
    sample: TelemetrySample
    received_at: int  # server clock, UTC milliseconds

    @property
    def seq(self) -> int:
        return self.sample.seq

    @property
    def timestamp(self) -> int:
        return self.sample.timestamp

    def to_record(self) -> Dict[str, Any]:
        return {**self.sample.to_record(), 'received_at': self.received_at}

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'StoredSample':
        received_at = record.get('received_at')
        if not isinstance(received_at, int):
            raise ValueError(f'received_at must be an integer, got {received_at!r}')
        return cls(TelemetrySample.from_record(record), received_at)


@dataclass(frozen=True)
class VehicleRecord:
    vehicle_id: str
    last_seq: int
    last_seen: int  # agent timestamp of the highest-seq sample
    sample_count: int
    latest_fix: Optional[GeoFix] = None

    def to_dict(self) -> Dict[str, Any]:
        fix = self.latest_fix
        return {
            'vehicle_id': self.vehicle_id,
            'last_seq': self.last_seq,
            'last_seen': self.last_seen,
            'sample_count': self.sample_count,
            'latest_fix': {'lat': fix.latitude, 'lon': fix.longitude, 'utc_time': fix.utc_time} if fix else None,
        }


def in_range(stored: StoredSample, t0: Optional[int], t1: Optional[int]) -> bool:
    return (t0 is None or stored.timestamp >= t0) and (t1 is None or stored.timestamp <= t1)


def latest_valid_fix(vehicle_id: str, samples: List[StoredSample]) -> StoredSample:
    """Highest-seq sample carrying a valid fix"""
    for stored in reversed(samples):
        fix = stored.sample.fix
        if fix is not None and fix.is_valid:
            return stored
    raise NoFixAvailable(vehicle_id)


class SampleStore(ABC):
    """
    Durable per-vehicle sample storage.

    append() returns only once the sample is durable; a (vehicle_id, seq)
    already stored is reported as a duplicate and not written again.
    Appends for one vehicle are serialized; readers see a consistent prefix.
    """

    def __init__(self):
        self._locks_guard = threading.Lock()
        self._vehicle_locks = defaultdict(threading.Lock)

    def vehicle_lock(self, vehicle_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._vehicle_locks[vehicle_id]

    @abstractmethod
    def append(self, sample: TelemetrySample, received_at: Optional[int] = None) -> bool:
        """Persist a sample; False when it was already stored"""

    @abstractmethod
    def vehicles(self) -> List[VehicleRecord]:
        pass

    @abstractmethod
    def vehicle(self, vehicle_id: str) -> VehicleRecord:
        """Raises UnknownVehicle"""

    @abstractmethod
    def samples(self, vehicle_id: str, t0: Optional[int] = None, t1: Optional[int] = None) -> List[StoredSample]:
        """Seq-ordered samples with t0 <= timestamp <= t1; raises UnknownVehicle"""

    @abstractmethod
    def latest_fix(self, vehicle_id: str) -> StoredSample:
        """Raises UnknownVehicle, NoFixAvailable"""

    def count(self, vehicle_id: str) -> int:
        return self.vehicle(vehicle_id).sample_count

    def close(self):
        pass
