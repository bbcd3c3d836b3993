import logging
from typing import List, Optional

from django.db import DatabaseError, IntegrityError, transaction

from obd.nmea import FixStatus
from telemetry.samples import TelemetrySample

from fleet.errors import NoFixAvailable, StorageFailure, UnknownVehicle
from fleet.models import SampleRecord, Vehicle

from .base import SampleStore, StoredSample, VehicleRecord, now_ms

logger = logging.getLogger(__name__)


def _to_stored(row: SampleRecord, vehicle_id: str) -> StoredSample:
    record = {
        'vehicle_id': vehicle_id,
        'seq': row.seq,
        'timestamp': row.timestamp,
        'speed_kmh': row.speed_kmh,
        'maf_gs': row.maf_gs,
        'fuel_l_per_km': row.fuel_l_per_km,
        'cumulative_distance_km': row.cumulative_distance_km,
        'period_s': row.period_s,
        'lat': row.lat,
        'lon': row.lon,
        'fix_time': row.fix_time,
        'fix_status': row.fix_status,
    }
    return StoredSample(TelemetrySample.from_record(record), row.received_at)


class DatabaseSampleStore(SampleStore):
    """Samples as SampleRecord rows; each append is one transaction"""

    def append(self, sample: TelemetrySample, received_at: Optional[int] = None) -> bool:
        record = sample.to_record()
        with self.vehicle_lock(sample.vehicle_id):
            try:
                with transaction.atomic():
                    vehicle, _ = Vehicle.objects.get_or_create(vehicle_id=sample.vehicle_id)
                    if SampleRecord.objects.filter(vehicle=vehicle, seq=sample.seq).exists():
                        return False
                    SampleRecord.objects.create(
                        vehicle=vehicle,
                        seq=sample.seq,
                        timestamp=sample.timestamp,
                        speed_kmh=sample.speed_kmh,
                        maf_gs=sample.maf_gs,
                        fuel_l_per_km=sample.fuel_l_per_km,
                        cumulative_distance_km=sample.cumulative_distance_km,
                        period_s=sample.period_s,
                        lat=record['lat'],
                        lon=record['lon'],
                        fix_time=record['fix_time'],
                        fix_status=record['fix_status'],
                        received_at=received_at if received_at is not None else now_ms(),
                    )
            except IntegrityError:
                return False
            except DatabaseError as e:
                raise StorageFailure(f'cannot store seq {sample.seq} for {sample.vehicle_id}: {e}') from None
        return True

    def _vehicle(self, vehicle_id: str) -> Vehicle:
        vehicle = Vehicle.objects.filter(vehicle_id=vehicle_id).first()
        if vehicle is None or not vehicle.samples.exists():
            raise UnknownVehicle(vehicle_id)
        return vehicle

    def _record(self, vehicle: Vehicle) -> VehicleRecord:
        rows = vehicle.samples.order_by('seq')
        last = rows.last()
        try:
            fix = self.latest_fix(vehicle.vehicle_id).sample.fix
        except NoFixAvailable:
            fix = None
        return VehicleRecord(vehicle.vehicle_id, last.seq, last.timestamp, rows.count(), fix)

    def vehicles(self) -> List[VehicleRecord]:
        return [self._record(v) for v in Vehicle.objects.filter(samples__isnull=False).distinct()]

    def vehicle(self, vehicle_id: str) -> VehicleRecord:
        return self._record(self._vehicle(vehicle_id))

    def samples(self, vehicle_id: str, t0: Optional[int] = None, t1: Optional[int] = None) -> List[StoredSample]:
        rows = self._vehicle(vehicle_id).samples.order_by('seq')
        if t0 is not None:
            rows = rows.filter(timestamp__gte=t0)
        if t1 is not None:
            rows = rows.filter(timestamp__lte=t1)
        return [_to_stored(row, vehicle_id) for row in rows]

    def latest_fix(self, vehicle_id: str) -> StoredSample:
        row = (self._vehicle(vehicle_id).samples
               .filter(fix_status=FixStatus.VALID.value, lat__isnull=False)
               .order_by('-seq').first())
        if row is None:
            raise NoFixAvailable(vehicle_id)
        return _to_stored(row, vehicle_id)
