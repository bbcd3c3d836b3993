"""
Read-side queries over the sample store, shared by the HTTP views, the
replay harness and the tests.
"""

from typing import List, Optional

from telemetry.metrics import TripSummary, summarize_trip

from .export import export_csv, export_json
from .store.base import SampleStore, StoredSample

EXPORT_FORMATS = {
    'csv': (export_csv, 'text/csv'),
    'json': (export_json, 'application/json'),
}


def _check_range(t0: Optional[int], t1: Optional[int]):
    if t0 is not None and t1 is not None and t0 > t1:
        raise ValueError(f'range start {t0} is after its end {t1}')


def query_samples(store: SampleStore, vehicle_id: str, t0: Optional[int] = None,
                  t1: Optional[int] = None) -> List[StoredSample]:
    _check_range(t0, t1)
    return store.samples(vehicle_id, t0, t1)


def trip_summary(store: SampleStore, vehicle_id: str, t0: Optional[int] = None,
                 t1: Optional[int] = None) -> TripSummary:
    """summarize_trip over exactly what query_samples returns"""
    return summarize_trip([stored.sample for stored in query_samples(store, vehicle_id, t0, t1)])


def latest_position(store: SampleStore, vehicle_id: str) -> StoredSample:
    return store.latest_fix(vehicle_id)


def export(store: SampleStore, vehicle_id: str, t0: Optional[int] = None,
           t1: Optional[int] = None, fmt: str = 'csv') -> bytes:
    if fmt not in EXPORT_FORMATS:
        raise ValueError(f'unknown export format {fmt!r}')
    writer, _ = EXPORT_FORMATS[fmt]
    return writer(query_samples(store, vehicle_id, t0, t1))
