"""
Append-only JSON-lines store, one log file per vehicle.

    <data_dir>/<quoted vehicle id>.jsonl

Every append is flushed and fsync-ed before append() returns. The
in-memory index is rebuilt from the logs on startup; a trailing line left
incomplete by a crash is cut off the file.
"""

import bisect
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Set
from urllib.parse import quote, unquote

from telemetry.samples import TelemetrySample

from fleet.errors import NoFixAvailable, StorageFailure, UnknownVehicle

from .base import SampleStore, StoredSample, VehicleRecord, in_range, latest_valid_fix, now_ms

logger = logging.getLogger(__name__)

LOG_SUFFIX = '.jsonl'


@dataclass
class _VehicleIndex:
    seqs: List[int] = field(default_factory=list)
    samples: List[StoredSample] = field(default_factory=list)
    known: Set[int] = field(default_factory=set)

    def add(self, stored: StoredSample):
        position = bisect.bisect_left(self.seqs, stored.seq)
        self.seqs.insert(position, stored.seq)
        self.samples.insert(position, stored)
        self.known.add(stored.seq)


class FileSampleStore(SampleStore):

    def __init__(self, data_dir):
        super().__init__()
        self.data_dir = Path(data_dir)
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageFailure(f'cannot create {self.data_dir}: {e}') from None
        self._index: Dict[str, _VehicleIndex] = {}
        self._rebuild()

    def path_for(self, vehicle_id: str) -> Path:
        return self.data_dir / (quote(vehicle_id, safe='') + LOG_SUFFIX)

    def _rebuild(self):
        total = 0
        for path in sorted(self.data_dir.glob('*' + LOG_SUFFIX)):
            vehicle_id = unquote(path.name[:-len(LOG_SUFFIX)])
            index = _VehicleIndex()
            for stored in self._read_log(path):
                if stored.seq not in index.known:
                    index.add(stored)
            self._index[vehicle_id] = index
            total += len(index.samples)
        logger.info(f"FileSampleStore: {total} samples for {len(self._index)} vehicles in {self.data_dir}")

    def _read_log(self, path: Path) -> List[StoredSample]:
        data = path.read_bytes()
        samples = []
        offset = 0
        while offset < len(data):
            end = data.find(b'\n', offset)
            if end < 0:
                logger.warning(f"{path.name}: discarding torn trailing line ({len(data) - offset} bytes)")
                with open(path, 'r+b') as f:
                    f.truncate(offset)
                    os.fsync(f.fileno())
                break
            line = data[offset:end]
            offset = end + 1
            if not line.strip():
                continue
            try:
                samples.append(StoredSample.from_record(json.loads(line)))
            except ValueError as e:
                logger.warning(f"{path.name}: skipping unreadable line: {e}")
        return samples

    def append(self, sample: TelemetrySample, received_at: Optional[int] = None) -> bool:
        stored = StoredSample(sample, received_at if received_at is not None else now_ms())
        line = json.dumps(stored.to_record(), separators=(',', ':')) + '\n'
        with self.vehicle_lock(sample.vehicle_id):
            index = self._index.get(sample.vehicle_id)
            if index is not None and sample.seq in index.known:
                return False
            try:
                with open(self.path_for(sample.vehicle_id), 'ab') as f:
                    f.write(line.encode('utf-8'))
                    f.flush()
                    os.fsync(f.fileno())
            except OSError as e:
                raise StorageFailure(f'cannot append seq {sample.seq} for {sample.vehicle_id}: {e}') from None
            if index is None:
                with self._locks_guard:
                    index = self._index.setdefault(sample.vehicle_id, _VehicleIndex())
            index.add(stored)
            return True

    def _get(self, vehicle_id: str) -> _VehicleIndex:
        index = self._index.get(vehicle_id)
        if index is None or not index.samples:
            raise UnknownVehicle(vehicle_id)
        return index

    def _record(self, vehicle_id: str, samples: List[StoredSample]) -> VehicleRecord:
        last = samples[-1]
        try:
            fix = latest_valid_fix(vehicle_id, samples).sample.fix
        except NoFixAvailable:
            fix = None
        return VehicleRecord(vehicle_id, last.seq, last.timestamp, len(samples), fix)

    def vehicles(self) -> List[VehicleRecord]:
        with self._locks_guard:
            vehicle_ids = sorted(self._index)
        records = []
        for vehicle_id in vehicle_ids:
            with self.vehicle_lock(vehicle_id):
                samples = list(self._index[vehicle_id].samples)
            if samples:
                records.append(self._record(vehicle_id, samples))
        return records

    def vehicle(self, vehicle_id: str) -> VehicleRecord:
        with self.vehicle_lock(vehicle_id):
            samples = list(self._get(vehicle_id).samples)
        return self._record(vehicle_id, samples)

    def samples(self, vehicle_id: str, t0: Optional[int] = None, t1: Optional[int] = None) -> List[StoredSample]:
        with self.vehicle_lock(vehicle_id):
            samples = list(self._get(vehicle_id).samples)
        return [s for s in samples if in_range(s, t0, t1)]

    def latest_fix(self, vehicle_id: str) -> StoredSample:
        with self.vehicle_lock(vehicle_id):
            samples = list(self._get(vehicle_id).samples)
        return latest_valid_fix(vehicle_id, samples)
