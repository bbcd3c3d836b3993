"""
CSV and JSON exports of stored samples, for plotting outside the server.
"""

import io
import json
from typing import Dict, List, Sequence

import pandas as pd

from telemetry.samples import TelemetrySample

from .store.base import StoredSample

CSV_COLUMNS = [
    'seq', 'timestamp', 'speed_kmh', 'maf_gs', 'fuel_l_per_km',
    'cumulative_distance_km', 'lat', 'lon',
]


def csv_row(sample: TelemetrySample) -> Dict:
    record = sample.to_record()
    return {column: record[column] for column in CSV_COLUMNS}


def samples_frame(samples: Sequence[StoredSample]) -> pd.DataFrame:
    return pd.DataFrame([csv_row(s.sample) for s in samples], columns=CSV_COLUMNS)


def export_csv(samples: Sequence[StoredSample]) -> bytes:
    """Header row always; undefined fuel and missing fixes as empty cells"""
    buffer = io.StringIO()
    samples_frame(samples).to_csv(buffer, index=False, na_rep='', lineterminator='\n')
    return buffer.getvalue().encode('utf-8')


def export_json(samples: Sequence[StoredSample]) -> bytes:
    return json.dumps([s.to_record() for s in samples], indent=1).encode('utf-8')


def read_csv_export(data: bytes) -> List[Dict]:
    """Rows of an export_csv() document, empty cells back to None"""
    frame = pd.read_csv(io.BytesIO(data), float_precision='round_trip')
    frame = frame.astype(object).where(frame.notna(), None)
    rows = []
    for record in frame.to_dict(orient='records'):
        rows.append({
            column: (int(value) if column in ('seq', 'timestamp', 'speed_kmh') else
                     None if value is None else float(value))
            for column, value in record.items()
        })
    return rows


def read_json_export(data: bytes) -> List[StoredSample]:
    return [StoredSample.from_record(record) for record in json.loads(data)]
