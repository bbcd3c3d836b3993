"""
Sample storage for the fleet server.

FLEET_STORE_BACKEND selects the backend:
- 'file' (default): append-only JSON-lines logs under FLEET_DATA_DIR
- 'database': Django ORM (SQLite, or PostgreSQL via DATABASE_URL)
"""

import logging
from typing import Optional

from django.conf import settings

from .base import SampleStore, StoredSample, VehicleRecord
from .db_store import DatabaseSampleStore
from .file_store import FileSampleStore

logger = logging.getLogger(__name__)

_sample_store = None


def create_sample_store(backend: Optional[str] = None, data_dir=None) -> SampleStore:
    """Factory: create the storage backend named by configuration"""
    backend = backend or getattr(settings, 'FLEET_STORE_BACKEND', 'file')
    if backend == 'database':
        logger.info('Fleet: using database sample store')
        return DatabaseSampleStore()
    if backend != 'file':
        raise ValueError(f"unknown store backend {backend!r} (expected 'file' or 'database')")
    data_dir = data_dir or getattr(settings, 'FLEET_DATA_DIR', 'var/fleet')
    logger.info(f'Fleet: using file sample store in {data_dir}')
    return FileSampleStore(data_dir)


def get_sample_store() -> SampleStore:
    global _sample_store
    if _sample_store is None:
        _sample_store = create_sample_store()
    return _sample_store


def configure(store: SampleStore) -> SampleStore:
    """Install a store as the process-wide instance (server startup, tests)"""
    global _sample_store
    _sample_store = store
    return store


def reset():
    global _sample_store
    if _sample_store is not None:
        _sample_store.close()
    _sample_store = None


__all__ = [
    'DatabaseSampleStore', 'FileSampleStore', 'SampleStore', 'StoredSample', 'VehicleRecord',
    'configure', 'create_sample_store', 'get_sample_store', 'reset',
]
