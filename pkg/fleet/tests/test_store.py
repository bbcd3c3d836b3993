"""
Tests for the sample stores: file logs and the database backend
"""

import tempfile
import threading
from pathlib import Path

from django.test import SimpleTestCase, TestCase, override_settings

from fleet.errors import NoFixAvailable, UnknownVehicle
from fleet.models import SampleRecord
from fleet.store import DatabaseSampleStore, FileSampleStore, create_sample_store
from obd.nmea import FixStatus, GeoFix
from telemetry.samples import TelemetrySample


def make_sample(seq, vehicle_id='car-1', speed=36, fix=None, fuel=0.05):
    return TelemetrySample(
        vehicle_id=vehicle_id, seq=seq, timestamp=1_704_067_200_000 + seq * 1000,
        speed_kmh=speed, maf_gs=4.15 + 0.1 * speed, fuel_l_per_km=fuel if speed else None,
        cumulative_distance_km=seq * speed / 3600, fix=fix,
    )


VALID = GeoFix(-25.7461, 28.1881, '080000')
VOID = GeoFix(0.0, 0.0, '080005', FixStatus.VOID)


class StoreContract:
    """Behaviour shared by every backend; subclasses provide make_store()"""

    def test_append_and_query(self):
        store = self.make_store()
        for seq in (1, 2, 3):
            self.assertTrue(store.append(make_sample(seq), received_at=5))
        stored = store.samples('car-1')
        self.assertEqual([s.seq for s in stored], [1, 2, 3])
        self.assertEqual(stored[0].sample, make_sample(1))
        self.assertEqual(stored[0].received_at, 5)

    def test_duplicate_is_not_stored_twice(self):
        store = self.make_store()
        self.assertTrue(store.append(make_sample(1)))
        self.assertFalse(store.append(make_sample(1)))
        self.assertEqual(store.count('car-1'), 1)

    def test_seq_order_regardless_of_arrival(self):
        store = self.make_store()
        for seq in (3, 1, 2):
            store.append(make_sample(seq))
        self.assertEqual([s.seq for s in store.samples('car-1')], [1, 2, 3])
        self.assertEqual(store.vehicle('car-1').last_seq, 3)

    def test_time_range(self):
        store = self.make_store()
        for seq in range(1, 11):
            store.append(make_sample(seq))
        t0, t1 = make_sample(3).timestamp, make_sample(5).timestamp
        self.assertEqual([s.seq for s in store.samples('car-1', t0, t1)], [3, 4, 5])
        self.assertEqual(store.samples('car-1', t1 + 1, t1 + 1), [])

    def test_unknown_vehicle(self):
        store = self.make_store()
        with self.assertRaises(UnknownVehicle):
            store.samples('ghost')
        with self.assertRaises(UnknownVehicle):
            store.vehicle('ghost')

    def test_latest_fix_skips_void(self):
        store = self.make_store()
        store.append(make_sample(1))
        with self.assertRaises(NoFixAvailable):
            store.latest_fix('car-1')
        store.append(make_sample(2, fix=VALID))
        store.append(make_sample(3, fix=VOID))
        store.append(make_sample(4))
        latest = store.latest_fix('car-1')
        self.assertEqual(latest.seq, 2)
        self.assertEqual(latest.sample.fix, VALID)

    def test_vehicles_are_isolated(self):
        store = self.make_store()
        store.append(make_sample(1, 'car-a', fix=VALID))
        store.append(make_sample(1, 'car-b'))
        store.append(make_sample(2, 'car-b', fix=GeoFix(10.0, 20.0, '090000')))
        records = {r.vehicle_id: r for r in store.vehicles()}
        self.assertEqual(set(records), {'car-a', 'car-b'})
        self.assertEqual(records['car-b'].sample_count, 2)
        self.assertEqual(store.latest_fix('car-a').sample.fix, VALID)
        self.assertEqual(store.latest_fix('car-b').sample.fix.latitude, 10.0)
        self.assertEqual(records['car-a'].to_dict()['latest_fix'], {'lat': -25.7461, 'lon': 28.1881, 'utc_time': '080000'})


class FileSampleStoreTestCase(StoreContract, SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.data_dir = Path(self.tmp.name)

    def make_store(self):
        return FileSampleStore(self.data_dir)

    def test_rebuild_after_restart(self):
        store = self.make_store()
        for seq in range(1, 6):
            store.append(make_sample(seq, fix=VALID if seq == 4 else None))
        restarted = self.make_store()
        self.assertEqual(restarted.samples('car-1'), store.samples('car-1'))
        self.assertEqual(restarted.latest_fix('car-1').seq, 4)
        self.assertFalse(restarted.append(make_sample(5)))

    def test_torn_trailing_line_is_cut(self):
        store = self.make_store()
        store.append(make_sample(1))
        path = store.path_for('car-1')
        with open(path, 'ab') as f:
            f.write(b'{"vehicle_id":"car-1","seq":2,"times')

        with self.assertLogs('fleet.store.file_store', 'WARNING'):
            restarted = self.make_store()
        self.assertEqual([s.seq for s in restarted.samples('car-1')], [1])
        self.assertTrue(path.read_bytes().endswith(b'\n'))
        self.assertTrue(restarted.append(make_sample(2)))
        self.assertEqual([s.seq for s in self.make_store().samples('car-1')], [1, 2])

    def test_vehicle_ids_are_safe_file_names(self):
        store = self.make_store()
        store.append(make_sample(1, vehicle_id='../fleet/car 1'))
        self.assertEqual([p.parent for p in self.data_dir.iterdir()], [self.data_dir])
        self.assertEqual(self.make_store().vehicles()[0].vehicle_id, '../fleet/car 1')

    def test_concurrent_appends(self):
        store = self.make_store()

        def ingest(vehicle_id):
            for seq in range(1, 101):
                store.append(make_sample(seq, vehicle_id))
                store.append(make_sample(seq, vehicle_id))

        threads = [threading.Thread(target=ingest, args=(f'car-{i}',)) for i in range(4)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

        restarted = self.make_store()
        for i in range(4):
            self.assertEqual([s.seq for s in restarted.samples(f'car-{i}')], list(range(1, 101)))


class DatabaseSampleStoreTestCase(StoreContract, TestCase):

    def make_store(self):
        return DatabaseSampleStore()

    def test_rows(self):
        store = self.make_store()
        store.append(make_sample(1, fix=VALID), received_at=42)
        row = SampleRecord.objects.get()
        self.assertEqual((row.vehicle.vehicle_id, row.seq, row.received_at), ('car-1', 1, 42))
        self.assertEqual((row.lat, row.lon, row.fix_status), (-25.7461, 28.1881, 'A'))


class CreateSampleStoreTestCase(SimpleTestCase):

    def test_backends(self):
        with tempfile.TemporaryDirectory() as tmp:
            self.assertIsInstance(create_sample_store('file', tmp), FileSampleStore)
            with override_settings(FLEET_STORE_BACKEND='file', FLEET_DATA_DIR=tmp):
                self.assertIsInstance(create_sample_store(), FileSampleStore)
        self.assertIsInstance(create_sample_store('database'), DatabaseSampleStore)
        with self.assertRaises(ValueError):
            create_sample_store('redis')
