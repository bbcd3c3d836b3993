"""
Tests for the server and agent management commands
"""

import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from fleet import store as fleet_store
from fleet.ingest import IngestService, start_ingest_server
from fleet.store import FileSampleStore
from obd.codec import Protocol
from obd.emulator.scenario import Scenario, ScenarioTick
from obd.emulator.server import start_tcp_emulator
from obd.emulator.state import ScriptedEcu


def run_command(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def serve(test, server):
    test.addCleanup(server.server_close)
    test.addCleanup(server.shutdown)
    host, port = server.server_address[:2]
    return f'{host}:{port}'


class AgentCommandTestCase(SimpleTestCase):

    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.store = FileSampleStore(tmp.name)
        self.server = serve(self, start_ingest_server(('127.0.0.1', 0), IngestService(self.store)))
        ecu = ScriptedEcu(Scenario((ScenarioTick(0, 72, 11.35),)), Protocol.CAN11)
        self.adapter = 'socket://' + serve(self, start_tcp_emulator(('127.0.0.1', 0), ecu))

    def test_streams_samples_to_the_server(self):
        output = run_command('agent', '--vehicle-id', 'car-7', '--obd', self.adapter,
                             '--server', self.server, '--period', '0.05', '--cycles', '5')
        self.assertIn('ELM327 v1.4b ready', output)
        self.assertIn('acked 5, buffered 0', output)

        stored = self.store.samples('car-7')
        self.assertEqual([s.seq for s in stored], [1, 2, 3, 4, 5])
        self.assertTrue(all(s.sample.speed_kmh == 72 for s in stored))
        self.assertAlmostEqual(stored[-1].sample.cumulative_distance_km, 5 * 72 * 0.05 / 3600)
        self.assertEqual(stored[0].sample.period_s, 0.05)
        timestamps = [s.timestamp for s in stored]
        self.assertEqual(timestamps, sorted(timestamps))

    def test_server_unreachable_keeps_samples_buffered(self):
        output = run_command('agent', '--vehicle-id', 'car-8', '--obd', self.adapter,
                             '--server', '127.0.0.1:1', '--period', '0.01', '--cycles', '3')
        self.assertIn('acked 0, buffered 3', output)

    def test_bad_configuration(self):
        with self.assertRaisesMessage(CommandError, 'Invalid configuration'):
            run_command('agent', '--vehicle-id', 'car-7', '--server', 'nowhere')

    def test_no_adapter(self):
        with self.assertRaises(CommandError):
            run_command('agent', '--vehicle-id', 'car-7', '--obd', 'socket://127.0.0.1:1',
                        '--server', self.server, '--cycles', '1')


class ServerCommandTestCase(SimpleTestCase):

    def setUp(self):
        self.addCleanup(fleet_store.reset)

    def test_bad_listen_address(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaisesMessage(CommandError, 'Cannot listen on nowhere'):
                run_command('server', '--data-dir', tmp, '--listen', 'nowhere')

    def test_bad_http_address(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaisesMessage(CommandError, 'expected host:port'):
                run_command('server', '--data-dir', tmp, '--listen', '127.0.0.1:0', '--http', 'nowhere')
