"""
Tests for the decode, handshake and emu management commands
"""

from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from obd.codec import Protocol
from obd.emulator.scenario import Scenario, ScenarioTick
from obd.emulator.server import start_tcp_emulator
from obd.emulator.state import ScriptedEcu


def run_command(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class DecodeCommandTestCase(SimpleTestCase):

    def test_speed(self):
        self.assertEqual(run_command('decode', '01', '0D', '32').strip(), 'speed = 50 km/h')

    def test_maf(self):
        self.assertEqual(run_command('decode', '01', '10', '01', '7C').strip(), 'maf = 3.80 g/s')

    def test_supported_pids(self):
        self.assertEqual(run_command('decode', '01', '00', '00', '09', '00', '00').strip(),
                         'supported PIDs = 0D, 10')

    def test_fuel_flow_is_unsupported(self):
        with self.assertRaisesMessage(CommandError, 'PID 5E (Engine fuel rate) is unsupported'):
            run_command('decode', '01', '5E', '01', '02')

    def test_codec_errors_fail_the_command(self):
        with self.assertRaisesMessage(CommandError, 'InsufficientData'):
            run_command('decode', '01', '10', '01')
        with self.assertRaisesMessage(CommandError, 'MalformedHex'):
            run_command('decode', '01', '0D', 'ZZ')
        with self.assertRaisesMessage(CommandError, 'EmptyData'):
            run_command('decode', '01', '0D')
        with self.assertRaises(CommandError):
            run_command('decode', '02', '0D', '32')


class HandshakeCommandTestCase(SimpleTestCase):

    def test_transcript_against_tcp_emulator(self):
        ecu = ScriptedEcu(Scenario((ScenarioTick(0, 50, 3.80),)), Protocol.CAN29)
        server = start_tcp_emulator(('127.0.0.1', 0), ecu)
        self.addCleanup(server.server_close)
        self.addCleanup(server.shutdown)
        host, port = server.server_address[:2]

        output = run_command('handshake', '--obd', f'socket://{host}:{port}', '--timeout', '5')
        commands = [line[2:] for line in output.splitlines() if line.startswith('> ')]
        self.assertEqual(commands, ['ATZ', 'ATSP0', 'ATE0', 'ATFE', 'ATS0', '0100'])
        self.assertIn(repr('ATZ\rELM327 v1.4b\r\r>'), output)
        self.assertIn(repr('410000090000\r\r>'), output)
        self.assertIn('Ready: ELM327 v1.4b; supported PIDs 0D, 10', output)

    def test_unreachable_adapter(self):
        with self.assertRaises(CommandError):
            run_command('handshake', '--obd', 'socket://127.0.0.1:1', '--timeout', '0.5')


class EmuCommandTestCase(SimpleTestCase):

    def test_missing_scenario_file(self):
        with self.assertRaisesMessage(CommandError, 'does-not-exist.txt'):
            run_command('emu', '--scenario', 'does-not-exist.txt')
