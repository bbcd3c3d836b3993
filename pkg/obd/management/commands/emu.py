"""
Run the ELM327 emulator on a TCP port or a serial device / pty
Usage: python manage.py emu --scenario scenarios/short_trip.txt --listen 127.0.0.1:35000
"""

import logging
import threading

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from obd.codec import Protocol
from obd.emulator.gps import GpsFeed, start_nmea_feed
from obd.emulator.scenario import LoopMode, ScenarioError, load_scenario
from obd.emulator.server import is_tcp_listen, parse_listen, serve_serial, start_tcp_emulator
from obd.emulator.state import ScriptedEcu

logger = logging.getLogger(__name__)

PROTOCOL_CHOICES = [p.value for p in Protocol if p is not Protocol.AUTO]


class Command(BaseCommand):
    help = 'Emulate an ELM327 v1.4b attached to a scripted ECU'

    def add_arguments(self, parser):
        parser.add_argument('--scenario', required=True, help='Scenario file (t,speed,maf[,gll] per line)')
        parser.add_argument(
            '--protocol',
            choices=PROTOCOL_CHOICES,
            default=getattr(settings, 'EMULATOR_PROTOCOL', 'can11'),
            help='Bus protocol the ECU speaks (default: %(default)s)'
        )
        parser.add_argument(
            '--listen',
            default=getattr(settings, 'EMULATOR_LISTEN', '127.0.0.1:35000'),
            help='host:port for TCP, or a serial device / pty path (default: %(default)s)'
        )
        parser.add_argument('--loop', action='store_true', help='Wrap the scenario at its last tick')
        parser.add_argument('--gps-listen', help='host:port to stream the scenario GLL sentences on')
        parser.add_argument(
            '--baudrate',
            type=int,
            default=getattr(settings, 'OBD_BAUDRATE', 38400),
            help='Serial baud rate (serial mode only)'
        )

    def handle(self, *args, **options):
        loop_mode = LoopMode.LOOP if options['loop'] else LoopMode.HOLD
        try:
            scenario = load_scenario(options['scenario'], loop_mode)
        except (OSError, ScenarioError) as e:
            raise CommandError(f"Scenario {options['scenario']}: {e}")
        ecu = ScriptedEcu(scenario, Protocol(options['protocol']))

        if options['gps_listen']:
            try:
                start_nmea_feed(parse_listen(options['gps_listen']), GpsFeed(scenario))
            except (OSError, ValueError) as e:
                raise CommandError(f'Cannot start NMEA feed: {e}')

        listen = options['listen']
        if not is_tcp_listen(listen):
            self.stdout.write(f'Serving ELM327 on {listen} ({ecu.protocol.value}), one session')
            try:
                handled = serve_serial(listen, ecu, options['baudrate'])
            except (OSError, ValueError) as e:
                raise CommandError(f'Serial port {listen}: {e}')
            self.stdout.write(f'Serial session ended after {handled} commands')
            return

        try:
            server = start_tcp_emulator(parse_listen(listen), ecu)
        except OSError as e:
            raise CommandError(f'Cannot listen on {listen}: {e}')
        host, port = server.server_address[:2]
        self.stdout.write(self.style.SUCCESS(f'ELM327 emulator on {host}:{port} ({ecu.protocol.value}); Ctrl-C to stop'))
        try:
            threading.Event().wait()
        except KeyboardInterrupt:
            pass
        finally:
            server.shutdown()
            server.server_close()
