"""
Run the OBD II reader agent against an adapter and stream to a fleet server
Usage: python manage.py agent --vehicle-id car-1 --obd socket://127.0.0.1:35000 --server 127.0.0.1:5055
"""

import threading

from django.core.management.base import BaseCommand, CommandError

from telemetry.agent import (
    AgentConfig,
    AgentError,
    NmeaReader,
    SampleBuffer,
    TcpUplinkConnection,
    TelemetryAgent,
    Uplink,
    open_link,
)
from telemetry.clock import SystemClock
from telemetry.metrics import FuelKind


class Command(BaseCommand):
    help = 'Poll speed and MAF every period and stream samples to the fleet server'

    def add_arguments(self, parser):
        parser.add_argument('--vehicle-id', required=True, help='Identifier reported with every sample')
        parser.add_argument('--obd', help='Adapter address: device, pty or socket://host:port (default: OBD_ADDRESS)')
        parser.add_argument('--server', help='Fleet ingest host:port (default: FLEET_INGEST_LISTEN)')
        parser.add_argument('--period', type=float, help='Poll period in seconds (default: AGENT_POLL_PERIOD)')
        parser.add_argument('--fuel', choices=[k.value for k in FuelKind], help='Fuel model (default: AGENT_FUEL)')
        parser.add_argument('--gps', help='NMEA source: device, pty or socket://host:port')
        parser.add_argument('--cycles', type=int, help='Stop after this many cycles (default: run until Ctrl-C)')

    def handle(self, *args, **options):
        try:
            config = AgentConfig.from_settings(
                options['vehicle_id'],
                obd_address=options['obd'],
                server=options['server'],
                period=options['period'],
                fuel=options['fuel'],
            )
        except ValueError as e:
            raise CommandError(f'Invalid configuration: {e}')

        clock = SystemClock()
        gps = None
        if options['gps']:
            gps = NmeaReader()
            try:
                gps.start(options['gps'])
            except Exception as e:
                raise CommandError(f"Cannot open GPS {options['gps']}: {e}")

        try:
            link = open_link(config.obd_address, config.baudrate)
        except AgentError as e:
            raise CommandError(str(e))

        uplink = Uplink(
            lambda: TcpUplinkConnection(config.server_address, config.ack_timeout),
            SampleBuffer(config.buffer_capacity),
            clock,
        )
        agent = TelemetryAgent(config, link, uplink, clock, gps)
        stop = threading.Event()

        try:
            ready = agent.initialize()
            self.stdout.write(self.style.SUCCESS(f'{ready.version} ready; polling every {config.poll_period:g} s'))
            result = agent.run(cycles=options['cycles'], stop=stop, threaded=True)
        except KeyboardInterrupt:
            result = None
        except AgentError as e:
            raise CommandError(f'Agent stopped: {e}')
        finally:
            link.close()
            uplink.close()
            if gps:
                gps.stop()

        stats = uplink.stats()
        self.stdout.write(
            f'sent {stats.sent}, acked {stats.acked}, buffered {stats.buffered}, '
            f'dropped {stats.dropped}, outages {stats.outages}'
        )
        if result is not None and result.skipped:
            self.stdout.write(self.style.WARNING(f'{result.skipped} cycles skipped on PID errors'))
