"""
Run the adapter bring-up against a live emulator and print the transcript
Usage: python manage.py handshake --obd socket://127.0.0.1:35000
"""

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from telemetry.agent import AgentError, ElmLink, SerialTransport, initialize


class Command(BaseCommand):
    help = 'Send ATZ, ATSP0, ATE0, ATFE, ATS0, 0100 and print every exchange'

    def add_arguments(self, parser):
        parser.add_argument(
            '--obd',
            default=getattr(settings, 'OBD_ADDRESS', 'socket://127.0.0.1:35000'),
            help='Adapter address: device path, pty or socket://host:port (default: %(default)s)'
        )
        parser.add_argument(
            '--timeout',
            type=float,
            default=getattr(settings, 'AGENT_HANDSHAKE_TIMEOUT', 2.0),
            help='Seconds to wait for each prompt'
        )

    def handle(self, *args, **options):
        try:
            link = ElmLink(SerialTransport(options['obd'], getattr(settings, 'OBD_BAUDRATE', 38400)))
        except AgentError as e:
            raise CommandError(str(e))
        try:
            ready = initialize(link, options['timeout'])
        except AgentError as e:
            self._print(link.exchanges)
            raise CommandError(f'Handshake failed: {e}')
        finally:
            link.close()

        self._print(ready.transcript)
        supported = ', '.join(f'{pid:02X}' for pid in sorted(ready.supported_pids))
        self.stdout.write(self.style.SUCCESS(f'Ready: {ready.version}; supported PIDs {supported}'))

    def _print(self, exchanges):
        for exchange in exchanges:
            self.stdout.write(f'> {exchange.command}')
            self.stdout.write(f'  {exchange.raw_reply!r}')
