"""
Run the fleet server: the ingest listener plus the read-only HTTP API
Usage: python manage.py server --listen 0.0.0.0:5055 --http 0.0.0.0:8000
"""

import threading

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.core.servers.basehttp import run
from django.core.wsgi import get_wsgi_application

from fleet import store as fleet_store
from fleet.errors import StorageFailure
from fleet.ingest import IngestService, start_ingest_server
from obd.emulator.server import parse_listen


class Command(BaseCommand):
    help = 'Accept agent samples on the ingest port and serve the fleet API over HTTP'

    def add_arguments(self, parser):
        parser.add_argument(
            '--listen',
            default=getattr(settings, 'FLEET_INGEST_LISTEN', '127.0.0.1:5055'),
            help='Ingest host:port (default: %(default)s)'
        )
        parser.add_argument(
            '--http',
            default=getattr(settings, 'FLEET_HTTP_LISTEN', '127.0.0.1:8000'),
            help="HTTP API host:port, or 'off' (default: %(default)s)"
        )
        parser.add_argument('--backend', choices=['file', 'database'], help='Sample store backend')
        parser.add_argument('--data-dir', help='Directory for the file store (default: FLEET_DATA_DIR)')

    def handle(self, *args, **options):
        try:
            store = fleet_store.configure(
                fleet_store.create_sample_store(options['backend'], options['data_dir'])
            )
        except (StorageFailure, ValueError) as e:
            raise CommandError(f'Cannot open sample store: {e}')

        try:
            ingest = start_ingest_server(parse_listen(options['listen']), IngestService(store))
        except (OSError, ValueError) as e:
            raise CommandError(f"Cannot listen on {options['listen']}: {e}")
        host, port = ingest.server_address[:2]
        self.stdout.write(self.style.SUCCESS(f'Ingest on {host}:{port}'))

        try:
            if options['http'] == 'off':
                self.stdout.write('HTTP API disabled; Ctrl-C to stop')
                threading.Event().wait()
            else:
                try:
                    http_host, http_port = parse_listen(options['http'])
                except ValueError as e:
                    raise CommandError(str(e))
                self.stdout.write(self.style.SUCCESS(f'HTTP API on http://{http_host}:{http_port}/vehicles; Ctrl-C to stop'))
                run(http_host, http_port, get_wsgi_application(), threading=True)
        except KeyboardInterrupt:
            pass
        finally:
            ingest.shutdown()
            ingest.server_close()
            fleet_store.reset()
