"""
Decode one ECU response from its hex bytes
Usage: python manage.py decode 01 0D 32
"""

from django.core.management.base import BaseCommand, CommandError

from obd.codec import (
    PID_DESCRIPTIONS,
    CodecError,
    ObdRequest,
    Pid,
    decode_maf,
    decode_speed,
    decode_supported_pids,
    parse_response,
)
from obd.codec.pids import MODE_CURRENT_DATA


class Command(BaseCommand):
    help = 'Decode a mode-01 response given as mode, PID and data bytes in hex'

    def add_arguments(self, parser):
        parser.add_argument('mode', help='Request mode in hex, e.g. 01')
        parser.add_argument('pid', help='PID in hex, e.g. 0D')
        parser.add_argument('data', nargs='*', help='Data bytes in hex, e.g. 01 7C')

    def handle(self, *args, **options):
        try:
            request = ObdRequest(int(options['mode'], 16), int(options['pid'], 16))
        except ValueError as e:
            raise CommandError(f'Invalid request: {e}')
        if request.mode != MODE_CURRENT_DATA:
            raise CommandError(f'No decoder for mode {request.mode:02X}; only mode 01 is supported')

        line = ' '.join([f'{request.expected_mode_echo:02X}', f'{request.pid:02X}', *options['data']])
        try:
            response = parse_response(line, request)
            self.stdout.write(self.describe(response))
        except CodecError as e:
            raise CommandError(f'{type(e).__name__}: {e}')

    def describe(self, response) -> str:
        pid = Pid.lookup(response.pid_echo)
        if pid is Pid.SPEED:
            return f'speed = {decode_speed(response)} km/h'
        if pid is Pid.MAF:
            return f'maf = {decode_maf(response):.2f} g/s'
        if pid is Pid.SUPPORTED_PIDS:
            supported = sorted(decode_supported_pids(response))
            return 'supported PIDs = ' + (', '.join(f'{p:02X}' for p in supported) or 'none')
        if pid is Pid.FUEL_FLOW:
            raise CommandError(f'PID 5E ({PID_DESCRIPTIONS[pid]}) is unsupported')
        raise CommandError(f'No decoder for PID {response.pid_echo:02X}')
