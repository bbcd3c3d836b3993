"""
Replay a scenario through emulator, agent and server in one process
Usage: python manage.py replay scenarios/short_trip.txt --csv short_trip.csv
"""

import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from fleet import services
from fleet.store import FileSampleStore
from obd.codec import Protocol
from obd.emulator.scenario import LoopMode, ScenarioError
from telemetry.agent import AgentError
from telemetry.metrics import FuelKind, FuelModel, MetricsError
from telemetry.replay import default_cycles, load_replay_scenario, run_replay


def parse_outage(value: str):
    first, sep, length = value.partition(':')
    if not sep or not first.isdigit() or not length.isdigit():
        raise ValueError(f'expected FIRST:LENGTH, got {value!r}')
    return int(first), int(length)


class Command(BaseCommand):
    help = 'Run a scenario end to end and print the trip summary the server computes'

    def add_arguments(self, parser):
        parser.add_argument('scenario', help='Scenario file')
        parser.add_argument('--fuel', choices=[k.value for k in FuelKind], default=FuelKind.PETROL.value)
        parser.add_argument('--dt', type=float, default=1.0, help='Poll period in seconds (default: 1)')
        parser.add_argument('--cycles', type=int, help='Cycles to run (default: up to the last tick)')
        parser.add_argument('--loop', action='store_true', help='Wrap the scenario; requires --cycles')
        parser.add_argument('--protocol', choices=[p.value for p in Protocol if p is not Protocol.AUTO],
                            default=Protocol.CAN11.value)
        parser.add_argument('--vehicle-id', default='replay')
        parser.add_argument('--outage', help='Cut the uplink for cycles FIRST:LENGTH')
        parser.add_argument('--data-dir', help='Keep the server store here instead of a temporary directory')
        parser.add_argument('--csv', help='Write the server CSV export of the run to this path')
        parser.add_argument('--json', action='store_true', help='Print the summary as JSON')

    def handle(self, *args, **options):
        loop_mode = LoopMode.LOOP if options['loop'] else LoopMode.HOLD
        try:
            scenario = load_replay_scenario(options['scenario'], loop_mode)
            outage = parse_outage(options['outage']) if options['outage'] else None
            if options['dt'] <= 0:
                raise ValueError('--dt must be positive')
            cycles = options['cycles'] or default_cycles(scenario, options['dt'])
        except OSError as e:
            raise CommandError(f"Cannot read {options['scenario']}: {e}")
        except (ScenarioError, MetricsError, ValueError) as e:
            raise CommandError(f'{type(e).__name__}: {e}')

        store = FileSampleStore(options['data_dir']) if options['data_dir'] else None
        try:
            result = run_replay(
                scenario,
                fuel_model=FuelModel.for_kind(options['fuel']),
                dt=options['dt'],
                cycles=cycles,
                vehicle_id=options['vehicle_id'],
                protocol=Protocol(options['protocol']),
                store=store,
                outage=outage,
            )
        except (AgentError, MetricsError) as e:
            raise CommandError(f'{type(e).__name__}: {e}')

        if options['csv']:
            data = services.export(result.store, result.vehicle_id, fmt='csv')
            Path(options['csv']).write_bytes(data)

        summary = result.summary
        if options['json']:
            self.stdout.write(json.dumps(summary.to_dict(), indent=2))
            return

        max_fc = summary.max_fuel_consumption_l_per_km
        self.stdout.write(f'samples            {summary.sample_count}')
        self.stdout.write(f'duration           {summary.duration_s:g} s')
        self.stdout.write(f'total distance     {summary.total_distance_km:.3f} km')
        self.stdout.write(f'max speed          {summary.max_speed_kmh} km/h')
        self.stdout.write(f'average speed      {summary.average_speed_kmh:.1f} km/h')
        self.stdout.write(f"max consumption    {'n/a' if max_fc is None else f'{max_fc:.4f} L/km'}")
        stats = result.stats
        self.stdout.write(f'uplink             {stats.acked} acked, {stats.dropped} dropped, {stats.outages} outages')
