"""
End-to-end replay of a scenario in one process.

The emulator, the agent and the fleet server are wired together without
sockets and run on a ManualClock, so a replay is deterministic and runs
as fast as the code does:

    scenario -> Elm327Session <-LoopbackTransport-> TelemetryAgent
             -> Uplink <-InProcessUplinkConnection-> IngestService -> store
"""

import logging
import math
import random
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from obd.codec import Protocol
from obd.emulator.gps import GpsFeed
from obd.emulator.scenario import LoopMode, Scenario, parse_scenario_ticks
from obd.emulator.session import Elm327Session
from obd.emulator.state import ScriptedEcu

from fleet import services
from fleet.ingest import IngestService
from fleet.store import FileSampleStore, SampleStore

from .agent import (
    AgentConfig,
    ElmLink,
    FaultInjectingConnector,
    InProcessUplinkConnection,
    LinkStats,
    LoopbackTransport,
    NmeaReader,
    ReadyState,
    ReconnectStrategy,
    SampleBuffer,
    TelemetryAgent,
    Uplink,
)
from .clock import ManualClock
from .metrics import EmptyTrip, FuelModel, TripSummary, summarize_trip
from .samples import TelemetrySample

logger = logging.getLogger(__name__)

# 2024-01-01T00:00:00Z
REPLAY_EPOCH_MS = 1_704_067_200_000


@dataclass
class ReplayResult:
    summary: TripSummary        # computed by the server from what it stored
    agent_summary: TripSummary  # computed from the samples the agent produced
    samples: List[TelemetrySample]
    stats: LinkStats
    ready: ReadyState
    cycles: int
    skipped: int
    store: SampleStore
    vehicle_id: str


def load_replay_scenario(path: Union[str, Path], loop_mode: LoopMode = LoopMode.HOLD) -> Scenario:
    """Parse a scenario file; one without ticks is an empty trip"""
    text = Path(path).read_text(encoding='ascii')
    ticks = parse_scenario_ticks(text.splitlines())
    if not ticks:
        raise EmptyTrip(f'{path} has no ticks')
    return Scenario(ticks, LoopMode(loop_mode))


def default_cycles(scenario: Scenario, dt: float) -> int:
    """Enough cycles to reach the last tick"""
    if scenario.loop_mode is LoopMode.LOOP:
        raise ValueError('a looping scenario needs an explicit cycle count')
    return int(math.floor(scenario.duration / dt + 1e-9)) + 1


def run_replay(scenario: Scenario, fuel_model: Optional[FuelModel] = None, dt: float = 1.0,
               cycles: Optional[int] = None, vehicle_id: str = 'replay',
               protocol: Protocol = Protocol.CAN11, store: Optional[SampleStore] = None,
               outage: Optional[Tuple[int, int]] = None, buffer_capacity: int = 3600,
               seed: int = 0) -> ReplayResult:
    """
    Drive the scenario through emulator, agent and server.

    Args:
        outage: (first cycle, number of cycles) during which the uplink is cut
        store: where the server keeps samples; a temporary file store if omitted

    Raises:
        EmptyTrip: the run produced no samples
    """
    cycles = cycles if cycles is not None else default_cycles(scenario, dt)
    clock = ManualClock(epoch_ms=REPLAY_EPOCH_MS)

    session = Elm327Session(ScriptedEcu(scenario, protocol), clock)
    link = ElmLink(LoopbackTransport(session))

    feed = GpsFeed(scenario)
    gps = NmeaReader(source=lambda: feed.sentence_at(session.scenario_time)) if feed.has_fixes else None

    temp_dir = None
    if store is None:
        temp_dir = tempfile.TemporaryDirectory(prefix='replay-')
        store = FileSampleStore(temp_dir.name)
    service = IngestService(store, clock=lambda: REPLAY_EPOCH_MS + round(clock() * 1000))
    connector = FaultInjectingConnector(lambda: InProcessUplinkConnection(service.handle_line))
    uplink = Uplink(connector, SampleBuffer(buffer_capacity), clock,
                    ReconnectStrategy(rng=random.Random(seed)))

    config = AgentConfig(vehicle_id=vehicle_id, poll_period=dt,
                         fuel_model=fuel_model or FuelModel.petrol(),
                         buffer_capacity=buffer_capacity)
    agent = TelemetryAgent(config, link, uplink, clock, gps)

    def cut_link(cycle: int):
        if outage is not None:
            first, length = outage
            connector.down = first <= cycle < first + length

    try:
        ready = agent.initialize()
        run = agent.run(cycles=cycles, keep_samples=True, before_cycle=cut_link)
        if connector.down:
            # the link comes back after the drive
            connector.down = False
            uplink.flush(force=True)
        if not run.samples:
            raise EmptyTrip('replay produced no samples')
        summary = services.trip_summary(store, vehicle_id)
    finally:
        if temp_dir is not None:
            temp_dir.cleanup()

    logger.info(f"Replay {vehicle_id}: {summary.sample_count} samples, {summary.total_distance_km:.3f} km")
    return ReplayResult(
        summary=summary,
        agent_summary=summarize_trip(run.samples),
        samples=run.samples,
        stats=uplink.stats(),
        ready=ready,
        cycles=run.cycles,
        skipped=run.skipped,
        store=store,
        vehicle_id=vehicle_id,
    )
