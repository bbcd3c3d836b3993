"""
Tests for the reader agent: bring-up, polling, buffering and the uplink
"""

import json
import random

from django.test import SimpleTestCase, override_settings

from obd.emulator.scenario import Scenario, ScenarioTick
from obd.emulator.session import Elm327Session
from obd.emulator.state import ScriptedEcu
from obd.nmea import FixStatus
from telemetry.agent import (
    INIT_SEQUENCE,
    AgentConfig,
    ElmLink,
    FaultInjectingConnector,
    HandshakeTimeout,
    InProcessUplinkConnection,
    LoopbackTransport,
    NmeaReader,
    PidReadError,
    ReconnectStrategy,
    SampleBuffer,
    TelemetryAgent,
    TransmitResult,
    UnexpectedReply,
    Uplink,
    initialize,
)
from telemetry.clock import ManualClock
from telemetry.metrics import FuelModel, integrate_distance
from telemetry.samples import TelemetrySample


def constant(speed, maf=3.80):
    return Scenario((ScenarioTick(0, speed, maf),))


class RecordingServer:
    """Ingest stand-in: acknowledges every record once, remembers the order"""

    def __init__(self, reject=()):
        self.seqs = []
        self.reject = set(reject)

    def __call__(self, line):
        if line.strip() == 'PING':
            return 'PONG\n'
        seq = json.loads(line)['seq']
        if seq in self.reject:
            return 'NAK\n'
        if seq not in self.seqs:
            self.seqs.append(seq)
        return f'ACK {seq}\n'


class ScriptedReplies:
    """Adapter stand-in answering from a command -> replies table"""

    def __init__(self, replies):
        self.replies = {command: list(answers) for command, answers in replies.items()}
        self.commands = []

    def handle(self, line):
        command = line.strip()
        self.commands.append(command)
        answers = self.replies.get(command, ['?'])
        body = answers.pop(0) if len(answers) > 1 else answers[0]
        return f'{body}\r\r>'


def sample(seq):
    return TelemetrySample('car-1', seq, seq * 1000, 10, 5.15, 0.1, seq / 360)


def build_agent(scenario, clock=None, server=None, capacity=3600, session=None, gps=None):
    clock = clock or ManualClock(epoch_ms=1_000_000)
    session = session or Elm327Session(ScriptedEcu(scenario), clock)
    server = server or RecordingServer()
    connector = FaultInjectingConnector(lambda: InProcessUplinkConnection(server))
    uplink = Uplink(connector, SampleBuffer(capacity), clock, ReconnectStrategy(rng=random.Random(1)))
    config = AgentConfig(vehicle_id='car-1', buffer_capacity=capacity)
    agent = TelemetryAgent(config, ElmLink(LoopbackTransport(session)), uplink, clock, gps)
    return agent, server, connector, session


class HandshakeTestCase(SimpleTestCase):

    def test_transcript_against_emulator(self):
        session = Elm327Session(ScriptedEcu(constant(0)), ManualClock())
        ready = initialize(ElmLink(LoopbackTransport(session)), timeout=1.0)

        self.assertEqual(session.commands, list(INIT_SEQUENCE))
        self.assertEqual(ready.commands, ['ATZ', 'ATSP0', 'ATE0', 'ATFE', 'ATS0', '0100'])
        self.assertIn('ELM327 v1.4b', ready.transcript[0].raw_reply)
        self.assertEqual(ready.version, 'ELM327 v1.4b')
        for exchange in ready.transcript:
            self.assertTrue(exchange.raw_reply.endswith('>'))
        self.assertEqual(ready.transcript[-1].raw_reply, '410000090000\r\r>')
        self.assertFalse(ready.echo_enabled)
        self.assertFalse(ready.spaces_enabled)
        self.assertFalse(session.state.echo_enabled)
        self.assertFalse(session.state.spaces_enabled)
        self.assertTrue(session.state.protocol_locked)

    def test_no_adapter(self):
        with self.assertRaises(HandshakeTimeout):
            initialize(ElmLink(LoopbackTransport(None)), timeout=0.1)

    def test_reset_without_version_string(self):
        adapter = ScriptedReplies({'ATZ': ['OK']})
        with self.assertRaisesMessage(UnexpectedReply, 'ATZ'):
            initialize(ElmLink(LoopbackTransport(adapter)), timeout=0.1)

    def test_at_command_not_ok(self):
        adapter = ScriptedReplies({'ATZ': ['ELM327 v1.4b'], 'ATSP0': ['OK'], 'ATE0': ['?']})
        with self.assertRaises(UnexpectedReply) as raised:
            initialize(ElmLink(LoopbackTransport(adapter)), timeout=0.1)
        self.assertEqual(raised.exception.command, 'ATE0')

    def test_protocol_search_is_retried(self):
        replies = {command: ['OK'] for command in INIT_SEQUENCE[1:-1]}
        replies['ATZ'] = ['ELM327 v1.4b']
        replies['0100'] = ['SEARCHING...\rNO DATA', 'NO DATA', '410000090000']
        adapter = ScriptedReplies(replies)
        ready = initialize(ElmLink(LoopbackTransport(adapter)), timeout=0.1)
        self.assertEqual(adapter.commands.count('0100'), 3)
        self.assertEqual(ready.supported_pids, frozenset({0x0D, 0x10}))

    def test_protocol_search_gives_up(self):
        replies = {command: ['OK'] for command in INIT_SEQUENCE[1:-1]}
        replies['ATZ'] = ['ELM327 v1.4b']
        replies['0100'] = ['NO DATA']
        adapter = ScriptedReplies(replies)
        with self.assertRaises(UnexpectedReply):
            initialize(ElmLink(LoopbackTransport(adapter)), timeout=0.1)
        self.assertEqual(adapter.commands.count('0100'), 3)

    def test_required_pids_missing(self):
        replies = {command: ['OK'] for command in INIT_SEQUENCE[1:-1]}
        replies['ATZ'] = ['ELM327 v1.4b']
        replies['0100'] = ['410000080000']
        with self.assertRaisesMessage(UnexpectedReply, '10'):
            initialize(ElmLink(LoopbackTransport(ScriptedReplies(replies))), timeout=0.1)


class PollCycleTestCase(SimpleTestCase):

    def test_speed_maf_and_fuel(self):
        agent, _, _, _ = build_agent(constant(50, 3.80))
        agent.initialize()
        sample = agent.poll_cycle()
        self.assertEqual((sample.seq, sample.speed_kmh, sample.maf_gs), (1, 50, 3.80))
        self.assertEqual(float(f'{sample.fuel_l_per_km:.4g}'), 0.02270)
        self.assertEqual(sample.timestamp, 1_000_000)
        self.assertIsNone(sample.fix)

    def test_standing_still(self):
        agent, _, _, _ = build_agent(constant(0, 4.15))
        agent.initialize()
        first, second = agent.poll_cycle(), agent.poll_cycle()
        self.assertIsNone(first.fuel_l_per_km)
        self.assertEqual(second.cumulative_distance_km, 0.0)
        self.assertEqual(second.seq, 2)

    def test_distance_per_cycle(self):
        agent, _, _, _ = build_agent(constant(36))
        agent.initialize()
        first, second = agent.poll_cycle(), agent.poll_cycle()
        self.assertAlmostEqual(second.cumulative_distance_km - first.cumulative_distance_km, 0.01)

    def test_needs_initialize(self):
        agent, _, _, _ = build_agent(constant(10))
        with self.assertRaises(PidReadError):
            agent.poll_cycle()

    def test_gps_fix_is_attached(self):
        sentence = '$GPGLL,4916.45,N,12311.12,W,225444,A*31'
        agent, _, _, _ = build_agent(constant(10), gps=NmeaReader(source=lambda: sentence))
        agent.initialize()
        fix = agent.poll_cycle().fix
        self.assertAlmostEqual(fix.latitude, 49.27417, places=5)
        self.assertIs(fix.status, FixStatus.VALID)


class FlakySession(Elm327Session):
    """Loses the MAF reply on the listed MAF requests"""

    def __init__(self, *args, lose=(), **kwargs):
        super().__init__(*args, **kwargs)
        self.lose = set(lose)
        self.maf_requests = 0

    def handle(self, line):
        reply = super().handle(line)
        if line.strip() == '0110':
            self.maf_requests += 1
            if self.maf_requests in self.lose:
                return 'NO DATA\r\r>'
        return reply


class RunTestCase(SimpleTestCase):

    def test_cadence(self):
        ticks = tuple(ScenarioTick(t, t % 60, 4.15 + 0.1 * (t % 60)) for t in range(30))
        agent, server, _, _ = build_agent(Scenario(ticks))
        result = agent.run(cycles=30, keep_samples=True)

        self.assertEqual(result.cycles, 30)
        self.assertEqual(len(result.samples), 30)
        self.assertEqual([s.speed_kmh for s in result.samples], [t % 60 for t in range(30)])
        self.assertEqual({b.timestamp - a.timestamp for a, b in zip(result.samples, result.samples[1:])}, {1000})
        self.assertEqual(server.seqs, list(range(1, 31)))

        distance = 0.0
        for s in result.samples:
            distance = integrate_distance(distance, s.speed_kmh, 1.0)
            self.assertAlmostEqual(s.cumulative_distance_km, distance, delta=1e-12)

    def test_failed_read_skips_the_sample(self):
        clock = ManualClock()
        session = FlakySession(ScriptedEcu(constant(36)), clock, lose={3})
        agent, server, _, _ = build_agent(None, clock=clock, session=session)
        result = agent.run(cycles=5, keep_samples=True)

        self.assertEqual(result.skipped, 1)
        self.assertEqual([s.seq for s in result.samples], [1, 2, 3, 4])
        self.assertAlmostEqual(result.samples[-1].cumulative_distance_km, 0.04)
        self.assertEqual(server.seqs, [1, 2, 3, 4])

    def test_threaded_uplink(self):
        agent, server, _, _ = build_agent(constant(20))
        result = agent.run(cycles=20, threaded=True)
        self.assertEqual(result.stats.acked, 20)
        self.assertEqual(result.stats.buffered, 0)
        self.assertEqual(server.seqs, list(range(1, 21)))

    def test_link_cut_for_ten_cycles(self):
        agent, server, connector, _ = build_agent(constant(30), capacity=100)

        def cut(cycle):
            connector.down = 20 <= cycle < 30

        result = agent.run(cycles=100, before_cycle=cut)
        self.assertEqual(server.seqs, list(range(1, 101)))
        self.assertEqual(result.stats.outages, 1)
        self.assertEqual(result.stats.dropped, 0)


class BufferTestCase(SimpleTestCase):

    def test_fifo_with_eviction(self):
        buffer = SampleBuffer(3)
        for seq in range(1, 6):
            buffer.put(sample(seq))
        self.assertEqual([s.seq for s in buffer.snapshot()], [3, 4, 5])
        self.assertEqual(buffer.dropped, 2)
        self.assertFalse(buffer.pop_acked(4))
        self.assertTrue(buffer.pop_acked(3))
        self.assertEqual(buffer.peek().seq, 4)
        self.assertEqual(len(buffer), 2)

    def test_capacity(self):
        with self.assertRaises(ValueError):
            SampleBuffer(0)

    def test_wait(self):
        buffer = SampleBuffer(1)
        self.assertFalse(buffer.wait(0.01))
        buffer.put(sample(1))
        self.assertTrue(buffer.wait(0.01))


class UplinkTestCase(SimpleTestCase):

    def setUp(self):
        self.clock = ManualClock()
        self.server = RecordingServer(reject={2})
        self.connector = FaultInjectingConnector(lambda: InProcessUplinkConnection(self.server))

    def make_uplink(self, capacity=100):
        return Uplink(self.connector, SampleBuffer(capacity), self.clock, ReconnectStrategy(rng=random.Random(3)))

    def test_connected(self):
        uplink = self.make_uplink()
        self.assertIs(uplink.transmit(sample(1)), TransmitResult.ACKED)
        self.assertEqual(len(uplink.buffer), 0)
        self.assertTrue(uplink.is_link_alive())

    def test_rejected_record_is_not_retried(self):
        uplink = self.make_uplink()
        for seq in (1, 2, 3):
            uplink.transmit(sample(seq))
        stats = uplink.stats()
        self.assertEqual((stats.acked, stats.rejected, stats.buffered), (2, 1, 0))
        self.assertEqual(self.server.seqs, [1, 3])

    def test_buffer_overflow_while_down(self):
        uplink = self.make_uplink(capacity=10)
        self.connector.down = True
        for seq in range(1, 16):
            self.assertIs(uplink.transmit(sample(seq)), TransmitResult.BUFFERED)
            self.clock.advance(1.0)
        self.assertFalse(uplink.is_link_alive())
        self.assertEqual(uplink.stats().dropped, 5)

        self.connector.down = False
        uplink.flush(force=True)
        self.assertEqual(self.server.seqs, list(range(6, 16)))
        self.assertEqual(uplink.stats().buffered, 0)

    def test_backoff_after_loss(self):
        uplink = self.make_uplink()
        uplink.transmit(sample(1))
        self.connector.down = True
        self.assertIs(uplink.transmit(sample(3)), TransmitResult.BUFFERED)
        self.assertFalse(uplink.alive)
        self.assertEqual(uplink.stats().outages, 1)

        self.connector.down = False
        self.assertEqual(uplink.flush(), 0)
        self.assertEqual(uplink.flush(force=True), 1)
        self.assertEqual(self.server.seqs, [1, 3])

    def test_unexpected_reply_drops_the_link(self):
        uplink = Uplink(lambda: InProcessUplinkConnection(lambda line: 'HELLO\n'), SampleBuffer(5), self.clock)
        self.assertIs(uplink.transmit(sample(1)), TransmitResult.BUFFERED)
        self.assertEqual(uplink.stats().outages, 1)

    def test_reconnect_delays(self):
        strategy = ReconnectStrategy(initial_delay=1.0, max_delay=30.0, rng=random.Random(5))
        for attempt in range(10):
            base = min(2.0 ** attempt, 30.0)
            delay = strategy.next_delay()
            self.assertGreaterEqual(delay, max(1.0, 0.75 * base))
            self.assertLessEqual(delay, 1.25 * base)
        strategy.reset()
        self.assertLessEqual(strategy.next_delay(), 1.25)


class NmeaReaderTestCase(SimpleTestCase):

    def test_keeps_latest_fix(self):
        reader = NmeaReader()
        self.assertIsNone(reader.latest())
        reader.feed_line('$GPGLL,4916.45,N,12311.12,W,225444,A*31\r\n')
        reader.feed_line('$GPRMC,225444,A,4916.45,N,12311.12,W*2A')
        reader.feed_line('$GPGLL,4916.45,N,12311.12,W,225444,A*32')
        self.assertAlmostEqual(reader.latest().longitude, -123.18533, places=5)
        self.assertEqual(reader.rejected, 1)


class AgentConfigTestCase(SimpleTestCase):

    @override_settings(FLEET_INGEST_LISTEN='10.0.0.2:6000', AGENT_POLL_PERIOD=0.5, AGENT_FUEL='diesel')
    def test_from_settings(self):
        config = AgentConfig.from_settings('car-9')
        self.assertEqual(config.server_address, ('10.0.0.2', 6000))
        self.assertEqual(config.poll_period, 0.5)
        self.assertEqual(config.fuel_model, FuelModel.diesel())
        self.assertEqual(AgentConfig.from_settings('car-9', period=2.0).poll_period, 2.0)

    def test_validation(self):
        with self.assertRaises(ValueError):
            AgentConfig(vehicle_id='')
        with self.assertRaises(ValueError):
            AgentConfig(vehicle_id='car-1', poll_period=0)
        with self.assertRaises(ValueError):
            AgentConfig(vehicle_id='car-1', buffer_capacity=0)
