import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from obd.codec import (
    CodecError,
    ObdRequest,
    Pid,
    decode_maf,
    decode_speed,
    parse_response,
)
from telemetry.metrics import fuel_consumption, integrate_distance
from telemetry.samples import TelemetrySample

from .config import AgentConfig
from .errors import PidReadError, ReplyTimeout
from .handshake import ReadyState, initialize
from .link import ElmLink
from .uplink import LinkStats, TransmitResult, Uplink

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    cycles: int = 0
    skipped: int = 0
    samples: List[TelemetrySample] = field(default_factory=list)
    stats: Optional[LinkStats] = None


class TelemetryAgent:
    """
    The reader's control loop: poll speed and MAF (and the GPS if there is
    one) every poll_period, derive fuel consumption and distance, and hand
    each sample to the uplink.
    """

    def __init__(self, config: AgentConfig, link: ElmLink, uplink: Uplink,
                 clock: Callable[[], float], gps=None):
        self.config = config
        self.link = link
        self.uplink = uplink
        self.clock = clock
        self.gps = gps
        self.ready: Optional[ReadyState] = None
        self.seq = 0
        self.distance_km = 0.0

    def initialize(self) -> ReadyState:
        self.ready = initialize(self.link, self.config.handshake_timeout)
        return self.ready

    def _read_pid(self, pid: Pid):
        request = ObdRequest.current(pid)
        try:
            exchange = self.link.command(f'{request.mode:02X}{request.pid:02X}', self.config.handshake_timeout)
            return parse_response(exchange.body.split('\r')[-1], request)
        except (CodecError, ReplyTimeout) as e:
            raise PidReadError(f'PID {request.pid:02X}: {e}') from e

    def _timestamp_ms(self) -> int:
        return getattr(self.clock, 'epoch_ms', 0) + round(self.clock() * 1000)

    def poll_cycle(self) -> TelemetrySample:
        """
        One sampling cycle.

        Raises:
            PidReadError: speed or MAF could not be read; nothing changes
        """
        if self.ready is None:
            raise PidReadError('adapter not initialized')
        timestamp = self._timestamp_ms()
        try:
            speed = decode_speed(self._read_pid(Pid.SPEED))
            maf = decode_maf(self._read_pid(Pid.MAF))
        except CodecError as e:
            raise PidReadError(str(e)) from e

        fix = self.gps.latest() if self.gps is not None else None
        period = self.config.poll_period
        self.distance_km = integrate_distance(self.distance_km, speed, period)
        self.seq += 1
        return TelemetrySample(
            vehicle_id=self.config.vehicle_id,
            seq=self.seq,
            timestamp=timestamp,
            speed_kmh=speed,
            maf_gs=maf,
            fuel_l_per_km=fuel_consumption(maf, speed, self.config.fuel_model),
            cumulative_distance_km=self.distance_km,
            fix=fix,
            period_s=period,
        )

    def transmit(self, sample: TelemetrySample) -> TransmitResult:
        return self.uplink.transmit(sample)

    def run(self, cycles: Optional[int] = None, stop: Optional[threading.Event] = None,
            threaded: bool = False, keep_samples: bool = False,
            before_cycle: Optional[Callable[[int], None]] = None) -> RunResult:
        """
        Poll until `cycles` have run or `stop` is set, then force a final
        flush. With `threaded` the uplink drains the buffer from its own
        thread and the poll loop never waits on the network.
        """
        if self.ready is None:
            self.initialize()
        stop = stop or threading.Event()
        sleep = getattr(self.clock, 'sleep', None) or stop.wait
        result = RunResult()

        uplink_stop = threading.Event()
        uplink_thread = None
        if threaded:
            uplink_thread = threading.Thread(target=self.uplink.run, args=(uplink_stop,),
                                             name='uplink', daemon=True)
            uplink_thread.start()

        try:
            while not stop.is_set() and (cycles is None or result.cycles < cycles):
                if before_cycle is not None:
                    before_cycle(result.cycles)
                started = self.clock()
                result.cycles += 1
                try:
                    sample = self.poll_cycle()
                except PidReadError as e:
                    result.skipped += 1
                    logger.warning(f"Skipping cycle {result.cycles}: {e}")
                else:
                    if keep_samples:
                        result.samples.append(sample)
                    if threaded:
                        self.uplink.buffer.put(sample)
                    else:
                        self.transmit(sample)
                remaining = started + self.config.poll_period - self.clock()
                if remaining > 0:
                    sleep(remaining)
        finally:
            if uplink_thread is not None:
                uplink_stop.set()
                uplink_thread.join(timeout=5.0)
            self.uplink.flush(force=True)
            result.stats = self.uplink.stats()
            logger.info(
                f"Agent {self.config.vehicle_id}: {result.cycles} cycles, {result.skipped} skipped, "
                f"{result.stats.acked} acked, {result.stats.buffered} still buffered"
            )
        return result
