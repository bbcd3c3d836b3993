"""
Store-and-forward uplink to the fleet server.

Samples go into the SampleBuffer first and leave it only when the server
answers `ACK <seq>`, so a dead link just lets the buffer fill. While the
link is down, reconnects are attempted on an exponential backoff with
jitter; on success the buffer drains oldest first, ahead of new samples.
"""

import logging
import random
import socket
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

from telemetry.samples import TelemetrySample

from .buffer import SampleBuffer
from .errors import LinkDown

logger = logging.getLogger(__name__)

PING = 'PING'
PONG = 'PONG'


class TransmitResult(str, Enum):
    ACKED = 'ack'
    BUFFERED = 'buffered'


class ReconnectStrategy:
    """Exponential backoff, +/-25% jitter, never below the initial delay"""

    def __init__(self, initial_delay: float = 1.0, max_delay: float = 30.0,
                 backoff_factor: float = 2.0, rng: Optional[random.Random] = None):
        self.initial_delay = initial_delay
        self.max_delay = max_delay
        self.backoff_factor = backoff_factor
        self.retry_count = 0
        self._rng = rng or random.Random()

    def next_delay(self) -> float:
        delay = min(self.initial_delay * (self.backoff_factor ** self.retry_count), self.max_delay)
        jitter = delay * 0.25 * self._rng.random()
        delay += jitter if self._rng.random() > 0.5 else -jitter
        self.retry_count += 1
        return max(delay, self.initial_delay)

    def reset(self):
        self.retry_count = 0


class TcpUplinkConnection:
    """Newline-delimited JSON over TCP, one reply line per sample"""

    def __init__(self, address: Tuple[str, int], timeout: float):
        try:
            self._sock = socket.create_connection(address, timeout=timeout)
        except OSError as e:
            raise LinkDown(f'cannot reach {address[0]}:{address[1]}: {e}') from None
        self._file = self._sock.makefile('rwb')

    def exchange(self, line: str) -> str:
        try:
            self._file.write(line.encode('utf-8'))
            self._file.flush()
            reply = self._file.readline()
        except OSError as e:
            raise LinkDown(str(e) or type(e).__name__) from None
        if not reply:
            raise LinkDown('server closed the connection')
        return reply.decode('utf-8').strip()

    def close(self):
        for closeable in (self._file, self._sock):
            try:
                closeable.close()
            except OSError:
                pass


class InProcessUplinkConnection:
    """Hands lines straight to an ingest handler"""

    def __init__(self, handler: Callable[[str], str]):
        self._handler = handler

    def exchange(self, line: str) -> str:
        return self._handler(line).strip()

    def close(self):
        pass


class FaultInjectingConnector:
    """
    Wraps a connector; while `down` is set, connecting and every exchange
    on connections it produced fail with LinkDown.
    """

    def __init__(self, connector: Callable[[], object]):
        self._connector = connector
        self.down = False

    def __call__(self):
        if self.down:
            raise LinkDown('link out of range')
        return _GuardedConnection(self._connector(), self)


class _GuardedConnection:

    def __init__(self, inner, injector: FaultInjectingConnector):
        self._inner = inner
        self._injector = injector

    def exchange(self, line: str) -> str:
        if self._injector.down:
            raise LinkDown('link out of range')
        return self._inner.exchange(line)

    def close(self):
        self._inner.close()


@dataclass(frozen=True)
class LinkStats:
    sent: int
    acked: int
    rejected: int
    buffered: int
    dropped: int
    outages: int


class Uplink:

    def __init__(self, connector: Callable[[], object], buffer: SampleBuffer,
                 clock: Callable[[], float], backoff: Optional[ReconnectStrategy] = None):
        self.connector = connector
        self.buffer = buffer
        self.clock = clock
        self.backoff = backoff or ReconnectStrategy()
        self._connection = None
        self._retry_at = 0.0
        self._lock = threading.RLock()
        self.sent = 0
        self.acked = 0
        self.rejected = 0
        self.outages = 0

    @property
    def alive(self) -> bool:
        return self._connection is not None

    def stats(self) -> LinkStats:
        return LinkStats(self.sent, self.acked, self.rejected, len(self.buffer),
                         self.buffer.dropped, self.outages)

    def transmit(self, sample: TelemetrySample) -> TransmitResult:
        self.buffer.put(sample)
        self.flush()
        buffered = any(s.seq == sample.seq for s in self.buffer.snapshot())
        return TransmitResult.BUFFERED if buffered else TransmitResult.ACKED

    def flush(self, force: bool = False) -> int:
        """
        Send buffered samples head first until the buffer is empty or the
        link fails. `force` ignores the backoff schedule. Returns the number
        of samples acknowledged.
        """
        with self._lock:
            if not self._connection and not self._connect(force):
                return 0
            acked = 0
            while (sample := self.buffer.peek()) is not None:
                try:
                    reply = self._connection.exchange(sample.to_line())
                except LinkDown as e:
                    self._lost(e)
                    return acked
                self.sent += 1

                if reply == f'ACK {sample.seq}':
                    if self.buffer.pop_acked(sample.seq):
                        acked += 1
                        self.acked += 1
                elif reply.startswith('NAK'):
                    logger.warning(f"Server rejected seq {sample.seq}: {reply}")
                    self.buffer.pop_acked(sample.seq)
                    self.rejected += 1
                else:
                    self._lost(LinkDown(f'unexpected reply {reply!r} to seq {sample.seq}'))
                    return acked
            return acked

    def is_link_alive(self) -> bool:
        """PING/PONG probe; a failed probe marks the link dead"""
        with self._lock:
            if not self._connection and not self._connect(force=True):
                return False
            try:
                reply = self._connection.exchange(PING + '\n')
            except LinkDown as e:
                self._lost(e)
                return False
            return reply == PONG

    def run(self, stop: threading.Event, idle_wait: float = 0.2):
        """Consumer loop for threaded operation; drains until `stop` is set"""
        while not stop.is_set():
            if self.buffer.wait(idle_wait):
                self.flush()
                if len(self.buffer) and not self.alive:
                    stop.wait(idle_wait)

    def close(self):
        with self._lock:
            if self._connection:
                self._connection.close()
                self._connection = None

    def _connect(self, force: bool) -> bool:
        if not force and self.clock() < self._retry_at:
            return False
        try:
            self._connection = self.connector()
        except LinkDown as e:
            delay = self.backoff.next_delay()
            self._retry_at = self.clock() + delay
            logger.debug(f"Uplink connect failed ({e}); retry in {delay:.1f} s")
            return False
        if self.backoff.retry_count:
            logger.info(f"Uplink reconnected, {len(self.buffer)} samples to flush")
        self.backoff.reset()
        return True

    def _lost(self, error: LinkDown):
        if self._connection:
            self._connection.close()
        self._connection = None
        self.outages += 1
        delay = self.backoff.next_delay()
        self._retry_at = self.clock() + delay
        logger.warning(f"Uplink lost: {error}; {len(self.buffer)} buffered, retry in {delay:.1f} s")
