"""
Ingest line protocol.

    agent -> server   {"vehicle_id": ..., "seq": 7, ...}\n
    server -> agent   ACK 7\n      stored (or already stored)
                      NAK\n        unparseable record; the connection stays up
    agent -> server   PING\n
    server -> agent   PONG\n

When storage fails no reply is sent and the connection is closed, so the
agent keeps the sample buffered and resends it.
"""

import logging
import socketserver
import threading
import time
from typing import Callable, Optional, Tuple

from django.db import close_old_connections

from telemetry.samples import SampleFormatError, TelemetrySample

from fleet.errors import MalformedRecord, StorageFailure
from fleet.store.base import SampleStore, StoredSample

logger = logging.getLogger(__name__)

ACK = 'ACK'
NAK = 'NAK'
PING = 'PING'
PONG = 'PONG'
MAX_LINE_BYTES = 64 * 1024


def parse_record(line: str) -> TelemetrySample:
    try:
        return TelemetrySample.from_line(line)
    except SampleFormatError as e:
        raise MalformedRecord(str(e)) from None


class IngestService:
    """
    Turns one received line into one reply line.

    `after_persist` runs after the sample is durable and before the ACK is
    produced; the crash-recovery tests use it to die at exactly that point.
    """

    def __init__(self, store: SampleStore, clock: Optional[Callable[[], int]] = None,
                 after_persist: Optional[Callable[[StoredSample], None]] = None):
        self.store = store
        self.clock = clock or (lambda: int(time.time() * 1000))
        self.after_persist = after_persist
        self.stored = 0
        self.duplicates = 0
        self.rejected = 0

    def ingest(self, line: str) -> int:
        """
        Persist one record; returns its seq once durable.

        Raises:
            MalformedRecord, StorageFailure
        """
        sample = parse_record(line)
        received_at = self.clock()
        if self.store.append(sample, received_at):
            self.stored += 1
        else:
            self.duplicates += 1
            logger.debug(f"Duplicate seq {sample.seq} from {sample.vehicle_id}")
        if self.after_persist is not None:
            self.after_persist(StoredSample(sample, received_at))
        return sample.seq

    def handle_line(self, line: str) -> Optional[str]:
        """Reply for one line, or None when the sample could not be stored"""
        text = line.strip()
        if text == PING:
            return PONG + '\n'
        try:
            seq = self.ingest(text)
        except MalformedRecord as e:
            self.rejected += 1
            logger.warning(f"NAK: {e}")
            return NAK + '\n'
        except StorageFailure as e:
            logger.error(f"Not acknowledging: {e}")
            return None
        return f'{ACK} {seq}\n'


class IngestRequestHandler(socketserver.StreamRequestHandler):

    def handle(self):
        peer = '%s:%s' % self.client_address[:2]
        logger.debug(f"Ingest connection from {peer}")
        try:
            while True:
                raw = self.rfile.readline(MAX_LINE_BYTES)
                if not raw:
                    break
                if not raw.strip():
                    continue
                reply = self.server.service.handle_line(raw.decode('utf-8', errors='replace'))
                if reply is None:
                    break
                self.wfile.write(reply.encode('utf-8'))
                self.wfile.flush()
        except OSError as e:
            logger.debug(f"Ingest connection {peer} dropped: {e}")
        finally:
            close_old_connections()
        logger.debug(f"Ingest connection {peer} closed")


class IngestTCPServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: Tuple[str, int], service: IngestService):
        self.service = service
        super().__init__(address, IngestRequestHandler)


def start_ingest_server(address: Tuple[str, int], service: IngestService) -> IngestTCPServer:
    """Serve from a daemon thread; port 0 picks a free port"""
    server = IngestTCPServer(address, service)
    threading.Thread(target=server.serve_forever, name='fleet-ingest', daemon=True).start()
    host, port = server.server_address[:2]
    logger.info(f"Fleet ingest listening on {host}:{port}")
    return server
