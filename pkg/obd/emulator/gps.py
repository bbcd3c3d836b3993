"""
GPS module stand-in: GLL sentences from the scenario's scripted fixes.
"""

import bisect
import logging
import socketserver
import threading
import time
from typing import Callable, Optional, Tuple

from obd.nmea import render_gll

from .scenario import Scenario, scenario_time

logger = logging.getLogger(__name__)


class GpsFeed:
    """The most recent scripted fix at or before a scenario time, as a sentence"""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self._fixes = [(tick.t, tick.gll) for tick in scenario.ticks if tick.gll is not None]
        self._times = [t for t, _ in self._fixes]

    @property
    def has_fixes(self) -> bool:
        return bool(self._fixes)

    def sentence_at(self, t: float) -> Optional[str]:
        if not self._fixes:
            return None
        index = bisect.bisect_right(self._times, scenario_time(self.scenario, t)) - 1
        if index < 0:
            return None
        return render_gll(self._fixes[index][1])


class NmeaStreamHandler(socketserver.StreamRequestHandler):
    """Writes one sentence per interval, CRLF terminated, until the client leaves"""

    def handle(self):
        server = self.server
        started = server.clock()
        while not server.stopping.is_set():
            sentence = server.feed.sentence_at(max(server.clock() - started, 0.0))
            if sentence:
                try:
                    self.wfile.write((sentence + '\r\n').encode('ascii'))
                    self.wfile.flush()
                except OSError:
                    return
            server.stopping.wait(server.interval)


class NmeaTCPServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: Tuple[str, int], feed: GpsFeed, interval: float = 1.0,
                 clock: Callable[[], float] = time.monotonic):
        self.feed = feed
        self.interval = interval
        self.clock = clock
        self.stopping = threading.Event()
        super().__init__(address, NmeaStreamHandler)

    def shutdown(self):
        self.stopping.set()
        super().shutdown()


def start_nmea_feed(address: Tuple[str, int], feed: GpsFeed, interval: float = 1.0) -> NmeaTCPServer:
    server = NmeaTCPServer(address, feed, interval)
    threading.Thread(target=server.serve_forever, name='nmea-feed', daemon=True).start()
    host, port = server.server_address[:2]
    logger.info(f"NMEA GLL feed on {host}:{port}, every {interval:g} s")
    return server
