import logging
import threading
from typing import Callable, Optional

import serial

from obd.nmea import GeoFix, NmeaError, WrongSentenceType, parse_gll

logger = logging.getLogger(__name__)


class NmeaReader:
    """
    Keeps the latest GLL fix seen on an NMEA stream.

    Lines arrive either pushed via feed_line() (a background serial reader
    does this) or pulled from `source` each time latest() is called.
    Sentences that fail to parse are counted and ignored.
    """

    def __init__(self, source: Optional[Callable[[], Optional[str]]] = None):
        self._source = source
        self._latest: Optional[GeoFix] = None
        self._lock = threading.Lock()
        self.rejected = 0
        self._thread = None
        self._stop = threading.Event()

    def feed_line(self, line: str) -> Optional[GeoFix]:
        line = line.strip()
        if not line:
            return None
        try:
            fix = parse_gll(line)
        except WrongSentenceType:
            return None
        except NmeaError as e:
            self.rejected += 1
            logger.debug(f"Ignoring NMEA sentence {line!r}: {e}")
            return None
        with self._lock:
            self._latest = fix
        return fix

    def latest(self) -> Optional[GeoFix]:
        if self._source is not None:
            sentence = self._source()
            if sentence:
                self.feed_line(sentence)
        with self._lock:
            return self._latest

    def start(self, url: str, baudrate: int = 9600):
        """Read sentences from a serial port (or socket://) on a daemon thread"""
        port = serial.serial_for_url(url, baudrate=baudrate, timeout=1.0)
        self._thread = threading.Thread(target=self._read_port, args=(port,), name='nmea-reader', daemon=True)
        self._thread.start()
        logger.info(f"Reading NMEA from {url}")

    def stop(self):
        self._stop.set()
        if self._thread:
            self._thread.join(timeout=2.0)

    def _read_port(self, port):
        try:
            while not self._stop.is_set():
                raw = port.readline()
                if raw:
                    self.feed_line(raw.decode('ascii', errors='replace'))
        except (serial.SerialException, OSError) as e:
            logger.warning(f"NMEA stream ended: {e}")
        finally:
            port.close()
