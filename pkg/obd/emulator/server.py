"""
Byte-stream listeners for the emulator.

TCP mode serves each connection from its own thread with its own session;
serial mode (a device or pseudo-terminal opened through pyserial) serves a
single session until the port closes.
"""

import logging
import socketserver
import threading
import time
from typing import Callable, Optional, Tuple

import serial

from .session import Elm327Session
from .state import ScriptedEcu

logger = logging.getLogger(__name__)

CR = b'\r'
MAX_COMMAND_LENGTH = 64


def read_command(read_byte: Callable[[], bytes]) -> Optional[str]:
    """
    Accumulate bytes up to CR. Returns None at end of stream; LF is ignored
    and commands longer than MAX_COMMAND_LENGTH are truncated.
    """
    buffer = bytearray()
    while True:
        byte = read_byte()
        if not byte:
            return None if not buffer else buffer.decode('ascii', errors='replace')
        if byte == CR:
            return buffer.decode('ascii', errors='replace')
        if byte == b'\n':
            continue
        if len(buffer) < MAX_COMMAND_LENGTH:
            buffer += byte


def serve_stream(session: Elm327Session, read_byte: Callable[[], bytes],
                 write: Callable[[bytes], object]) -> int:
    """Run command/reply exchanges until the peer goes away; returns the number handled"""
    handled = 0
    while True:
        command = read_command(read_byte)
        if command is None:
            return handled
        write(session.handle(command + '\r').encode('ascii', errors='replace'))
        handled += 1


class Elm327RequestHandler(socketserver.StreamRequestHandler):

    def handle(self):
        peer = '%s:%s' % self.client_address[:2]
        session = Elm327Session(self.server.ecu, self.server.clock)
        logger.debug(f"Emulator connection from {peer}")
        try:
            handled = serve_stream(session, lambda: self.rfile.read(1), self._write)
        except (ConnectionError, OSError) as e:
            logger.debug(f"Emulator connection {peer} dropped: {e}")
            return
        logger.debug(f"Emulator connection {peer} closed after {handled} commands")

    def _write(self, data: bytes):
        self.wfile.write(data)
        self.wfile.flush()


class Elm327TCPServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: Tuple[str, int], ecu: ScriptedEcu,
                 clock: Callable[[], float] = time.monotonic):
        self.ecu = ecu
        self.clock = clock
        super().__init__(address, Elm327RequestHandler)


def start_tcp_emulator(address: Tuple[str, int], ecu: ScriptedEcu,
                       clock: Callable[[], float] = time.monotonic) -> Elm327TCPServer:
    """Bind and serve from a daemon thread; port 0 picks a free port"""
    server = Elm327TCPServer(address, ecu, clock)
    thread = threading.Thread(target=server.serve_forever, name='elm327-emulator', daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    logger.info(f"ELM327 emulator listening on {host}:{port} ({ecu.protocol.value})")
    return server


def serve_serial(url: str, ecu: ScriptedEcu, baudrate: int = 38400,
                 clock: Callable[[], float] = time.monotonic) -> int:
    """
    Serve one session on a serial device or pty. The baud rate is passed to
    the port but never simulated in reply timing.
    """
    port = serial.serial_for_url(url, baudrate=baudrate, timeout=None)
    logger.info(f"ELM327 emulator on serial port {url} at {baudrate} bps ({ecu.protocol.value})")
    session = Elm327Session(ecu, clock)
    try:
        return serve_stream(session, lambda: port.read(1), port.write)
    finally:
        port.close()


def parse_listen(value: str) -> Tuple[str, int]:
    """'host:port' or ':port' -> (host, port)"""
    host, sep, port = value.rpartition(':')
    if not sep or not port.isdigit():
        raise ValueError(f'expected host:port, got {value!r}')
    return host or '127.0.0.1', int(port)


def is_tcp_listen(value: str) -> bool:
    try:
        parse_listen(value)
    except ValueError:
        return False
    return not value.startswith('/')
