"""
Command/reply link to an ELM327 (real adapter or emulator).

A transport moves bytes; ElmLink turns one command into one reply by
waiting for the '>' prompt and peeling off the echo.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import serial

from .errors import HandshakeTimeout, ReplyTimeout

logger = logging.getLogger(__name__)

PROMPT = b'>'


class SerialTransport:
    """pyserial port: a device path, a pty, or socket://host:port"""

    def __init__(self, url: str, baudrate: int = 38400):
        self.url = url
        try:
            self._port = serial.serial_for_url(url, baudrate=baudrate, timeout=1.0)
        except (serial.SerialException, OSError, ValueError) as e:
            raise HandshakeTimeout(f'cannot open {url}: {e}') from None
        self._port.reset_input_buffer()

    def write(self, data: bytes):
        self._port.write(data)
        self._port.flush()

    def read_until_prompt(self, timeout: float) -> bytes:
        self._port.timeout = timeout
        return self._port.read_until(PROMPT)

    def close(self):
        self._port.close()


class LoopbackTransport:
    """
    In-process transport feeding an emulator session directly. With no
    session (adapter unplugged) reads come back empty.
    """

    def __init__(self, session=None):
        self.session = session
        self._pending = bytearray()

    def write(self, data: bytes):
        if self.session is None:
            return
        for line in data.decode('ascii').split('\r')[:-1]:
            self._pending += self.session.handle(line + '\r').encode('ascii')

    def read_until_prompt(self, timeout: float) -> bytes:
        end = self._pending.find(PROMPT)
        if end < 0:
            data, self._pending = bytes(self._pending), bytearray()
            return data
        data = bytes(self._pending[:end + 1])
        del self._pending[:end + 1]
        return data

    def close(self):
        self.session = None


@dataclass(frozen=True)
class Exchange:
    command: str
    raw_reply: str

    @property
    def lines(self) -> List[str]:
        return [line.strip() for line in self.raw_reply.rstrip('>').split('\r') if line.strip()]

    @property
    def body(self) -> str:
        """Reply text without the echoed command, CRs or prompt"""
        lines = self.lines
        if lines and lines[0].replace(' ', '').upper() == self.command.replace(' ', '').upper():
            lines = lines[1:]
        return '\r'.join(lines)


class ElmLink:

    def __init__(self, transport):
        self.transport = transport
        self.exchanges: List[Exchange] = []

    def command(self, text: str, timeout: float) -> Exchange:
        """
        Send one command and wait for its prompt.

        Raises:
            ReplyTimeout: no '>' within timeout
        """
        self.transport.write((text + '\r').encode('ascii'))
        raw = self.transport.read_until_prompt(timeout)
        if not raw.endswith(PROMPT):
            raise ReplyTimeout(f'no prompt after {text!r} within {timeout:g} s')
        exchange = Exchange(text, raw.decode('ascii', errors='replace'))
        self.exchanges.append(exchange)
        logger.debug(f"{text} -> {exchange.body!r}")
        return exchange

    def close(self):
        self.transport.close()


def open_link(address: str, baudrate: int = 38400, session: Optional[object] = None) -> ElmLink:
    if session is not None:
        return ElmLink(LoopbackTransport(session))
    return ElmLink(SerialTransport(address, baudrate))
