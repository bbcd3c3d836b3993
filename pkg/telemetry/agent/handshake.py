"""
Adapter bring-up.

The reader resets the interpreter, selects automatic protocol search,
switches echo and spaces off and finally asks for the supported PIDs,
which forces the protocol search to complete:

    ATZ    -> ELM327 v1.4b
    ATSP0  -> OK
    ATE0   -> OK
    ATFE   -> OK
    ATS0   -> OK
    0100   -> 410000090000
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List

from obd.codec import (
    CodecError,
    NoData,
    ObdRequest,
    Pid,
    decode_supported_pids,
    parse_response,
)

from .errors import HandshakeTimeout, ReplyTimeout, UnexpectedReply
from .link import ElmLink, Exchange

logger = logging.getLogger(__name__)

INIT_SEQUENCE = ('ATZ', 'ATSP0', 'ATE0', 'ATFE', 'ATS0', '0100')
VERSION_MARKER = 'ELM327'
SEARCH_ATTEMPTS = 3
REQUIRED_PIDS = (Pid.SPEED, Pid.MAF)


@dataclass(frozen=True)
class ReadyState:
    """What the handshake negotiated"""
    version: str
    supported_pids: FrozenSet[int]
    transcript: List[Exchange]
    echo_enabled: bool = False
    spaces_enabled: bool = False

    @property
    def commands(self) -> List[str]:
        return [exchange.command for exchange in self.transcript]


def _send(link: ElmLink, command: str, timeout: float) -> Exchange:
    try:
        return link.command(command, timeout)
    except ReplyTimeout as e:
        raise HandshakeTimeout(str(e)) from None


def _search_protocol(link: ElmLink, timeout: float, transcript: List[Exchange]) -> FrozenSet[int]:
    request = ObdRequest.current(Pid.SUPPORTED_PIDS)
    last_reply = ''
    for attempt in range(1, SEARCH_ATTEMPTS + 1):
        exchange = _send(link, '0100', timeout)
        transcript.append(exchange)
        last_reply = exchange.body
        try:
            return decode_supported_pids(parse_response(exchange.body.split('\r')[-1], request))
        except NoData:
            logger.debug(f"0100 attempt {attempt}: no data yet")
        except CodecError as e:
            logger.debug(f"0100 attempt {attempt}: {e}")
    raise UnexpectedReply('0100', last_reply, 'a supported-PID bitmap')


def initialize(link: ElmLink, timeout: float) -> ReadyState:
    """
    Run the bring-up sequence, each command awaited to its prompt.

    Raises:
        HandshakeTimeout: a command got no prompt within timeout
        UnexpectedReply: wrong version string, non-OK AT reply, or no
            usable supported-PID answer after SEARCH_ATTEMPTS tries
    """
    transcript: List[Exchange] = []

    reset = _send(link, 'ATZ', timeout)
    transcript.append(reset)
    if VERSION_MARKER not in reset.body:
        raise UnexpectedReply('ATZ', reset.body, f'a {VERSION_MARKER} version string')

    for command in INIT_SEQUENCE[1:-1]:
        exchange = _send(link, command, timeout)
        transcript.append(exchange)
        if exchange.body != 'OK':
            raise UnexpectedReply(command, exchange.body, 'OK')

    supported = _search_protocol(link, timeout, transcript)
    missing = [pid for pid in REQUIRED_PIDS if pid not in supported]
    if missing:
        names = ', '.join(f'{pid:02X}' for pid in missing)
        raise UnexpectedReply('0100', transcript[-1].body, f'PIDs {names} to be supported')

    logger.info(f"Adapter ready: {reset.body}, PIDs {sorted(supported)}")
    return ReadyState(reset.body, supported, transcript)
